"""Acceptance gate.

Each test checks one release criterion at its stated tolerance and runtime
budget, and prints a single [PASS]/[FAIL] line on the real terminal even
under pytest's output capture. Run with:

    pytest tests/test_acceptance.py -v
"""

import csv
import itertools
import json
import random
import statistics
import time

import numpy as np
import pytest

from pathobench import (
    CORRUPTION_KINDS,
    ConfidenceSequence,
    CorruptionSpec,
    RasterImage,
    apply_corruption,
    build_defocus_kernel,
    build_motion_kernel,
    cec,
    convolve,
    kendall_swaps,
    pearson_r,
    psnr,
    relative_ce,
)
from pathobench.cli import main as cli_main
from pathobench.kernels import ConvolutionKernel

from conftest import oracle_convolve, oracle_swaps, textured_array
from test_metrics import REFERENCE_ROWS, REFERENCE_ROWS_LYMPH


def _verdict(capfd, label, ok, elapsed, budget):
    line = (f"[{'PASS' if ok else 'FAIL'}] {label} "
            f"({elapsed:.2f}s of {budget:.0f}s budget)")
    with capfd.disabled():
        print(line)
    assert ok, line
    assert elapsed < budget, line


def test_acceptance_reference_table_arithmetic(capfd):
    """Printed rCE equals CE/Error within 0.005 for all 13 rows, the two
    quoted lymph-node rows included."""
    t0 = time.perf_counter()
    ok = True
    for name, error, ce, rce in REFERENCE_ROWS:
        ok &= abs(relative_ce(ce, error) - rce) <= 0.005
    for name, error, ce, rce in REFERENCE_ROWS_LYMPH:
        if name in ("alexnet", "vgg16"):
            ok &= abs(relative_ce(ce, error) - rce) <= 0.005
    _verdict(capfd, "reference-table rCE arithmetic (13 rows, tol 0.005)",
             ok, time.perf_counter() - t0, 1.0)


def test_acceptance_corruption_invariants(capfd, desk_corpus):
    """Severity 0 identity, shape preservation, determinism, and 8-bit
    validity for all 9 kinds x 5 severities on the 20-image corpus."""
    t0 = time.perf_counter()
    ok = True
    for img in desk_corpus:
        for kind in CORRUPTION_KINDS:
            clean = apply_corruption(img, CorruptionSpec(kind, 0, seed=5))
            ok &= clean == img and clean.array is not img.array
            for severity in (1, 2, 3, 4, 5):
                spec = CorruptionSpec(kind, severity, seed=5)
                out1 = apply_corruption(img, spec)
                out2 = apply_corruption(img, spec)
                ok &= out1 == out2
                ok &= (out1.height, out1.width) == (img.height, img.width)
                ok &= out1.array.dtype == np.uint8
                ok &= out1.array.flags.c_contiguous
            if not ok:
                break
        if not ok:
            break
    _verdict(capfd, "corruption invariants (45 specs x 20 images)",
             ok, time.perf_counter() - t0, 30.0)


def test_acceptance_monotone_degradation(capfd, desk_corpus):
    """Mean PSNR strictly decreases from severity 1 to 5 for every kind;
    the overlay kinds are averaged over 10 seeds."""
    t0 = time.perf_counter()
    ok = True
    detail = []
    for kind in CORRUPTION_KINDS:
        seeds = range(100, 110) if kind in ("mark", "bubble") else [100]
        means = []
        for severity in (1, 2, 3, 4, 5):
            values = [psnr(img, apply_corruption(
                img, CorruptionSpec(kind, severity, seed=s)))
                for s in seeds for img in desk_corpus]
            means.append(statistics.fmean(values))
        strictly_down = all(a > b for a, b in zip(means, means[1:]))
        ok &= strictly_down
        if not strictly_down:
            detail.append(f"{kind}: {[round(m, 2) for m in means]}")
    label = "monotone PSNR degradation (all kinds)"
    if detail:
        label += " " + "; ".join(detail)
    _verdict(capfd, label, ok, time.perf_counter() - t0, 120.0)


def test_acceptance_oracle_equivalence(capfd):
    """convolve matches nested-loop convolution exactly on 100 random
    16x16 images; kendall_swaps matches discordant-pair counting on all
    720 permutations of 6 distinct values plus 1000 tied sequences."""
    t0 = time.perf_counter()
    ok = True

    kernels = [
        ConvolutionKernel(np.full((3, 3), 1.0 / 9.0)),
        ConvolutionKernel(np.full((5, 5), 1.0 / 25.0)),
        build_defocus_kernel(1),
        build_defocus_kernel(2),
        build_motion_kernel(5, 30.0),
        build_motion_kernel(3, 0.0),
    ]
    for trial in range(100):
        arr = textured_array(5000 + trial, 16, 16)
        kernel = kernels[trial % len(kernels)]
        ours = convolve(RasterImage.from_array(arr), kernel)
        ok &= np.array_equal(ours.array, oracle_convolve(arr, kernel.weights))
        if not ok:
            break

    distinct = [0.05, 0.2, 0.4, 0.6, 0.8, 0.95]
    for perm in itertools.permutations(distinct):
        seq = ConfidenceSequence("s", "jpeg", perm)
        ok &= kendall_swaps(seq) == oracle_swaps(perm)
    rng = random.Random(99)
    for _ in range(1000):
        values = tuple(rng.choice([0.1, 0.25, 0.5, 0.75, 0.9])
                       for _ in range(6))
        seq = ConfidenceSequence("s", "jpeg", values)
        ok &= kendall_swaps(seq) == oracle_swaps(values)

    _verdict(capfd, "oracle equivalence (convolution exact x100, "
             "ranking swaps on 720 permutations + 1000 tied)",
             ok, time.perf_counter() - t0, 60.0)


def test_acceptance_cec_endpoints_and_expectation(capfd):
    """Monotone-decreasing confidence gives CEC 0, increasing gives 1, and
    10,000 i.i.d. uniform sequences give 0.5 within 0.02."""
    t0 = time.perf_counter()
    down = [ConfidenceSequence(f"s{i}", "hue", (0.9, 0.8, 0.6, 0.5, 0.3, 0.1))
            for i in range(10)]
    up = [ConfidenceSequence(f"s{i}", "hue", (0.1, 0.3, 0.5, 0.6, 0.8, 0.9))
          for i in range(10)]
    ok = cec(down) == 0.0 and cec(up) == 1.0

    rng = random.Random(31)
    uniform = [ConfidenceSequence(f"s{i}", "hue",
                                  tuple(rng.random() for _ in range(6)))
               for i in range(10_000)]
    value = cec(uniform)
    ok &= abs(value - 0.5) <= 0.02
    _verdict(capfd, f"CEC endpoints and uniform expectation "
             f"(10k sequences -> {value:.4f}, tol 0.02)",
             ok, time.perf_counter() - t0, 30.0)


def _e2e_dataset(root):
    """10 textured images, 5 dark (label 0) and 5 bright (label 1)."""
    (root / "images").mkdir(parents=True, exist_ok=True)
    lines = [json.dumps({"record": "meta", "dataset": "e2e",
                         "classes": ["dark", "bright"]}, sort_keys=True)]
    for i in range(10):
        base = textured_array(8800 + i, 48, 48).astype(np.float64)
        if i < 5:
            arr = base * 0.35 + 16.0          # mean around 60
            label = 0
        else:
            arr = base * 0.35 + 140.0         # mean around 185
            label = 1
        arr = np.clip(np.rint(arr), 0, 255).astype(np.uint8)
        sid = f"img{i:02d}"
        RasterImage.from_array(arr).save_png(root / "images" / f"{sid}.png")
        lines.append(json.dumps(
            {"record": "entry", "sample_id": sid,
             "image_path": f"images/{sid}.png", "label": label},
            sort_keys=True))
    (root / "data.jsonl").write_text("\n".join(lines) + "\n")
    return root / "data.jsonl"


def _predict_tree(manifest_path, data_path, out_csv):
    """Brightness-threshold toy classifier over clean + corrupted images."""
    from pathobench import load_corrupted_manifest, load_dataset_manifest

    dm = load_dataset_manifest(data_path)
    cm = load_corrupted_manifest(manifest_path)
    labels = {e.sample_id: e.label for e in dm.entries}

    def predict(image):
        mean = float(image.array.astype(np.float64).mean())
        pred = 1 if mean > 127.0 else 0
        conf = 0.5 + min(0.5, abs(mean - 127.0) / 255.0)
        return pred, conf

    rows = [["sample_id", "kind", "severity", "true_label", "pred_label",
             "confidence"]]
    for e in dm.entries:
        pred, conf = predict(RasterImage.from_file(dm.resolve(e)))
        rows.append([e.sample_id, "clean", 0, labels[e.sample_id], pred,
                     f"{conf:.10g}"])
    for e in cm.entries:
        pred, conf = predict(RasterImage.from_file(cm.resolve(e)))
        rows.append([e.sample_id, e.kind, e.severity, labels[e.sample_id],
                     pred, f"{conf:.10g}"])
    with open(out_csv, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def _tree_digest(root):
    return {p.relative_to(root).as_posix(): p.read_bytes()
            for p in sorted(root.rglob("*")) if p.is_file()}


def test_acceptance_end_to_end_pipeline(capfd, tmp_path):
    """Generate + evaluate on a 10-image 2-class set: report must satisfy
    CE >= clean error and the whole tree and report must be byte-identical
    across two runs and across --jobs 1 vs --jobs 8."""
    t0 = time.perf_counter()
    data_path = _e2e_dataset(tmp_path)

    digests = {}
    reports = {}
    for name, jobs in (("run1", 1), ("run2", 1), ("run8", 8)):
        out_dir = tmp_path / name
        code = cli_main(["generate", "--manifest", str(data_path),
                         "--out", str(out_dir), "--seed", "17",
                         "--jobs", str(jobs)])
        assert code == 0
        preds = tmp_path / f"{name}_preds.csv"
        _predict_tree(out_dir / "manifest.jsonl", data_path, preds)
        report_path = tmp_path / f"{name}_report.json"
        code = cli_main(["evaluate", "--predictions", str(preds),
                         "--manifest", str(out_dir / "manifest.jsonl"),
                         "--format", "json", "--out", str(report_path)])
        assert code == 0
        digests[name] = _tree_digest(out_dir)
        reports[name] = report_path.read_bytes()

    ok = digests["run1"] == digests["run2"] == digests["run8"]
    ok &= reports["run1"] == reports["run2"] == reports["run8"]
    ok &= len(digests["run1"]) == 10 * 45 + 1      # images + manifest

    report = json.loads(reports["run1"])
    ok &= report["clean_error"] == 0.0
    ok &= report["ce"] is not None and report["ce"] >= report["clean_error"]
    ok &= report["gaps"] == []

    _verdict(capfd, f"end-to-end pipeline (clean error "
             f"{report['clean_error']:.3f}, CE {report['ce']:.3f}, "
             "byte-identical across runs and jobs 1 vs 8)",
             ok, time.perf_counter() - t0, 60.0)


def test_acceptance_correlation_recovery(capfd):
    """The correlation mechanism recovers a planted r*=0.45 from 30-point
    series within 0.1, averaged over 100 repetitions."""
    t0 = time.perf_counter()
    target = 0.45
    sigma = (1.0 - target * target) ** 0.5
    rng = random.Random(2026)
    estimates = []
    for _ in range(100):
        xs = [rng.gauss(0.0, 1.0) for _ in range(30)]
        ys = [target * x + sigma * rng.gauss(0.0, 1.0) for x in xs]
        estimates.append(pearson_r(xs, ys))
    mean_r = statistics.fmean(estimates)
    ok = abs(mean_r - target) <= 0.1
    _verdict(capfd, f"correlation recovery (planted 0.45 -> {mean_r:.3f}, "
             "tol 0.1 over 100 runs)",
             ok, time.perf_counter() - t0, 30.0)
