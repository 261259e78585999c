"""Pipeline glue: build corrupted benchmark trees, score prediction logs.

Generation enumerates (sample, kind, severity) in a fixed order with
per-sample seeds derived by stable hashing, so equal inputs and run seed
produce byte-identical output trees regardless of worker count, and a
streaming consumer sees exactly the pixels a materialized run writes.
"""

from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .corruption import CorruptionSpec, apply_corruption
from .errors import BackendError, InsufficientDataError, PathobenchError
from .image import RasterImage
from .manifest import (
    CorruptedEntry,
    CorruptedManifest,
    DatasetManifest,
    RunConfig,
    load_predictions,
    save_corrupted_manifest,
)
from .metrics import RobustnessReport, build_report, pearson_r
from .severity import (
    CORRUPTION_KINDS,
    DEFAULT_SEVERITY_TABLE,
    SEVERITY_LEVELS,
    SeverityTable,
    derive_seed,
)

logger = logging.getLogger(__name__)

_KIND_ORDER = {kind: i for i, kind in enumerate(CORRUPTION_KINDS)}


def _entry_sort_key(entry: CorruptedEntry):
    return (entry.sample_id, _KIND_ORDER[entry.kind], entry.severity)


def _output_rel_path(kind: str, severity: int, sample_id: str) -> str:
    return f"{kind}/{severity}/{sample_id}.png"


def _corrupt_sample_task(payload):
    """Corrupt one source image at all 45 (kind, severity) specs.

    Module-level so process pools can pickle it. Returns
    (entries, failure-or-None); a failure to read the source skips the
    sample, a failure to write is fatal for the run.
    """
    sample_id, image_path, out_dir, run_seed, table_params = payload
    table = SeverityTable(table_params)
    try:
        image = RasterImage.from_file(image_path)
    except PathobenchError as exc:
        return [], {"sample_id": sample_id, "image_path": str(image_path),
                    "error": str(exc)}
    entries = []
    for kind in CORRUPTION_KINDS:
        for severity in SEVERITY_LEVELS:
            seed = derive_seed(run_seed, sample_id, kind, severity)
            corrupted = apply_corruption(image, CorruptionSpec(kind, severity, seed),
                                         table)
            rel_path = None
            if out_dir is not None:
                rel_path = _output_rel_path(kind, severity, sample_id)
                try:
                    corrupted.save_png(Path(out_dir) / rel_path)
                except OSError as exc:
                    raise BackendError(
                        f"cannot write {rel_path} under {out_dir}: {exc}") from exc
            entries.append((sample_id, kind, severity, rel_path, seed))
    return entries, None


def generate(manifest: DatasetManifest, config: RunConfig,
             source_path: str | Path | None = None) -> CorruptedManifest:
    """Apply all 45 corruptions to every manifest sample.

    Materialize mode writes PNGs under {kind}/{severity}/{sample_id}.png in
    config.out_dir plus a manifest embedding the severity table; streaming
    mode records the same entries with null output paths, leaving pixel
    production to `iter_corrupted`. Unreadable sources become failure
    records and the run continues.
    """
    out_dir = None if config.stream else str(config.out_dir)
    if not manifest.entries:
        logger.warning("dataset manifest is empty; writing an empty corrupted manifest")

    payloads = [
        (e.sample_id, str(manifest.resolve(e)), out_dir, config.run_seed,
         config.severity_table.params)
        for e in sorted(manifest.entries, key=lambda e: e.sample_id)
    ]

    results = []
    if config.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_corrupt_sample_task, payloads))
    else:
        results = [_corrupt_sample_task(p) for p in payloads]

    entries = []
    failures = []
    for entry_rows, failure in results:
        if failure is not None:
            failures.append(failure)
        for sample_id, kind, severity, rel_path, seed in entry_rows:
            entries.append(CorruptedEntry(sample_id, kind, severity, rel_path, seed))
    entries.sort(key=_entry_sort_key)
    failures.sort(key=lambda f: f["sample_id"])
    if failures:
        logger.warning("%d samples failed to load and were skipped", len(failures))

    corrupted = CorruptedManifest(
        source_manifest=str(source_path) if source_path is not None else "",
        run_seed=config.run_seed,
        mode="stream" if config.stream else "materialize",
        dataset=manifest.dataset,
        classes=manifest.classes,
        severity_table=config.severity_table,
        entries=entries,
        failures=failures,
        base_dir=Path(out_dir) if out_dir is not None else Path("."),
    )
    if config.out_dir is not None:
        save_corrupted_manifest(corrupted, Path(config.out_dir) / "manifest.jsonl")
    return corrupted


def iter_corrupted(manifest: DatasetManifest, config: RunConfig):
    """Lazily yield (CorruptedEntry, RasterImage) for every spec.

    Enumeration order and seeds match `generate` exactly, so streaming and
    materialized pixel data are identical for equal run seeds.
    """
    for e in sorted(manifest.entries, key=lambda e: e.sample_id):
        image = RasterImage.from_file(manifest.resolve(e))
        for kind in CORRUPTION_KINDS:
            for severity in SEVERITY_LEVELS:
                seed = derive_seed(config.run_seed, e.sample_id, kind, severity)
                corrupted = apply_corruption(
                    image, CorruptionSpec(kind, severity, seed),
                    config.severity_table)
                yield (CorruptedEntry(e.sample_id, kind, severity, None, seed),
                       corrupted)


def regenerate_entry(corrupted: CorruptedManifest, entry: CorruptedEntry,
                     source: DatasetManifest) -> RasterImage:
    """Recompute one corrupted image from a manifest entry's stored seed."""
    by_id = {e.sample_id: e for e in source.entries}
    src = by_id.get(entry.sample_id)
    if src is None:
        raise InsufficientDataError(
            f"sample {entry.sample_id!r} not present in source manifest")
    image = RasterImage.from_file(source.resolve(src))
    spec = CorruptionSpec(entry.kind, entry.severity, entry.seed)
    return apply_corruption(image, spec, corrupted.severity_table)


def evaluate(predictions_path: str | Path,
             manifest: CorruptedManifest | None = None) -> RobustnessReport:
    """Score a prediction log against the benchmark.

    When a corrupted manifest is supplied, per-cell prediction counts are
    cross-checked against its entry counts and mismatches reported as
    coverage warnings in the report gaps.
    """
    records = load_predictions(predictions_path)
    report = build_report(records)
    if manifest is not None:
        expected = {}
        for e in manifest.entries:
            expected[(e.kind, e.severity)] = expected.get((e.kind, e.severity), 0) + 1
        mismatches = []
        for (kind, severity), want in sorted(
                expected.items(), key=lambda kv: (_KIND_ORDER[kv[0][0]], kv[0][1])):
            got = report.counts.get(kind, {}).get(severity, 0)
            if got != want:
                mismatches.append(
                    f"cell ({kind}, severity {severity}): {got} predictions "
                    f"vs {want} manifest entries")
        if mismatches:
            logger.warning("prediction coverage differs from manifest in %d cells",
                           len(mismatches))
            report = dataclasses.replace(report, gaps=list(report.gaps) + mismatches)
    return report


@dataclass(frozen=True)
class CorrelationPoint:
    """One checkpoint's errors: on the benchmark, the test set, and
    (optionally) the clean validation set."""

    label: str
    benchmark_error: float
    test_error: float
    validation_error: float | None = None


@dataclass(frozen=True)
class CorrelationSummary:
    entries: list                 # (series label, pearson r) pairs
    points: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "correlations": [[label, r] for label, r in self.entries],
            "points": [
                {"label": p.label, "benchmark_error": p.benchmark_error,
                 "test_error": p.test_error, "validation_error": p.validation_error}
                for p in self.points
            ],
        }


def correlate(points: list) -> CorrelationSummary:
    """Pearson correlation of benchmark error (and validation error, when
    present on every point) against test error."""
    if len(points) < 2:
        raise InsufficientDataError("correlation needs at least 2 points")
    test = [p.test_error for p in points]
    entries = [("benchmark_vs_test",
                pearson_r([p.benchmark_error for p in points], test))]
    if all(p.validation_error is not None for p in points):
        entries.append(("validation_vs_test",
                        pearson_r([p.validation_error for p in points], test)))
    return CorrelationSummary(entries=entries, points=list(points))


def corrupt_one(image_path: str | Path, kind: str, severity: int, seed: int,
                out_path: str | Path,
                table: SeverityTable | None = None) -> Path:
    """Corrupt a single image file and write the result as PNG."""
    table = table if table is not None else DEFAULT_SEVERITY_TABLE
    image = RasterImage.from_file(image_path)
    corrupted = apply_corruption(image, CorruptionSpec(kind, severity, seed), table)
    out_path = Path(out_path)
    corrupted.save_png(out_path)
    return out_path


def corrupt_gallery(image_path: str | Path, seed: int, out_dir: str | Path,
                    table: SeverityTable | None = None) -> list:
    """Write all 45 corrupted variants of one image for visual inspection."""
    table = table if table is not None else DEFAULT_SEVERITY_TABLE
    image = RasterImage.from_file(image_path)
    out_dir = Path(out_dir)
    written = []
    for kind in CORRUPTION_KINDS:
        for severity in SEVERITY_LEVELS:
            corrupted = apply_corruption(
                image, CorruptionSpec(kind, severity, seed), table)
            path = out_dir / f"{kind}_s{severity}.png"
            corrupted.save_png(path)
            written.append(path)
    return written
