"""Command line interface.

Subcommands:
  generate    corrupt every manifest sample at all 45 (kind, severity) specs
  evaluate    score a prediction CSV into robustness metrics
  correlate   Pearson correlation of benchmark error vs held-out test error
  corrupt     corrupt a single image (or write a 45-variant gallery)
  table       print the active severity parameter table

Diagnostics go to stderr through logging; data goes to stdout. Exit codes:
0 success, 1 parse or I/O failure, 2 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .errors import DataError, ParseError, PathobenchError, ValidationError
from .manifest import RunConfig, load_corrupted_manifest, load_dataset_manifest
from .metrics import RobustnessReport
from .pipeline import (
    CorrelationPoint,
    CorrelationSummary,
    correlate,
    corrupt_gallery,
    corrupt_one,
    evaluate,
    generate,
)
from .severity import (
    CORRUPTION_KINDS,
    DEFAULT_SEVERITY_TABLE,
    SEVERITY_LEVELS,
    SeverityTable,
    load_severity_table,
)

logger = logging.getLogger(__name__)

FORMATS = ("table", "csv", "json")


def _fmt(value, width: int = 0) -> str:
    s = "-" if value is None else f"{value:.4f}"
    return s.rjust(width) if width else s


def _load_table(config_path: str | None) -> SeverityTable:
    if config_path is None:
        return DEFAULT_SEVERITY_TABLE
    return load_severity_table(config_path)


def render_report(report: RobustnessReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["metric", "kind", "severity", "value"])
        for kind in CORRUPTION_KINDS:
            for severity in SEVERITY_LEVELS:
                rate = report.cells.get(kind, {}).get(severity)
                if rate is not None:
                    writer.writerow(["error_rate", kind, severity, f"{rate:.10g}"])
        for kind in CORRUPTION_KINDS:
            stats = report.per_kind.get(kind, {})
            if stats.get("ce") is not None:
                writer.writerow(["kind_ce", kind, "", f"{stats['ce']:.10g}"])
            if stats.get("cec") is not None:
                writer.writerow(["kind_cec", kind, "", f"{stats['cec']:.10g}"])
        writer.writerow(["clean_error", "", "", f"{report.clean_error:.10g}"])
        for name in ("ce", "rce", "cec"):
            value = getattr(report, name)
            if value is not None:
                writer.writerow([name, "", "", f"{value:.10g}"])
        for label, r in report.pearson:
            writer.writerow(["pearson_r", label, "", f"{r:.10g}"])
        return buf.getvalue()

    lines = []
    header = f"{'kind':<12}" + "".join(f"{f's{s}':>9}" for s in SEVERITY_LEVELS)
    header += f"{'kind-CE':>10}{'kind-CEC':>10}"
    lines.append(header)
    for kind in CORRUPTION_KINDS:
        row = f"{kind:<12}"
        for severity in SEVERITY_LEVELS:
            row += _fmt(report.cells.get(kind, {}).get(severity), 9)
        stats = report.per_kind.get(kind, {})
        row += _fmt(stats.get("ce"), 10) + _fmt(stats.get("cec"), 10)
        lines.append(row)
    lines.append("")
    lines.append(f"clean error  {report.clean_error:.4f}  "
                 f"({report.clean_count} predictions)")
    lines.append(f"CE           {_fmt(report.ce)}")
    lines.append(f"rCE          {_fmt(report.rce)}")
    lines.append(f"CEC          {_fmt(report.cec)}")
    for label, r in report.pearson:
        lines.append(f"pearson r    {label} {r:.4f}")
    if report.gaps:
        lines.append("")
        lines.append("warnings:")
        lines.extend(f"  {g}" for g in report.gaps)
    return "\n".join(lines) + "\n"


def render_correlation(summary: CorrelationSummary, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["series", "pearson_r", "n_points"])
        for label, r in summary.entries:
            writer.writerow([label, f"{r:.10g}", len(summary.points)])
        return buf.getvalue()
    lines = [f"{label:<20} r = {r:+.4f}  (n = {len(summary.points)})"
             for label, r in summary.entries]
    return "\n".join(lines) + "\n"


def load_correlation_points(path: str | Path) -> list:
    """Read correlation input CSV.

    Needs columns label, benchmark_error, test_error; an optional
    validation_error column enables the second correlation series.
    """
    points = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            fields = reader.fieldnames or []
            required = {"label", "benchmark_error", "test_error"}
            missing = required - set(fields)
            if missing:
                raise ParseError(
                    f"points CSV missing columns: {', '.join(sorted(missing))}",
                    path=str(path))
            has_val = "validation_error" in fields
            for line_no, row in enumerate(reader, start=2):
                try:
                    val = None
                    if has_val and (row.get("validation_error") or "").strip():
                        val = float(row["validation_error"])
                    points.append(CorrelationPoint(
                        label=row["label"],
                        benchmark_error=float(row["benchmark_error"]),
                        test_error=float(row["test_error"]),
                        validation_error=val,
                    ))
                except (TypeError, ValueError) as exc:
                    raise ParseError(str(exc), path=str(path),
                                     line=line_no) from exc
    except OSError as exc:
        raise ParseError(f"cannot read points CSV: {exc}", path=str(path)) from exc
    return points


def save_correlation_points(points: list, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    has_val = any(p.validation_error is not None for p in points)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["label", "benchmark_error", "test_error"]
        if has_val:
            header.append("validation_error")
        writer.writerow(header)
        for p in points:
            row = [p.label, f"{p.benchmark_error:.10g}", f"{p.test_error:.10g}"]
            if has_val:
                row.append("" if p.validation_error is None
                           else f"{p.validation_error:.10g}")
            writer.writerow(row)


def render_severity_table(table: SeverityTable, fmt: str) -> str:
    config = table.to_config_dict()
    if fmt in ("json", "csv"):
        return json.dumps(config, indent=2, sort_keys=True) + "\n"
    lines = []
    for kind in CORRUPTION_KINDS:
        for param, values in sorted(config[kind].items()):
            rendered = ", ".join(str(v) for v in values)
            lines.append(f"{kind:<12} {param:<10} {rendered}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathobench",
        description="Deterministic image corruption benchmark for "
                    "classifier robustness.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate",
                           help="corrupt every sample in a dataset manifest")
    p_gen.add_argument("--manifest", required=True,
                       help="dataset manifest (JSONL)")
    p_gen.add_argument("--out", required=True,
                       help="output directory for images and manifest")
    p_gen.add_argument("--seed", type=int, default=0, help="run seed")
    p_gen.add_argument("--config", help="severity table JSON overriding defaults")
    p_gen.add_argument("--jobs", type=int, default=1,
                       help="parallel worker processes")
    p_gen.add_argument("--stream", action="store_true",
                       help="write only the manifest; no image files")

    p_eval = sub.add_parser("evaluate", help="score a prediction CSV")
    p_eval.add_argument("--predictions", required=True,
                        help="prediction CSV "
                             "(sample_id,kind,severity,true_label,pred_label,"
                             "confidence)")
    p_eval.add_argument("--manifest",
                        help="corrupted manifest for coverage cross-checks")
    p_eval.add_argument("--format", choices=FORMATS, default="table")
    p_eval.add_argument("--out", help="also write the JSON report here")

    p_corr = sub.add_parser("correlate",
                            help="correlate benchmark error with test error")
    p_corr.add_argument("--points", required=True,
                        help="CSV with label,benchmark_error,test_error"
                             "[,validation_error]")
    p_corr.add_argument("--format", choices=FORMATS, default="table")
    p_corr.add_argument("--out", help="write the underlying points CSV here")

    p_cor = sub.add_parser("corrupt", help="corrupt a single image")
    p_cor.add_argument("image", help="input image file")
    p_cor.add_argument("--kind", choices=CORRUPTION_KINDS,
                       help="corruption kind (omit with --gallery)")
    p_cor.add_argument("--severity", type=int, choices=range(0, 6),
                       help="severity level, 0 = clean (omit with --gallery)")
    p_cor.add_argument("--seed", type=int, default=0)
    p_cor.add_argument("--out", required=True,
                       help="output PNG path, or directory with --gallery")
    p_cor.add_argument("--config", help="severity table JSON overriding defaults")
    p_cor.add_argument("--gallery", action="store_true",
                       help="write all 45 kind/severity variants")

    p_tab = sub.add_parser("table", help="print the active severity table")
    p_tab.add_argument("--config", help="severity table JSON overriding defaults")
    p_tab.add_argument("--format", choices=FORMATS, default="json")

    return parser


def _cmd_generate(args) -> int:
    table = _load_table(args.config)
    manifest = load_dataset_manifest(args.manifest)
    config = RunConfig(run_seed=args.seed, severity_table=table,
                       out_dir=args.out, jobs=args.jobs, stream=args.stream)
    corrupted = generate(manifest, config, source_path=args.manifest)
    n_files = sum(1 for e in corrupted.entries if e.output_path is not None)
    logger.info("generated %d entries (%d image files, %d failures)",
                len(corrupted.entries), n_files, len(corrupted.failures))
    print(str(Path(args.out) / "manifest.jsonl"))
    return 0


def _cmd_evaluate(args) -> int:
    manifest = None
    if args.manifest:
        manifest = load_corrupted_manifest(args.manifest)
    report = evaluate(args.predictions, manifest)
    sys.stdout.write(render_report(report, args.format))
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
                       encoding="utf-8")
    return 0


def _cmd_correlate(args) -> int:
    points = load_correlation_points(args.points)
    summary = correlate(points)
    sys.stdout.write(render_correlation(summary, args.format))
    if args.out:
        save_correlation_points(summary.points, args.out)
    return 0


def _cmd_corrupt(args) -> int:
    table = _load_table(args.config)
    if args.gallery:
        written = corrupt_gallery(args.image, args.seed, args.out, table)
        logger.info("wrote %d images under %s", len(written), args.out)
        print(args.out)
        return 0
    if args.kind is None or args.severity is None:
        raise ValidationError("--kind and --severity are required "
                              "unless --gallery is given")
    out = corrupt_one(args.image, args.kind, args.severity, args.seed,
                      args.out, table)
    print(str(out))
    return 0


def _cmd_table(args) -> int:
    table = _load_table(args.config)
    sys.stdout.write(render_severity_table(table, args.format))
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "evaluate": _cmd_evaluate,
    "correlate": _cmd_correlate,
    "corrupt": _cmd_corrupt,
    "table": _cmd_table,
}


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, OSError) as exc:
        logger.error("%s", exc)
        return 1
    except (ValidationError, DataError) as exc:
        logger.error("%s", exc)
        return 2
    except PathobenchError as exc:
        logger.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
