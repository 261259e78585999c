"""File formats exchanged with the outside world.

* dataset manifest: line-delimited JSON, one meta record then one entry
  per sample (id, relative image path, integer label);
* corrupted manifest: line-delimited JSON written by `generate`, with the
  severity table embedded verbatim so a run is reproducible from the
  manifest alone;
* prediction log: CSV with a required header, one row per model output,
  writable from any training loop.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError
from .metrics import PredictionRecord
from .severity import (
    CLEAN,
    CORRUPTION_KINDS,
    DEFAULT_SEVERITY_TABLE,
    MAX_SEED,
    SeverityTable,
)

PREDICTION_COLUMNS = ("sample_id", "kind", "severity", "true_label",
                      "pred_label", "confidence")


@dataclass(frozen=True)
class ManifestEntry:
    sample_id: str
    image_path: str
    label: int


@dataclass(frozen=True)
class DatasetManifest:
    """Clean validation samples: ids, relative image paths, labels."""

    dataset: str
    classes: list
    entries: list
    base_dir: Path = Path(".")

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.sample_id in seen:
                raise ValidationError(f"duplicate sample_id {e.sample_id!r} in manifest")
            seen.add(e.sample_id)

    def resolve(self, entry: ManifestEntry) -> Path:
        return self.base_dir / entry.image_path


@dataclass(frozen=True)
class CorruptedEntry:
    sample_id: str
    kind: str
    severity: int
    output_path: str | None     # relative to the manifest directory; None when streamed
    seed: int


@dataclass(frozen=True)
class CorruptedManifest:
    """Record of one `generate` run: 45 entries per source sample."""

    source_manifest: str
    run_seed: int
    mode: str                   # "materialize" | "stream"
    dataset: str
    classes: list
    severity_table: SeverityTable
    entries: list
    failures: list = field(default_factory=list)
    base_dir: Path = Path(".")

    def resolve(self, entry: CorruptedEntry) -> Path:
        if entry.output_path is None:
            raise ValidationError(
                f"entry ({entry.sample_id}, {entry.kind}, {entry.severity}) "
                "was streamed and has no file on disk")
        return self.base_dir / entry.output_path


def _read_jsonl(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read manifest: {exc}", path=str(path)) from exc
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", path=str(path),
                             line=line_no) from exc
        if not isinstance(obj, dict) or "record" not in obj:
            raise ParseError("each manifest line must be an object with a "
                             "'record' field", path=str(path), line=line_no)
        yield line_no, obj


def _require(obj: dict, keys: tuple, path: Path, line_no: int) -> None:
    for key in keys:
        if key not in obj:
            raise ParseError(f"missing field {key!r}", path=str(path), line=line_no)


def load_dataset_manifest(path: str | Path) -> DatasetManifest:
    path = Path(path)
    meta = None
    entries = []
    for line_no, obj in _read_jsonl(path):
        kind = obj["record"]
        if kind == "meta":
            _require(obj, ("dataset", "classes"), path, line_no)
            meta = obj
        elif kind == "entry":
            _require(obj, ("sample_id", "image_path", "label"), path, line_no)
            if not isinstance(obj["label"], int):
                raise ParseError(f"label must be an integer, got {obj['label']!r}",
                                 path=str(path), line=line_no)
            entries.append(ManifestEntry(str(obj["sample_id"]),
                                         str(obj["image_path"]), obj["label"]))
        else:
            raise ParseError(f"unknown record type {kind!r}", path=str(path),
                             line=line_no)
    if meta is None:
        raise ParseError("manifest has no meta record", path=str(path))
    return DatasetManifest(dataset=str(meta["dataset"]),
                           classes=list(meta["classes"]),
                           entries=entries, base_dir=path.parent)


def save_dataset_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"record": "meta", "dataset": manifest.dataset,
                             "classes": manifest.classes}, sort_keys=True) + "\n")
        for e in manifest.entries:
            fh.write(json.dumps({"record": "entry", "sample_id": e.sample_id,
                                 "image_path": e.image_path, "label": e.label},
                                sort_keys=True) + "\n")


def load_corrupted_manifest(path: str | Path) -> CorruptedManifest:
    path = Path(path)
    meta = None
    entries = []
    failures = []
    for line_no, obj in _read_jsonl(path):
        kind = obj["record"]
        if kind == "meta":
            _require(obj, ("source_manifest", "run_seed", "mode", "dataset",
                           "classes", "severity_table"), path, line_no)
            meta = obj
        elif kind == "entry":
            _require(obj, ("sample_id", "kind", "severity", "output_path", "seed"),
                     path, line_no)
            if obj["kind"] not in CORRUPTION_KINDS:
                raise ParseError(f"unknown corruption kind {obj['kind']!r}",
                                 path=str(path), line=line_no)
            entries.append(CorruptedEntry(
                str(obj["sample_id"]), obj["kind"], int(obj["severity"]),
                obj["output_path"], int(obj["seed"])))
        elif kind == "failure":
            failures.append(dict(obj))
        else:
            raise ParseError(f"unknown record type {kind!r}", path=str(path),
                             line=line_no)
    if meta is None:
        raise ParseError("corrupted manifest has no meta record", path=str(path))
    table = SeverityTable.from_config_dict(meta["severity_table"])
    return CorruptedManifest(
        source_manifest=str(meta["source_manifest"]), run_seed=int(meta["run_seed"]),
        mode=str(meta["mode"]), dataset=str(meta["dataset"]),
        classes=list(meta["classes"]), severity_table=table,
        entries=entries, failures=failures, base_dir=path.parent)


def save_corrupted_manifest(manifest: CorruptedManifest, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({
            "record": "meta",
            "source_manifest": manifest.source_manifest,
            "run_seed": manifest.run_seed,
            "mode": manifest.mode,
            "dataset": manifest.dataset,
            "classes": manifest.classes,
            "severity_table": manifest.severity_table.to_config_dict(),
        }, sort_keys=True) + "\n")
        for e in manifest.entries:
            fh.write(json.dumps({
                "record": "entry", "sample_id": e.sample_id, "kind": e.kind,
                "severity": e.severity, "output_path": e.output_path,
                "seed": e.seed,
            }, sort_keys=True) + "\n")
        for f in manifest.failures:
            fh.write(json.dumps(dict(f, record="failure"), sort_keys=True) + "\n")


@dataclass(frozen=True)
class RunConfig:
    """Knobs for one generate run."""

    run_seed: int = 0
    severity_table: SeverityTable = DEFAULT_SEVERITY_TABLE
    out_dir: Path | None = None
    jobs: int = 1
    stream: bool = False

    def __post_init__(self):
        if not isinstance(self.run_seed, int) or not 0 <= self.run_seed <= MAX_SEED:
            raise ValidationError(
                f"run seed must be an integer in [0, 2**64), got {self.run_seed}")
        if self.jobs < 1:
            raise ValidationError(f"jobs must be >= 1, got {self.jobs}")
        if not self.stream and self.out_dir is None:
            raise ValidationError("materialize mode requires an output directory")


def load_predictions(path: str | Path) -> list:
    """Parse a prediction CSV into records, with line-numbered errors."""
    path = Path(path)
    try:
        fh = path.open("r", encoding="utf-8", newline="")
    except OSError as exc:
        raise ParseError(f"cannot read predictions: {exc}", path=str(path)) from exc
    records = []
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError("prediction file is empty (header required)",
                             path=str(path))
        missing = [c for c in PREDICTION_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ParseError(f"prediction header missing columns: {missing}",
                             path=str(path), line=1)
        for row in reader:
            line_no = reader.line_num
            if any(row.get(c) in (None, "") for c in PREDICTION_COLUMNS):
                raise ParseError("row has missing fields", path=str(path),
                                 line=line_no)
            raw_kind = row["kind"].strip().lower()
            kind = None if raw_kind == CLEAN else raw_kind
            try:
                record = PredictionRecord(
                    sample_id=row["sample_id"],
                    kind=kind,
                    severity=int(row["severity"]),
                    true_label=int(row["true_label"]),
                    pred_label=int(row["pred_label"]),
                    confidence=float(row["confidence"]),
                )
            except (ValueError, ValidationError) as exc:
                raise ParseError(str(exc), path=str(path), line=line_no) from exc
            records.append(record)
    return records


def save_predictions(records: list, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PREDICTION_COLUMNS)
        for r in records:
            writer.writerow([r.sample_id, r.kind if r.kind is not None else CLEAN,
                             r.severity, r.true_label, r.pred_label,
                             f"{r.confidence:.10g}"])
