"""Robustness metrics over model prediction records.

Three summary numbers describe a model:

* corruption error (CE): unweighted mean misclassification rate over the
  45 (kind, severity) cells;
* relative CE (rCE): CE divided by the clean validation error;
* confidence-ranking error (CEC): how far per-sample confidence sequences
  are from falling monotonically as severity rises, measured by the
  bubble-sort swap count needed to order each 6-entry sequence descending,
  normalized by the 15 pairwise comparisons available.

Plus the Pearson correlation used to compare benchmark error against test
error. This module does no file I/O; the harness feeds it records.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .errors import (
    IncompleteMatrixError,
    InsufficientDataError,
    MissingBaselineError,
    UndefinedMetricError,
    ValidationError,
)
from .severity import CORRUPTION_KINDS, SEVERITY_LEVELS, validate_kind

logger = logging.getLogger(__name__)

# A confidence sequence spans severities 0..5; 6 entries give C(6,2) = 15
# comparable pairs, which bounds the swap count.
SEQUENCE_LENGTH = 6
MAX_SWAPS = SEQUENCE_LENGTH * (SEQUENCE_LENGTH - 1) // 2


@dataclass(frozen=True)
class PredictionRecord:
    """One model output row; kind None means the clean (severity 0) image."""

    sample_id: str
    kind: str | None
    severity: int
    true_label: int
    pred_label: int
    confidence: float

    def __post_init__(self):
        if self.kind is None:
            if self.severity != 0:
                raise ValidationError(
                    f"clean record for {self.sample_id!r} must have severity 0, "
                    f"got {self.severity}")
        else:
            validate_kind(self.kind)
            if not 1 <= self.severity <= 5:
                raise ValidationError(
                    f"corrupted record for {self.sample_id!r} must have severity "
                    f"in [1, 5], got {self.severity}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValidationError(
                f"confidence must be in [0, 1], got {self.confidence}")


@dataclass(frozen=True)
class ConfidenceSequence:
    """Per-sample, per-kind confidences across severities 0..5."""

    sample_id: str
    kind: str
    values: tuple

    def __post_init__(self):
        validate_kind(self.kind)
        if len(self.values) != SEQUENCE_LENGTH:
            raise ValidationError(
                f"confidence sequence for ({self.sample_id!r}, {self.kind!r}) "
                f"must have {SEQUENCE_LENGTH} entries, got {len(self.values)}")
        if any(not 0.0 <= v <= 1.0 for v in self.values):
            raise ValidationError("confidence values must be in [0, 1]")


@dataclass(frozen=True)
class ErrorMatrix:
    """Misclassification rates per (kind, severity) cell plus the clean rate."""

    clean_error: float
    clean_count: int
    rates: dict       # (kind, severity) -> error rate
    counts: dict      # (kind, severity) -> sample count

    def missing_cells(self) -> list:
        return [(kind, sev) for kind in CORRUPTION_KINDS for sev in SEVERITY_LEVELS
                if (kind, sev) not in self.rates]

    def is_complete(self) -> bool:
        return not self.missing_cells()


def error_rate(records: list) -> float:
    """Fraction of records whose predicted label differs from the truth."""
    if not records:
        raise InsufficientDataError("cannot compute an error rate of zero records")
    wrong = sum(1 for r in records if r.pred_label != r.true_label)
    return wrong / len(records)


def dedupe_records(records: list) -> list:
    """Collapse duplicate (sample_id, kind, severity) rows, last write wins."""
    seen = {}
    duplicates = 0
    for r in records:
        key = (r.sample_id, r.kind, r.severity)
        if key in seen:
            duplicates += 1
        seen[key] = r
    if duplicates:
        logger.warning("dropped %d duplicate prediction rows (last write wins)",
                       duplicates)
    return list(seen.values())


def build_error_matrix(records: list) -> ErrorMatrix:
    """Group records into the per-(kind, severity) grid and the clean cell."""
    records = dedupe_records(records)
    clean = [r for r in records if r.kind is None]
    if not clean:
        raise MissingBaselineError(
            "no clean (severity 0) records: cannot establish the baseline error")
    cells = {}
    for r in records:
        if r.kind is not None:
            cells.setdefault((r.kind, r.severity), []).append(r)
    rates = {cell: error_rate(rs) for cell, rs in cells.items()}
    counts = {cell: len(rs) for cell, rs in cells.items()}
    return ErrorMatrix(clean_error=error_rate(clean), clean_count=len(clean),
                       rates=rates, counts=counts)


def corruption_error(matrix: ErrorMatrix) -> float:
    """Unweighted mean of the 45 cell error rates.

    Cells count equally regardless of how many samples they hold; a missing
    cell is an error naming the gap rather than a silent skip.
    """
    missing = matrix.missing_cells()
    if missing:
        raise IncompleteMatrixError(missing)
    total = sum(matrix.rates[(kind, sev)]
                for kind in CORRUPTION_KINDS for sev in SEVERITY_LEVELS)
    return total / (len(CORRUPTION_KINDS) * len(SEVERITY_LEVELS))


def relative_ce(ce: float, clean_error: float) -> float:
    """Corruption error relative to the clean validation error."""
    if clean_error <= 0.0:
        raise UndefinedMetricError(
            "relative CE is undefined when the clean error is zero")
    return ce / clean_error


def kendall_swaps(seq: ConfidenceSequence) -> int:
    """Bubble-sort swap count to order the sequence largest-to-smallest.

    Equals the number of pairs (i < j) with values[i] < values[j]; ties are
    not discordant. Range [0, 15] for 6-entry sequences.
    """
    values = seq.values
    n = len(values)
    swaps = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            if values[i] < values[j]:
                swaps += 1
    return swaps


def cec(sequences: list) -> float:
    """Mean normalized swap count over confidence sequences, in [0, 1].

    0 means every sequence already falls (weakly) with severity; 1 means
    every sequence rises strictly.
    """
    if not sequences:
        raise InsufficientDataError("cannot compute CEC over zero sequences")
    return sum(kendall_swaps(s) for s in sequences) / (MAX_SWAPS * len(sequences))


def build_confidence_sequences(records: list) -> tuple:
    """Assemble per-(sample, kind) sequences from prediction records.

    The severity-0 entry of every sequence is the sample's clean
    confidence. Returns (sequences, gaps); a (sample, kind) pair missing
    any severity is dropped and described in gaps rather than imputed.
    """
    records = dedupe_records(records)
    clean_conf = {r.sample_id: r.confidence for r in records if r.kind is None}
    by_pair = {}
    for r in records:
        if r.kind is not None:
            by_pair.setdefault((r.sample_id, r.kind), {})[r.severity] = r.confidence

    sequences = []
    gaps = []
    for (sample_id, kind) in sorted(by_pair):
        levels = by_pair[(sample_id, kind)]
        missing = [s for s in SEVERITY_LEVELS if s not in levels]
        if sample_id not in clean_conf:
            missing.insert(0, 0)
        if missing:
            gaps.append(f"({sample_id}, {kind}) missing severities "
                        f"{', '.join(str(m) for m in missing)}")
            continue
        values = (clean_conf[sample_id],) + tuple(levels[s] for s in SEVERITY_LEVELS)
        sequences.append(ConfidenceSequence(sample_id, kind, values))
    if gaps:
        logger.warning("dropped %d incomplete confidence sequences", len(gaps))
    return sequences, gaps


def pearson_r(xs: list, ys: list) -> float:
    """Sample Pearson correlation coefficient."""
    if len(xs) != len(ys):
        raise ValidationError(
            f"series length mismatch: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        raise InsufficientDataError("pearson correlation needs at least 2 points")
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = sum(d * d for d in dx)
    var_y = sum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise UndefinedMetricError(
            "pearson correlation is undefined for a zero-variance series")
    cov = sum(a * b for a, b in zip(dx, dy))
    r = cov / math.sqrt(var_x * var_y)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class RobustnessReport:
    """Summary emitted by the evaluation harness.

    ce/rce/cec are None when coverage gaps make them undefined; per-cell
    rates carry explicit None entries for missing cells so partial runs
    stay inspectable.
    """

    clean_error: float
    ce: float | None
    rce: float | None
    cec: float | None
    per_kind: dict                      # kind -> {"ce": float|None, "cec": float|None}
    cells: dict                         # kind -> {severity -> rate|None}
    counts: dict                        # kind -> {severity -> count}
    clean_count: int
    gaps: list = field(default_factory=list)
    pearson: list = field(default_factory=list)   # (label, r) pairs

    def to_dict(self) -> dict:
        return {
            "clean_error": self.clean_error,
            "clean_count": self.clean_count,
            "ce": self.ce,
            "rce": self.rce,
            "cec": self.cec,
            "per_kind": {k: dict(v) for k, v in self.per_kind.items()},
            "cells": {k: {str(s): r for s, r in v.items()}
                      for k, v in self.cells.items()},
            "counts": {k: {str(s): c for s, c in v.items()}
                       for k, v in self.counts.items()},
            "gaps": list(self.gaps),
            "pearson": [[label, r] for label, r in self.pearson],
        }


def build_report(records: list, pearson: list | None = None) -> RobustnessReport:
    """Compute the full metric set from prediction records.

    Missing cells downgrade CE/rCE (and affected per-kind entries) to None
    instead of failing; rCE is also omitted when the clean error is zero.
    """
    matrix = build_error_matrix(records)
    gaps = [f"no predictions for ({kind}, severity {sev})"
            for kind, sev in matrix.missing_cells()]

    try:
        ce = corruption_error(matrix)
    except IncompleteMatrixError:
        ce = None
    rce = None
    if ce is not None and matrix.clean_error > 0.0:
        rce = relative_ce(ce, matrix.clean_error)

    sequences, seq_gaps = build_confidence_sequences(records)
    gaps.extend(seq_gaps)
    overall_cec = cec(sequences) if sequences else None

    per_kind = {}
    cells = {}
    counts = {}
    for kind in CORRUPTION_KINDS:
        kind_rates = [matrix.rates.get((kind, s)) for s in SEVERITY_LEVELS]
        kind_ce = (sum(kind_rates) / len(kind_rates)
                   if all(r is not None for r in kind_rates) else None)
        kind_seqs = [s for s in sequences if s.kind == kind]
        kind_cec = cec(kind_seqs) if kind_seqs else None
        per_kind[kind] = {"ce": kind_ce, "cec": kind_cec}
        cells[kind] = {s: matrix.rates.get((kind, s)) for s in SEVERITY_LEVELS}
        counts[kind] = {s: matrix.counts.get((kind, s), 0) for s in SEVERITY_LEVELS}

    return RobustnessReport(
        clean_error=matrix.clean_error,
        ce=ce,
        rce=rce,
        cec=overall_cec,
        per_kind=per_kind,
        cells=cells,
        counts=counts,
        clean_count=matrix.clean_count,
        gaps=gaps,
        pearson=list(pearson or []),
    )
