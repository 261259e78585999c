"""Corruption kinds, severity parameter tables, and seed derivation.

Severity level 0 always means the clean image; levels 1..5 index into a
per-kind parameter table. The shipped defaults are calibrated so that each
kind degrades strictly monotonically from mild to severe; deployments can
override them through a JSON config file without touching code.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError

CORRUPTION_KINDS = (
    "jpeg",
    "pixelate",
    "defocus_blur",
    "motion_blur",
    "brightness",
    "saturation",
    "hue",
    "mark",
    "bubble",
)

# Grouping used for documentation and report ordering.
KIND_GROUPS = {
    "digitization": ("jpeg", "pixelate"),
    "blur": ("defocus_blur", "motion_blur"),
    "color": ("brightness", "saturation", "hue"),
    "stain": ("mark", "bubble"),
}

CLEAN = "clean"

SEVERITY_LEVELS = (1, 2, 3, 4, 5)
NUM_KINDS = len(CORRUPTION_KINDS)
NUM_SEVERITIES = len(SEVERITY_LEVELS)

_DEFAULT_PARAMS = {
    "jpeg": {"quality": [30, 20, 15, 10, 7]},
    "pixelate": {"factor": [1.5, 2.0, 3.0, 4.0, 6.0]},
    "defocus_blur": {"radius": [1, 2, 3, 5, 7]},
    "motion_blur": {"length": [3, 5, 9, 13, 17]},
    "brightness": {"delta": [0.1, 0.2, 0.3, 0.4, 0.5]},
    "saturation": {"delta": [0.1, 0.2, 0.3, 0.4, 0.5]},
    "hue": {"shift": [9.0, 18.0, 27.0, 36.0, 45.0]},
    "mark": {
        "coverage": [0.05, 0.10, 0.18, 0.28, 0.40],
        "opacity": [0.3, 0.4, 0.55, 0.7, 0.85],
    },
    "bubble": {
        "coverage": [0.05, 0.10, 0.18, 0.28, 0.40],
        "opacity": [0.3, 0.4, 0.55, 0.7, 0.85],
    },
}

# Validation rules per (kind, parameter): type, bounds (exclusive_low
# marks an open lower bound), and monotonicity across severities 1..5.
# "decreasing"/"increasing" are strict; "non_decreasing" allows plateaus
# (a flat opacity ramp is legitimate, coverage still drives distortion).
_PARAM_RULES = {
    ("jpeg", "quality"): ("int", 1, False, 100, "decreasing"),
    ("pixelate", "factor"): ("float", 1.0, True, None, "increasing"),
    ("defocus_blur", "radius"): ("int", 1, False, None, "increasing"),
    ("motion_blur", "length"): ("int", 1, False, None, "increasing"),
    ("brightness", "delta"): ("float", 0.0, True, 1.0, "increasing"),
    ("saturation", "delta"): ("float", 0.0, True, 1.0, "increasing"),
    ("hue", "shift"): ("float", 0.0, True, 180.0, "increasing"),
    ("mark", "coverage"): ("float", 0.0, True, 1.0, "increasing"),
    ("mark", "opacity"): ("float", 0.0, True, 1.0, "non_decreasing"),
    ("bubble", "coverage"): ("float", 0.0, True, 1.0, "increasing"),
    ("bubble", "opacity"): ("float", 0.0, True, 1.0, "non_decreasing"),
}

MAX_SEED = 2 ** 64 - 1


def validate_severity(level: int, allow_clean: bool = True) -> int:
    if int(level) != level:
        raise ValidationError(f"severity must be an integer, got {level!r}")
    level = int(level)
    low = 0 if allow_clean else 1
    if not low <= level <= 5:
        raise ValidationError(f"severity must be in [{low}, 5], got {level}")
    return level


def validate_kind(kind: str) -> str:
    if kind not in CORRUPTION_KINDS:
        raise ValidationError(
            f"unknown corruption kind {kind!r}; expected one of {', '.join(CORRUPTION_KINDS)}")
    return kind


def _check_values(kind: str, name: str, values: list) -> list:
    rule = _PARAM_RULES.get((kind, name))
    if rule is None:
        raise ValidationError(f"unknown parameter {name!r} for kind {kind!r}")
    typ, low, low_exclusive, high, direction = rule
    if not isinstance(values, (list, tuple)) or len(values) != NUM_SEVERITIES:
        raise ValidationError(
            f"{kind}.{name} must list exactly {NUM_SEVERITIES} values")
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValidationError(f"{kind}.{name} values must be numeric, got {v!r}")
        if typ == "int" and int(v) != v:
            raise ValidationError(f"{kind}.{name} values must be integers, got {v!r}")
        v = int(v) if typ == "int" else float(v)
        if (v <= low) if low_exclusive else (v < low):
            raise ValidationError(f"{kind}.{name} value {v} below minimum {low}")
        if high is not None and v > high:
            raise ValidationError(f"{kind}.{name} value {v} above maximum {high}")
        out.append(v)
    pairs = list(zip(out, out[1:]))
    ok = {
        "decreasing": all(a > b for a, b in pairs),
        "increasing": all(a < b for a, b in pairs),
        "non_decreasing": all(a <= b for a, b in pairs),
    }[direction]
    if not ok:
        raise ValidationError(
            f"{kind}.{name} must be strictly {direction.replace('_', '-')} "
            f"across severities 1..5, got {out}")
    return out


@dataclass(frozen=True)
class SeverityTable:
    """Per-kind, per-severity corruption parameters.

    `params[kind][name]` is a list of five values indexed by severity-1.
    Instances are validated on construction; the distortion-controlling
    parameter of every kind is strictly monotone across levels.
    """

    params: dict = field(default_factory=lambda: _DEFAULT_PARAMS)

    def __post_init__(self):
        validated = {}
        for kind in CORRUPTION_KINDS:
            if kind not in self.params:
                raise ValidationError(f"severity table missing kind {kind!r}")
            entry = self.params[kind]
            expected = set(_DEFAULT_PARAMS[kind])
            if set(entry) != expected:
                raise ValidationError(
                    f"severity table for {kind!r} must define exactly "
                    f"{sorted(expected)}, got {sorted(entry)}")
            validated[kind] = {
                name: _check_values(kind, name, values)
                for name, values in entry.items()
            }
        extra = set(self.params) - set(CORRUPTION_KINDS)
        if extra:
            raise ValidationError(f"severity table has unknown kinds: {sorted(extra)}")
        object.__setattr__(self, "params", validated)

    def level_params(self, kind: str, severity: int) -> dict:
        """Parameter record for one corrupted severity level (1..5)."""
        validate_kind(kind)
        severity = validate_severity(severity, allow_clean=False)
        return {name: values[severity - 1] for name, values in self.params[kind].items()}

    def to_config_dict(self) -> dict:
        return {kind: {name: list(values) for name, values in entry.items()}
                for kind, entry in self.params.items()}

    @classmethod
    def from_config_dict(cls, overrides: dict) -> "SeverityTable":
        """Build a table from a config mapping, merging over the defaults.

        Overrides are per-kind, per-parameter; anything not mentioned keeps
        its default values.
        """
        if not isinstance(overrides, dict):
            raise ValidationError("severity config must be a JSON object")
        merged = {k: {n: list(v) for n, v in e.items()} for k, e in _DEFAULT_PARAMS.items()}
        for kind, entry in overrides.items():
            if kind not in CORRUPTION_KINDS:
                raise ValidationError(f"severity config has unknown kind {kind!r}")
            if not isinstance(entry, dict):
                raise ValidationError(f"severity config for {kind!r} must be an object")
            for name, values in entry.items():
                if name not in merged[kind]:
                    raise ValidationError(
                        f"unknown parameter {name!r} for kind {kind!r}")
                merged[kind][name] = values
        return cls(merged)


DEFAULT_SEVERITY_TABLE = SeverityTable()


def load_severity_table(path: str | Path) -> SeverityTable:
    """Load severity parameter overrides from a JSON config file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read severity config: {exc}", path=str(path)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in severity config: {exc}",
                         path=str(path), line=exc.lineno) from exc
    return SeverityTable.from_config_dict(data)


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary string-able parts.

    Batch runs derive per-sample seeds as
    derive_seed(run_seed, sample_id, kind, severity), which makes the
    generated dataset independent of iteration order and worker count.
    The hash is SHA-256 truncated to 8 bytes, so any client in any language
    can reproduce it.
    """
    msg = ":".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(msg).digest()[:8], "big")
