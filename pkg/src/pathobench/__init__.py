"""Deterministic image corruptions and robustness metrics for pathology
classifiers.

The package corrupts RGB images at 9 kinds x 5 severities with fully
seeded randomness, materializes or streams benchmark datasets, and scores
prediction logs into corruption error, relative corruption error, and
confidence-ranking consistency.
"""

from .corruption import CorruptionSpec, apply_corruption
from .errors import (
    BackendError,
    DataError,
    IncompleteMatrixError,
    InsufficientDataError,
    MissingBaselineError,
    ParseError,
    PathobenchError,
    UndefinedMetricError,
    ValidationError,
)
from .hsv import hsv_to_rgb, rgb_to_hsv
from .image import RasterImage, psnr
from .kernels import (
    ConvolutionKernel,
    build_defocus_kernel,
    build_motion_kernel,
    convolve,
)
from .manifest import (
    PREDICTION_COLUMNS,
    CorruptedEntry,
    CorruptedManifest,
    DatasetManifest,
    ManifestEntry,
    RunConfig,
    load_corrupted_manifest,
    load_dataset_manifest,
    load_predictions,
    save_corrupted_manifest,
    save_dataset_manifest,
    save_predictions,
)
from .metrics import (
    MAX_SWAPS,
    SEQUENCE_LENGTH,
    ConfidenceSequence,
    ErrorMatrix,
    PredictionRecord,
    RobustnessReport,
    build_confidence_sequences,
    build_error_matrix,
    build_report,
    cec,
    corruption_error,
    dedupe_records,
    error_rate,
    kendall_swaps,
    pearson_r,
    relative_ce,
)
from .overlay import OverlayAsset, corrupt_overlay, make_bubble_asset, make_mark_asset
from .pipeline import (
    CorrelationPoint,
    CorrelationSummary,
    correlate,
    corrupt_gallery,
    corrupt_one,
    evaluate,
    generate,
    iter_corrupted,
    regenerate_entry,
)
from .severity import (
    CORRUPTION_KINDS,
    DEFAULT_SEVERITY_TABLE,
    SEVERITY_LEVELS,
    SeverityTable,
    derive_seed,
    load_severity_table,
    validate_kind,
    validate_severity,
)

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "CORRUPTION_KINDS",
    "ConfidenceSequence",
    "ConvolutionKernel",
    "CorrelationPoint",
    "CorrelationSummary",
    "CorruptedEntry",
    "CorruptedManifest",
    "CorruptionSpec",
    "DEFAULT_SEVERITY_TABLE",
    "DataError",
    "DatasetManifest",
    "ErrorMatrix",
    "IncompleteMatrixError",
    "InsufficientDataError",
    "MAX_SWAPS",
    "ManifestEntry",
    "MissingBaselineError",
    "OverlayAsset",
    "PREDICTION_COLUMNS",
    "ParseError",
    "PathobenchError",
    "PredictionRecord",
    "RasterImage",
    "RobustnessReport",
    "RunConfig",
    "SEQUENCE_LENGTH",
    "SEVERITY_LEVELS",
    "SeverityTable",
    "UndefinedMetricError",
    "ValidationError",
    "apply_corruption",
    "build_confidence_sequences",
    "build_defocus_kernel",
    "build_error_matrix",
    "build_motion_kernel",
    "build_report",
    "cec",
    "convolve",
    "correlate",
    "corrupt_gallery",
    "corrupt_one",
    "corrupt_overlay",
    "corruption_error",
    "dedupe_records",
    "derive_seed",
    "error_rate",
    "evaluate",
    "generate",
    "hsv_to_rgb",
    "iter_corrupted",
    "kendall_swaps",
    "load_corrupted_manifest",
    "load_dataset_manifest",
    "load_predictions",
    "load_severity_table",
    "make_bubble_asset",
    "make_mark_asset",
    "pearson_r",
    "psnr",
    "regenerate_entry",
    "relative_ce",
    "rgb_to_hsv",
    "save_corrupted_manifest",
    "save_dataset_manifest",
    "save_predictions",
    "validate_kind",
    "validate_severity",
]
