"""Suppression of periodic MRI scanner noise in single-channel speech recordings."""

__version__ = "0.1.0"

from .config import SuppressionParams, WeightingKind, latency_samples, load_config  # noqa: E402
from .core import NoiseTemplate, SampleVector, forward_transform, inverse_transform, ncc, rms  # noqa: E402
from .engine import Phase, SuppressionEngine, denoise  # noqa: E402
from .estimator import estimate_template  # noqa: E402
from .matcher import match_template  # noqa: E402

__all__ = [
    "SuppressionParams",
    "WeightingKind",
    "latency_samples",
    "load_config",
    "NoiseTemplate",
    "SampleVector",
    "forward_transform",
    "inverse_transform",
    "ncc",
    "rms",
    "Phase",
    "SuppressionEngine",
    "denoise",
    "estimate_template",
    "match_template",
]
