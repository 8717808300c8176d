"""Suppression parameters and the ``key = value`` config file format."""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigParseError, ConfigValidationError

__all__ = [
    "WeightingKind",
    "SuppressionParams",
    "buffer_length",
    "latency_samples",
    "load_config",
    "parse_config",
]


class WeightingKind(str, enum.Enum):
    ZERO = "zero"
    LINEAR = "linear"

    @classmethod
    def parse(cls, value) -> "WeightingKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"0": "zero", "w0": "zero", "linearfreq": "linear", "lin": "linear", "|f|": "linear"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown weighting kind {value!r} (expected zero or linear)") from None


def buffer_length(frame_len: int, l_est: float, w: float, s_r: float) -> int:
    """Processing buffer length ``N + 2 (l_est + w) s_r`` in samples."""
    return int(frame_len) + int(round(2.0 * (l_est + w) * s_r))


@dataclass(frozen=True)
class SuppressionParams:
    """Every tunable of the suppression algorithm.

    ``frame_len_N`` defaults to 20 ms worth of samples.  ``lowpass_cutoff``
    of ``None`` disables the output band limit.  ``search_stride`` > 1
    enables a coarse-to-fine offset scan in template estimation.
    """

    l_est: float = 0.05
    w: float = 0.002
    s_r: float = 16000.0
    frame_len_N: int | None = None
    theta_xcorr: float = 0.9
    theta_corr: float = 0.8
    alpha: float = 1.0
    theta_rms: float = 0.02
    gamma: float = 0.9
    weighting_kind: WeightingKind = WeightingKind.LINEAR
    lowpass_cutoff: float | None = 5000.0
    search_stride: int = 1

    def __post_init__(self):
        object.__setattr__(self, "weighting_kind", WeightingKind.parse(self.weighting_kind))
        if not (self.s_r > 0 and math.isfinite(self.s_r)):
            raise ConfigValidationError("s_r", "sample rate must be positive")
        if self.frame_len_N is None:
            object.__setattr__(self, "frame_len_N", int(round(0.02 * self.s_r)))
        if int(self.frame_len_N) != self.frame_len_N or self.frame_len_N <= 0:
            raise ConfigValidationError("frame_len_N", "must be a positive integer")
        object.__setattr__(self, "frame_len_N", int(self.frame_len_N))
        if not self.l_est > 0:
            raise ConfigValidationError("l_est", "must be positive")
        if not 0 < self.w < self.l_est:
            raise ConfigValidationError("w", "must satisfy 0 < w < l_est")
        if self.min_period < 2:
            raise ConfigValidationError("l_est", "shortest candidate period is under 2 samples")
        for name in ("theta_xcorr", "theta_corr", "gamma"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigValidationError(name, "must lie in [0, 1]")
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise ConfigValidationError("alpha", "must be non-negative")
        if not (self.theta_rms >= 0 and math.isfinite(self.theta_rms)):
            raise ConfigValidationError("theta_rms", "must be non-negative")
        if self.lowpass_cutoff is not None and not 0 < self.lowpass_cutoff <= self.s_r / 2:
            raise ConfigValidationError("lowpass_cutoff", "must lie in (0, s_r/2]")
        if int(self.search_stride) != self.search_stride or self.search_stride < 1:
            raise ConfigValidationError("search_stride", "must be a positive integer")

    @property
    def min_period(self) -> int:
        return int(round((self.l_est - self.w) * self.s_r))

    @property
    def max_period(self) -> int:
        return int(round((self.l_est + self.w) * self.s_r))

    @property
    def tau(self) -> int:
        return buffer_length(self.frame_len_N, self.l_est, self.w, self.s_r)

    @property
    def tau_ms(self) -> float:
        return 1000.0 * self.tau / self.s_r

    def replace(self, **changes) -> "SuppressionParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["weighting_kind"] = self.weighting_kind.value
        d["tau"] = self.tau
        return d


def latency_samples(params: SuppressionParams) -> int:
    return params.tau


_ALIASES = {
    "sample_rate": "s_r",
    "n": "frame_len_N",
    "frame_len": "frame_len_N",
    "frame_len_n": "frame_len_N",
    "weighting": "weighting_kind",
    "cutoff": "lowpass_cutoff",
}
_FIELDS = {f.name: f for f in dataclasses.fields(SuppressionParams)}


def _convert(name, raw, lineno):
    text = raw.strip()
    try:
        if name == "weighting_kind":
            return WeightingKind.parse(text)
        if name == "lowpass_cutoff":
            if text.lower() in ("none", "off", ""):
                return None
            return float(text)
        if name in ("frame_len_N", "search_stride"):
            return int(text)
        return float(text)
    except ValueError as exc:
        raise ConfigParseError(lineno, f"bad value for {name}: {exc}") from None


def parse_config(text: str) -> SuppressionParams:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(lineno, f"expected 'key = value', got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        name = key if key in _FIELDS else _ALIASES.get(key.lower())
        if name is None:
            raise ConfigParseError(lineno, f"unknown key {key!r}")
        if name in values:
            raise ConfigParseError(lineno, f"duplicate key {key!r}")
        values[name] = _convert(name, raw, lineno)
    return SuppressionParams(**values)


def load_config(path) -> SuppressionParams:
    return parse_config(Path(path).read_text(encoding="utf-8"))
