"""
Shared signal types and numerical primitives.

Everything here is a pure function over float64 arrays.  Functions accept
either plain array-likes or :class:`SampleVector`, which exposes
``__array__`` so ``np.asarray`` unwraps it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, EmptyInput, LengthMismatch

__all__ = [
    "SampleVector",
    "Spectrum",
    "NoiseTemplate",
    "as_samples",
    "ncc",
    "rms",
    "halfwave_rectify",
    "forward_transform",
    "inverse_transform",
]


def as_samples(x) -> np.ndarray:
    """Return ``x`` as a 1-D float64 array (no copy when already one)."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D sample sequence, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class SampleVector:
    """Mono real-valued samples at a known rate, nominally in [-1, 1]."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        arr = as_samples(self.samples)
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        object.__setattr__(self, "samples", arr)

    def __len__(self):
        return self.samples.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.samples
        return self.samples.astype(dtype)

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate

    def slice(self, start: int, stop: int) -> "SampleVector":
        return SampleVector(self.samples[start:stop], self.sample_rate)


@dataclass(frozen=True)
class Spectrum:
    """Full (two-sided) DFT coefficients of a length-L real vector."""

    coefficients: np.ndarray
    bin_resolution: float = 1.0

    def __len__(self):
        return self.coefficients.shape[0]

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.coefficients)

    @property
    def phase(self) -> np.ndarray:
        return np.angle(self.coefficients)


def ncc(a, b) -> float:
    """Zero-mean, unit-norm correlation coefficient of two equal-length vectors."""
    a = as_samples(a)
    b = as_samples(b)
    if a.shape != b.shape:
        raise LengthMismatch(f"ncc operands differ in length: {a.size} vs {b.size}")
    if a.size == 0:
        raise EmptyInput("ncc of empty vectors")
    ac = a - a.mean()
    bc = b - b.mean()
    na = np.sqrt(np.dot(ac, ac))
    nb = np.sqrt(np.dot(bc, bc))
    if na == 0.0 or nb == 0.0:
        raise DegenerateInput("ncc operand has zero variance")
    r = float(np.dot(ac, bc) / (na * nb))
    return min(1.0, max(-1.0, r))


def rms(x) -> float:
    x = as_samples(x)
    if x.size == 0:
        raise EmptyInput("rms of empty vector")
    return float(np.sqrt(np.mean(x * x)))


def halfwave_rectify(x) -> np.ndarray:
    return np.maximum(np.asarray(x, dtype=np.float64), 0.0)


def forward_transform(x, sample_rate: float | None = None) -> Spectrum:
    """DFT at the vector's own length; no zero padding."""
    if sample_rate is None:
        sample_rate = getattr(x, "sample_rate", 1.0)
    x = as_samples(x)
    if x.size == 0:
        raise EmptyInput("cannot transform an empty vector")
    return Spectrum(np.fft.fft(x), sample_rate / x.size)


def inverse_transform(spectrum, sample_rate: float | None = None) -> np.ndarray:
    """Real part of the inverse DFT.

    Accepts a :class:`Spectrum` or a raw complex coefficient array.
    """
    coeffs = spectrum.coefficients if isinstance(spectrum, Spectrum) else np.asarray(spectrum)
    if coeffs.size == 0:
        raise EmptyInput("cannot invert an empty spectrum")
    return np.fft.ifft(coeffs).real


@dataclass(frozen=True)
class NoiseTemplate:
    """Current noise template with its cached magnitude spectrum.

    Instances are immutable; :meth:`blend` returns a new template.
    """

    samples: np.ndarray
    magnitude_spectrum: np.ndarray = field(repr=False)
    update_count: int = 0

    @classmethod
    def from_samples(cls, samples, update_count: int = 0) -> "NoiseTemplate":
        arr = np.array(as_samples(samples), dtype=np.float64)
        if arr.size == 0:
            raise EmptyInput("template cannot be empty")
        arr.setflags(write=False)
        mag = np.abs(np.fft.fft(arr))
        mag.setflags(write=False)
        return cls(arr, mag, update_count)

    def __len__(self):
        return self.samples.shape[0]

    def blend(self, x_b, gamma: float) -> "NoiseTemplate":
        """``gamma * self + (1 - gamma) * x_b`` with the update counter bumped."""
        x_b = as_samples(x_b)
        if x_b.shape != self.samples.shape:
            raise LengthMismatch(f"segment length {x_b.size} != template length {len(self)}")
        return NoiseTemplate.from_samples(
            gamma * self.samples + (1.0 - gamma) * x_b, self.update_count + 1
        )
