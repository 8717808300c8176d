"""
Template subtraction, weighted magnitude subtraction and template update.

All spectra live on the template's own length-L DFT grid.  Given the matched
segment ``x_b`` and template ``g``::

    x_res = x_b - g
    Gamma = max(|F x_res| - alpha * w * |F g|, 0)
    v_hat = Re(F^-1(d * Gamma * exp(j angle(F x_res))))

and the template is blended toward ``x_b`` when ``rms(v_hat) < theta_rms``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import WeightingKind
from .core import NoiseTemplate, as_samples, halfwave_rectify, rms
from .errors import InvalidCutoff, LengthMismatch

__all__ = [
    "WeightingFunction",
    "DigitalFilterMask",
    "make_weighting",
    "make_lowpass",
    "apply_lowpass",
    "subtract_and_reconstruct",
    "maybe_update_template",
]


def _signed_bins(L):
    # bin k holds frequency k * s_r / L for k <= L/2, (k - L) * s_r / L above
    k = np.arange(L)
    return np.where(k <= L // 2, k, k - L)


@dataclass(frozen=True)
class WeightingFunction:
    kind: WeightingKind
    values: np.ndarray

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class DigitalFilterMask:
    values: np.ndarray
    cutoff: float | None

    def __len__(self):
        return self.values.shape[0]

    @classmethod
    def all_pass(cls, L: int) -> "DigitalFilterMask":
        return cls(np.ones(L), None)


def make_weighting(kind, L: int, s_r: float = 1.0) -> WeightingFunction:
    """Per-bin weights: all zero, or ``|f|`` normalized so Nyquist is 1."""
    kind = WeightingKind.parse(kind)
    if L <= 0:
        raise ValueError("L must be positive")
    if kind is WeightingKind.ZERO:
        return WeightingFunction(kind, np.zeros(L))
    # |f| / (s_r/2) = 2|k| / L, independent of s_r
    return WeightingFunction(kind, 2.0 * np.abs(_signed_bins(L)) / L)


def make_lowpass(cutoff: float | None, L: int, s_r: float) -> DigitalFilterMask:
    """Brick-wall mask passing bins with ``|f| <= cutoff``; ``None`` passes all."""
    if cutoff is None:
        return DigitalFilterMask.all_pass(L)
    if not 0 < cutoff <= s_r / 2:
        raise InvalidCutoff(f"cutoff {cutoff} Hz outside (0, {s_r / 2}]")
    # integer-side comparison avoids rounding at the cutoff bin
    inside = np.abs(_signed_bins(L)) * s_r <= cutoff * L
    return DigitalFilterMask(inside.astype(np.float64), cutoff)


def apply_lowpass(x, cutoff: float | None, s_r: float) -> np.ndarray:
    """Band-limit an arbitrary-length segment with a brick-wall mask."""
    x = as_samples(x)
    if cutoff is None or x.size == 0 or cutoff >= s_r / 2:
        return x.copy()
    mask = make_lowpass(cutoff, x.size, s_r)
    return np.fft.ifft(np.fft.fft(x) * mask.values).real


def subtract_and_reconstruct(x_b, template: NoiseTemplate, wfun: WeightingFunction,
                             dmask: DigitalFilterMask, alpha: float) -> np.ndarray:
    x_b = as_samples(x_b)
    L = len(template)
    if x_b.size != L:
        raise LengthMismatch(f"segment length {x_b.size} != template length {L}")
    if len(wfun) != L or len(dmask) != L:
        raise LengthMismatch("weighting and filter mask must have one value per template bin")
    x_res = x_b - template.samples
    spec = np.fft.fft(x_res)
    gamma = halfwave_rectify(np.abs(spec) - alpha * (wfun.values * template.magnitude_spectrum))
    return np.fft.ifft(dmask.values * gamma * np.exp(1j * np.angle(spec))).real


def maybe_update_template(template: NoiseTemplate, x_b, v_hat, gamma: float,
                          theta_rms: float) -> NoiseTemplate:
    """Blend the template toward ``x_b`` when the recovered signal is quiet."""
    x_b = as_samples(x_b)
    if x_b.size != len(template):
        raise LengthMismatch(f"segment length {x_b.size} != template length {len(template)}")
    if rms(v_hat) < theta_rms:
        return template.blend(x_b, gamma)
    return template
