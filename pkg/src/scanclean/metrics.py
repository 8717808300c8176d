"""
Evaluation metrics.

The three ratio metrics follow the usual noise-suppression definitions::

    NS   = 20 log10(||g - g_hat|| / ||g||)
    SNR  = 20 log10(||v|| / ||g||)
    ISNR = 20 log10(||g|| / ||v - v_hat||)

Singular ratios are clamped to +/-120 dB so sweep tables never hold infinities.
"""
from __future__ import annotations

import numpy as np
from scipy import signal

from .core import as_samples
from .errors import EmptyInput, LengthMismatch, TooShort, ZeroOperand, ZeroReference

__all__ = [
    "DB_CLAMP",
    "noise_suppression_db",
    "snr_db",
    "isnr_db",
    "isnr_conventional_db",
    "utterance_mask",
    "welch_psd",
]

DB_CLAMP = 120.0


def _norm(x):
    return float(np.linalg.norm(x))


def _ratio_db(num, den):
    if num == 0.0:
        return -DB_CLAMP
    if den == 0.0:
        return DB_CLAMP
    return float(np.clip(20.0 * np.log10(num / den), -DB_CLAMP, DB_CLAMP))


def noise_suppression_db(g, g_hat) -> float:
    g = as_samples(g)
    g_hat = as_samples(g_hat)
    if g.shape != g_hat.shape:
        raise LengthMismatch("g and g_hat must have equal length")
    ref = _norm(g)
    if ref == 0.0:
        raise ZeroReference("||g|| is zero")
    return _ratio_db(_norm(g - g_hat), ref)


def snr_db(v, g) -> float:
    nv, ng = _norm(as_samples(v)), _norm(as_samples(g))
    if nv == 0.0 or ng == 0.0:
        raise ZeroOperand("SNR needs non-zero speech and noise")
    return 20.0 * np.log10(nv / ng)


def isnr_db(g, v, v_hat) -> float:
    g, v, v_hat = as_samples(g), as_samples(v), as_samples(v_hat)
    if v.shape != v_hat.shape:
        raise LengthMismatch("v and v_hat must have equal length")
    ref = _norm(g)
    if ref == 0.0:
        raise ZeroReference("||g|| is zero")
    return _ratio_db(ref, _norm(v - v_hat))


def isnr_conventional_db(g, v, v_hat) -> float:
    """Output SNR minus input SNR, with ``v - v_hat`` as the output noise.

    Algebraically identical to :func:`isnr_db`; computed along a separate
    path as a cross-check.
    """
    v, v_hat = as_samples(v), as_samples(v_hat)
    if v.shape != v_hat.shape:
        raise LengthMismatch("v and v_hat must have equal length")
    resid = _norm(v - v_hat)
    if resid == 0.0:
        return DB_CLAMP
    out = 20.0 * np.log10(_norm(v) / resid)
    return float(np.clip(out - snr_db(v, g), -DB_CLAMP, DB_CLAMP))


def utterance_mask(v_ref, frame_len: int, energy_fraction: float = 0.05) -> np.ndarray:
    """Per-sample speech mask from frame RMS relative to the loudest frame.

    A trailing partial frame is judged on its own samples.
    """
    x = as_samples(v_ref)
    if x.size == 0:
        raise EmptyInput("utterance_mask of empty signal")
    if frame_len <= 0:
        raise ValueError("frame_len must be positive")
    if not 0 < energy_fraction < 1:
        raise ValueError("energy_fraction must lie in (0, 1)")
    n_frames = -(-x.size // frame_len)
    padded = np.zeros(n_frames * frame_len)
    padded[:x.size] = x
    counts = np.full(n_frames, frame_len)
    counts[-1] = x.size - (n_frames - 1) * frame_len
    frame_rms = np.sqrt((padded.reshape(n_frames, frame_len) ** 2).sum(axis=1) / counts)
    peak = frame_rms.max()
    speech = frame_rms > energy_fraction * peak
    return np.repeat(speech, frame_len)[:x.size]


def welch_psd(x, sample_rate: float | None = None, window_s: float = 0.1,
              overlap_frac: float = 0.8):
    """Hann-windowed Welch PSD; returns ``(frequency_hz, power_density)``."""
    if sample_rate is None:
        sample_rate = getattr(x, "sample_rate", None)
        if sample_rate is None:
            raise ValueError("sample_rate is required for plain arrays")
    x = as_samples(x)
    nperseg = int(round(window_s * sample_rate))
    if nperseg < 2 or x.size < nperseg:
        raise TooShort(f"signal of {x.size} samples shorter than the {nperseg}-sample window")
    noverlap = int(round(overlap_frac * nperseg))
    noverlap = min(noverlap, nperseg - 1)
    return signal.welch(x, fs=sample_rate, window="hann", nperseg=nperseg,
                        noverlap=noverlap, scaling="density")
