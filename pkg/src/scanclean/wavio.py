"""Mono WAV reading and writing (PCM 16-bit and IEEE float 32-bit)."""
from __future__ import annotations

import logging
import warnings
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .core import SampleVector, as_samples
from .errors import CorruptHeader, MultiChannel, UnsupportedFormat

__all__ = ["read_wav", "write_wav", "ENCODINGS"]

log = logging.getLogger(__name__)

ENCODINGS = ("pcm16", "float32")
_PCM_SCALE = 32768.0


def read_wav(path) -> SampleVector:
    path = Path(path)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", wavfile.WavFileWarning)
            rate, data = wavfile.read(path)
    except FileNotFoundError:
        raise
    except ValueError as exc:
        msg = str(exc)
        if "format" in msg.lower() and "not understood" not in msg.lower():
            raise UnsupportedFormat(f"{path}: {msg}") from None
        raise CorruptHeader(f"{path}: {msg}") from None
    except (EOFError, OSError, IndexError, UnboundLocalError) as exc:
        # scipy trips over itself on files with no fmt chunk
        raise CorruptHeader(f"{path}: {exc}") from None
    if data.ndim > 1:
        if data.shape[1] != 1:
            raise MultiChannel(f"{path}: {data.shape[1]} channels; only mono is supported")
        data = data[:, 0]
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / _PCM_SCALE
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise UnsupportedFormat(f"{path}: sample type {data.dtype} (need PCM16 or float32)")
    if not np.all(np.isfinite(samples)):
        raise CorruptHeader(f"{path}: non-finite samples")
    return SampleVector(samples, float(rate))


def write_wav(path, x, sample_rate: float | None = None, encoding: str = "pcm16") -> int:
    """Write mono samples; returns the number of samples clipped to [-1, 1]."""
    if sample_rate is None:
        sample_rate = getattr(x, "sample_rate", None)
        if sample_rate is None:
            raise ValueError("sample_rate is required for plain arrays")
    if encoding not in ENCODINGS:
        raise UnsupportedFormat(f"encoding {encoding!r} not in {ENCODINGS}")
    rate = int(round(sample_rate))
    if rate != sample_rate:
        raise UnsupportedFormat(f"WAV needs an integer sample rate, got {sample_rate}")
    samples = as_samples(x)
    clipped = int(np.count_nonzero(np.abs(samples) > 1.0))
    if clipped:
        log.warning("clipping %d of %d samples to [-1, 1] in %s", clipped, samples.size, path)
    samples = np.clip(samples, -1.0, 1.0)
    if encoding == "pcm16":
        # +1.0 saturates at the largest positive code
        codes = np.clip(np.round(samples * _PCM_SCALE), -32768, 32767).astype(np.int16)
        wavfile.write(path, rate, codes)
    else:
        wavfile.write(path, rate, samples.astype(np.float32))
    return clipped
