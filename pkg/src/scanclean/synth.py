"""
Synthetic scanner noise, test utterances and SNR-controlled mixing.

The gradient noise model is a train of identical damped-sinusoid bursts, one
per slice period, with optional per-period onset jitter and a white
background floor.  Bursts are truncated (with a cosine fade) so consecutive
bursts never overlap; with zero jitter and an integer period in samples the
output is exactly periodic.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import as_samples
from .errors import InvalidModel, OutOfRange, ZeroSignal

__all__ = [
    "PulseComponent",
    "NoiseModel",
    "DEFAULT_PULSES",
    "gen_gradient_noise",
    "gen_test_utterance",
    "Mixture",
    "mix_at_snr",
    "standard_noise_model",
]


@dataclass(frozen=True)
class PulseComponent:
    frequency_hz: float
    amplitude: float
    decay_rate: float  # 1/s


DEFAULT_PULSES = (
    PulseComponent(600.0, 0.40, 60.0),
    PulseComponent(1100.0, 0.30, 80.0),
    PulseComponent(1900.0, 0.15, 120.0),
)


@dataclass(frozen=True)
class NoiseModel:
    period_s: float = 0.05
    jitter_s: float = 0.0
    pulse_spec: tuple = field(default=DEFAULT_PULSES)
    background_level: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "pulse_spec", tuple(self.pulse_spec))
        if not self.period_s > 0:
            raise InvalidModel("period_s must be positive")
        if not 0 <= self.jitter_s < self.period_s / 4:
            raise InvalidModel("jitter_s must lie in [0, period_s/4)")
        if self.background_level < 0:
            raise InvalidModel("background_level must be non-negative")
        if not self.pulse_spec:
            raise InvalidModel("pulse_spec is empty")
        for comp in self.pulse_spec:
            if comp.frequency_hz <= 0 or comp.decay_rate < 0:
                raise InvalidModel(f"bad pulse component {comp}")


def standard_noise_model(seed: int = 0, jitter_s: float = 0.001,
                         background_level: float = 0.005) -> NoiseModel:
    """Noise model used by the simulation sweep."""
    return NoiseModel(period_s=0.05, jitter_s=jitter_s, background_level=background_level, seed=seed)


def _period_samples(period_s, s_r):
    P = period_s * s_r
    r = round(P)
    return float(r) if abs(P - r) < 1e-9 else P


def _burst(model, t, burst_len_s):
    y = np.zeros_like(t)
    for c in model.pulse_spec:
        y += c.amplitude * np.exp(-c.decay_rate * t) * np.sin(2 * np.pi * c.frequency_hz * t)
    # cosine fade over the last fifth of the burst
    fade_start = 0.8 * burst_len_s
    tail = t > fade_start
    y[tail] *= 0.5 * (1 + np.cos(np.pi * (t[tail] - fade_start) / (burst_len_s - fade_start)))
    return y


def gen_gradient_noise(model: NoiseModel, duration_s: float, s_r: float) -> np.ndarray:
    """Render ``duration_s`` seconds of pulse-train noise at ``s_r`` Hz."""
    nyq = s_r / 2
    for c in model.pulse_spec:
        if c.frequency_hz >= nyq:
            raise InvalidModel(f"component at {c.frequency_hz} Hz is not below Nyquist ({nyq} Hz)")
    if duration_s < 2 * model.period_s:
        raise InvalidModel("duration must cover at least two periods")
    n = int(round(duration_s * s_r))
    P = _period_samples(model.period_s, s_r)
    J = model.jitter_s * s_r
    burst_n = int(np.floor(P - 2 * J))
    n_pulses = int(np.floor((n - 1) / P)) + 1

    rng = np.random.default_rng(model.seed)
    jitter = rng.uniform(-J, J, n_pulses) if J > 0 else np.zeros(n_pulses)
    background = rng.standard_normal(n) * model.background_level

    y = np.zeros(n)
    burst_s = burst_n / s_r
    cache = {}
    for k in range(n_pulses):
        onset = k * P + jitter[k]
        i0 = int(np.ceil(onset))
        frac = i0 - onset
        shape = cache.get(frac)
        if shape is None:
            shape = cache[frac] = _burst(model, (np.arange(burst_n) + frac) / s_r, burst_s)
        lo, hi = max(i0, 0), min(i0 + burst_n, n)
        if hi > lo:
            y[lo:hi] += shape[lo - i0:hi - i0]
    return y + background


def gen_test_utterance(duration_s: float, s_r: float, seed: int = 0) -> np.ndarray:
    """A vowel-like stand-in for a single spoken word.

    Silence for the first and last 10% of samples; in between, a harmonic
    source gliding from 110 Hz to 90 Hz through three moving resonances,
    with 20 ms raised-cosine onset and offset.  Peak amplitude is 0.9.
    """
    if not duration_s > 0:
        raise ValueError("duration must be positive")
    n = int(round(duration_s * s_r))
    out = np.zeros(n)
    lead = int(np.ceil(0.1 * n))
    m = n - 2 * lead
    if m <= 0:
        return out
    rng = np.random.default_rng(seed)
    u = np.linspace(0.0, 1.0, m)
    t = np.arange(m) / s_r

    vibrato = 1.0 + 0.01 * np.sin(2 * np.pi * rng.uniform(4.0, 6.0) * t + rng.uniform(0, 2 * np.pi))
    f0 = (110.0 - 20.0 * u) * vibrato
    phase0 = 2 * np.pi * np.cumsum(f0) / s_r

    wobble = rng.uniform(0.9, 1.1, size=(3, 2))
    formants = [
        (650.0 * wobble[0, 0] + (450.0 * wobble[0, 1] - 650.0 * wobble[0, 0]) * u, 80.0),
        (1100.0 * wobble[1, 0] + (1700.0 * wobble[1, 1] - 1100.0 * wobble[1, 0]) * u, 120.0),
        (2500.0 * wobble[2, 0] + (2600.0 * wobble[2, 1] - 2500.0 * wobble[2, 0]) * u, 160.0),
    ]
    top = min(4000.0, 0.45 * s_r)
    n_harm = int(top // f0.max())
    phases = rng.uniform(0, 2 * np.pi, n_harm)
    v = np.zeros(m)
    for h in range(1, n_harm + 1):
        fh = h * f0
        gain = np.zeros(m)
        for fc, bw in formants:
            r = fh / fc
            gain += 1.0 / np.sqrt((1 - r * r) ** 2 + (fh * bw / (fc * fc)) ** 2)
        v += gain / h * np.sin(h * phase0 + phases[h - 1])

    ramp = min(int(round(0.02 * s_r)), m // 2)
    env = np.ones(m)
    if ramp > 0:
        edge = 0.5 * (1 - np.cos(np.pi * np.arange(ramp) / ramp))
        env[:ramp] = edge
        env[m - ramp:] = edge[::-1]
    v *= env
    peak = np.max(np.abs(v))
    if peak > 0:
        v *= 0.9 / peak
    out[lead:lead + m] = v
    return out


@dataclass(frozen=True)
class Mixture:
    y: np.ndarray
    v_scaled: np.ndarray  # placed in a full-length zero vector
    g_used: np.ndarray
    offset_samples: int
    gain: float


def mix_at_snr(v, g, target_snr_db: float, offset_samples: int = 0) -> Mixture:
    """Scale ``v`` to ``target_snr_db`` against all of ``g`` and add it at an offset."""
    v = as_samples(v)
    g = as_samples(g)
    if offset_samples < 0 or offset_samples + v.size > g.size:
        raise OutOfRange(f"utterance of {v.size} at offset {offset_samples} overruns noise of {g.size}")
    nv, ng = np.linalg.norm(v), np.linalg.norm(g)
    if nv == 0 or ng == 0:
        raise ZeroSignal("speech and noise must both be non-zero")
    gain = ng / nv * 10.0 ** (target_snr_db / 20.0)
    placed = np.zeros_like(g)
    placed[offset_samples:offset_samples + v.size] = gain * v
    return Mixture(g + placed, placed, g.copy(), int(offset_samples), float(gain))
