"""
Streaming suppression engine.

Samples are pushed in chunks of any size; processing happens on fixed
windows determined only by stream position, so the output is identical for
every chunking of the same input.  Output sample ``i`` always corresponds to
input sample ``i``; the engine holds back at most ``tau`` samples.

Lifecycle::

    WarmupEstimating --template found--> Locked --no match--> MatchLost
                                           ^                      |
                                           +----template found----+

Outside matched segments (warmup, re-acquisition, alignment gaps, flush)
samples are passed through the band-limiting filter only.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .config import SuppressionParams
from .core import NoiseTemplate, as_samples, rms
from .errors import NoMatch, SampleRateMismatch, TemplateNotFound
from .estimator import estimate_template
from .matcher import match_template
from .suppressor import (
    DigitalFilterMask,
    apply_lowpass,
    make_lowpass,
    make_weighting,
    maybe_update_template,
    subtract_and_reconstruct,
)

__all__ = [
    "Phase",
    "Event",
    "EngineState",
    "SuppressionEngine",
    "DenoiseResult",
    "denoise",
    "latency_samples",
    "write_events",
]


class Phase(str, enum.Enum):
    WARMUP = "WarmupEstimating"
    LOCKED = "Locked"
    MATCH_LOST = "MatchLost"


@dataclass(frozen=True)
class Event:
    sample_index: int
    kind: str
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"sample_index": self.sample_index, "kind": self.kind, **self.detail}


def write_events(events, fp) -> None:
    """Write events as one JSON object per line."""
    for ev in events:
        fp.write(json.dumps(ev.to_dict(), sort_keys=True) + "\n")


@dataclass
class EngineState:
    phase: Phase = Phase.WARMUP
    ring: np.ndarray = field(default_factory=lambda: np.empty(0))
    ring_start: int = 0  # absolute index of ring[0]
    cursor: int = 0  # absolute index of the next sample to emit
    template: NoiseTemplate | None = None
    consumed: int = 0
    emitted: int = 0
    events: list = field(default_factory=list)

    @property
    def pending(self) -> int:
        return self.consumed - self.cursor


def latency_samples(params: SuppressionParams) -> int:
    return params.tau


class SuppressionEngine:
    """Single-owner streaming engine; drive it with :meth:`push` and :meth:`flush`."""

    def __init__(self, params: SuppressionParams):
        self.params = params
        self.state = EngineState()
        self._spectral_cache = {}
        N = params.frame_len_N
        # history kept behind the cursor for the next window's look-back
        self._history = N + 1 + (N - 1) // 2

    # read-only views of the state
    @property
    def phase(self) -> Phase:
        return self.state.phase

    @property
    def template(self) -> NoiseTemplate | None:
        return self.state.template

    @property
    def events(self) -> list:
        return self.state.events

    @property
    def consumed(self) -> int:
        return self.state.consumed

    @property
    def emitted(self) -> int:
        return self.state.emitted

    @property
    def latency(self) -> int:
        return self.params.tau

    def push(self, chunk) -> np.ndarray:
        """Append samples; return whatever became ready for output."""
        rate = getattr(chunk, "sample_rate", None)
        if rate is not None and rate != self.params.s_r:
            raise SampleRateMismatch(f"chunk at {rate} Hz, engine configured for {self.params.s_r} Hz")
        x = as_samples(chunk)
        st = self.state
        if x.size:
            st.ring = np.concatenate([st.ring, x])
            st.consumed += x.size
        out = []
        while st.pending >= self._required():
            if st.phase is Phase.LOCKED:
                out.append(self._locked_step())
            else:
                out.append(self._estimate_step())
        self._trim()
        return self._emit(out)

    def flush(self) -> np.ndarray:
        """Drain everything pending through the band-limit filter."""
        st = self.state
        n = st.pending
        if n == 0:
            return np.empty(0)
        seg = self._passthrough(st.cursor, st.consumed, "flush")
        st.cursor = st.consumed
        self._trim()
        return self._emit([seg])

    # internals

    def _log(self, index, kind, **detail):
        self.state.events.append(Event(int(index), kind, detail))

    def _emit(self, parts):
        out = np.concatenate(parts) if parts else np.empty(0)
        self.state.emitted += out.size
        return out

    def _view(self, start, stop):
        st = self.state
        return st.ring[start - st.ring_start:stop - st.ring_start]

    def _trim(self):
        st = self.state
        keep_from = max(st.ring_start, st.cursor - self._history)
        drop = keep_from - st.ring_start
        if drop > 4 * self.params.tau:
            st.ring = st.ring[drop:].copy()
            st.ring_start = keep_from

    def _passthrough(self, start, stop, reason):
        if stop <= start:
            return np.empty(0)
        self._log(start, "passthrough", length=int(stop - start), reason=reason)
        return apply_lowpass(self._view(start, stop), self.params.lowpass_cutoff, self.params.s_r)

    def _set_phase(self, phase, index, **detail):
        old = self.state.phase
        self.state.phase = phase
        self._log(index, "phase_transition", **{"from": old.value, "to": phase.value}, **detail)

    def _window_start(self):
        st = self.state
        N = self.params.frame_len_N
        L = len(st.template)
        back = N + 1 + min((N - 1) // 2, L - 1)
        return max(st.cursor - back, st.ring_start)

    def _required(self):
        st = self.state
        tau = self.params.tau
        if st.phase is not Phase.LOCKED:
            return tau
        end = self._window_start() + 2 * self.params.frame_len_N + len(st.template)
        return max(tau, end - st.cursor)

    def _spectral_ops(self, L):
        ops = self._spectral_cache.get(L)
        if ops is None:
            p = self.params
            wfun = make_weighting(p.weighting_kind, L, p.s_r)
            if p.lowpass_cutoff is None:
                dmask = DigitalFilterMask.all_pass(L)
            else:
                dmask = make_lowpass(p.lowpass_cutoff, L, p.s_r)
            ops = self._spectral_cache[L] = (wfun, dmask)
        return ops

    def _estimate_step(self):
        st = self.state
        p = self.params
        c = st.cursor
        buf = self._view(c, c + p.tau)
        reason = "warmup" if st.phase is Phase.WARMUP else "reacquire"
        try:
            template, cand = estimate_template(buf, p)
        except TemplateNotFound as exc:
            self._log(c, "estimate_failed", best_score=float(exc.best_score))
            step = p.tau // 2
            seg = self._passthrough(c, c + step, reason)
            st.cursor = c + step
            return seg
        stop = c + cand.offset + cand.period_L
        seg = self._passthrough(c, stop, reason)
        st.cursor = stop
        st.template = template
        self._set_phase(Phase.LOCKED, c + cand.offset, period=cand.period_L, score=cand.score)
        return seg

    def _locked_step(self):
        st = self.state
        p = self.params
        N = p.frame_len_N
        tmpl = st.template
        L = len(tmpl)
        c = st.cursor
        s = self._window_start()
        window = self._view(s, s + 2 * N + L)
        try:
            res = match_template(window, tmpl, p)
        except NoMatch as exc:
            self._log(s + exc.best_lag, "match_lost", best_lag=int(exc.best_lag), best_score=float(exc.best_score))
            end = s + 2 * N + L
            seg = self._passthrough(c, end, "match_lost")
            st.cursor = end
            self._set_phase(Phase.MATCH_LOST, end)
            return seg
        a = s + res.lag
        x_b = window[res.lag:res.lag + L]
        wfun, dmask = self._spectral_ops(L)
        v_hat = subtract_and_reconstruct(x_b, tmpl, wfun, dmask, p.alpha)
        self._log(a, "match_score", lag=int(res.lag), score=float(res.score), length=L)
        new = maybe_update_template(tmpl, x_b, v_hat, p.gamma, p.theta_rms)
        if new is not tmpl:
            self._log(a, "update", rms=rms(v_hat), update_count=new.update_count)
            st.template = new
        if a >= c:
            parts = [self._passthrough(c, a, "gap"), v_hat]
        else:
            parts = [v_hat[c - a:]]
        st.cursor = a + L
        return np.concatenate(parts)


@dataclass
class DenoiseResult:
    output: np.ndarray
    events: list
    engine: SuppressionEngine

    def events_of(self, kind):
        return [e for e in self.events if e.kind == kind]


def denoise(x, params: SuppressionParams, chunk_size: int | None = None) -> DenoiseResult:
    """Run a whole signal through a fresh engine and flush it."""
    eng = SuppressionEngine(params)
    x = as_samples(x)
    if chunk_size is None:
        parts = [eng.push(x)]
    else:
        parts = [eng.push(x[i:i + chunk_size]) for i in range(0, x.size, chunk_size)]
    parts.append(eng.flush())
    return DenoiseResult(np.concatenate(parts), list(eng.events), eng)
