"""Template alignment within a processing window."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .config import SuppressionParams
from .core import NoiseTemplate, as_samples, ncc
from .errors import BufferTooShort, DegenerateInput, NoMatch, OutOfRange
from .estimator import TIE_TOLERANCE

__all__ = ["MatchResult", "lag_scores", "match_template", "extract_matched_segment"]


@dataclass(frozen=True)
class MatchResult:
    lag: int
    score: float


def lag_scores(buffer, template, first_lag: int, last_lag: int) -> np.ndarray:
    """ncc of the template against ``buffer[lag:lag+L]`` for each lag, inclusive.

    Constant windows score ``-inf``.
    """
    x = as_samples(buffer)
    g = as_samples(getattr(template, "samples", template))
    L = g.size
    gc = g - g.mean()
    gn = np.sqrt(np.dot(gc, gc))
    if gn == 0.0:
        raise DegenerateInput("template has zero variance")
    win = sliding_window_view(x, L)[first_lag:last_lag + 1]
    win = win - win.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.einsum("ij,ij->i", win, win))
    with np.errstate(invalid="ignore", divide="ignore"):
        scores = (win @ gc) / (norms * gn)
    scores[~(norms > 0)] = -np.inf
    return scores


def match_template(buffer, template: NoiseTemplate, params: SuppressionParams) -> MatchResult:
    """Find the template in ``buffer`` at a lag in ``[N+1, 2N]``.

    Raises :class:`NoMatch` with the best lag and score when the peak
    correlation is below ``params.theta_corr``.
    """
    x = as_samples(buffer)
    N = params.frame_len_N
    L = len(template)
    if x.size < 2 * N + L:
        raise BufferTooShort(f"matching needs {2 * N + L} samples, got {x.size}")
    first, last = N + 1, 2 * N
    scores = lag_scores(x, template, first, last)
    peak = scores.max()
    if not np.isfinite(peak):
        raise NoMatch(first, float("-inf"))
    # exact rescore of near-peak lags; earliest lag wins ties
    near = np.flatnonzero(scores >= peak - 1e-9) + first
    exact = [(ncc(template.samples, x[k:k + L]), int(k)) for k in near]
    top = max(s for s, _ in exact)
    score, lag = next((s, k) for s, k in exact if s >= top - TIE_TOLERANCE)
    if score < params.theta_corr:
        raise NoMatch(lag, score)
    return MatchResult(lag, score)


def extract_matched_segment(buffer, lag: int, L: int) -> np.ndarray:
    """The matched segment ``buffer[lag:lag+L]``."""
    x = as_samples(buffer)
    if lag < 0 or L < 0 or lag + L > x.size:
        raise OutOfRange(f"segment [{lag}, {lag + L}) outside buffer of {x.size}")
    return x[lag:lag + L].copy()
