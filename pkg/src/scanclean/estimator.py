"""
Initial noise template estimation.

Two adjacent windows of equal length ``L`` are correlated for every
candidate period ``L`` in ``[round((l_est - w) s_r), round((l_est + w) s_r)]``
and every offset into the search buffer.  The first window of the best pair
becomes the template once its score reaches ``theta_xcorr``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SuppressionParams
from .core import NoiseTemplate, as_samples, ncc
from .errors import BufferTooShort, DegenerateInput, TemplateNotFound

__all__ = ["TemplateCandidate", "scan_candidates", "estimate_template", "TIE_TOLERANCE"]

# scores closer than this are treated as equal when breaking ties
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class TemplateCandidate:
    offset: int
    period_L: int
    score: float


def _running_sums(x):
    c1 = np.concatenate([[0.0], np.cumsum(x)])
    c2 = np.concatenate([[0.0], np.cumsum(x * x)])
    return c1, c2


def _pair_scores(x, L, offsets, sums):
    """Screening ncc of x[o:o+L] against x[o+L:o+2L] for each offset.

    Uses running sums, so each period costs O(len(x)); the winner is
    rescored exactly by :func:`_select`.
    """
    c1, c2 = sums
    cross = np.concatenate([[0.0], np.cumsum(x[:-L] * x[L:])])
    sa = c1[offsets + L] - c1[offsets]
    sb = c1[offsets + 2 * L] - c1[offsets + L]
    qa = c2[offsets + L] - c2[offsets]
    qb = c2[offsets + 2 * L] - c2[offsets + L]
    sab = cross[offsets + L] - cross[offsets]
    va = qa - sa * sa / L
    vb = qb - sb * sb / L
    cov = sab - sa * sb / L
    # relative floor: below it the window is numerically constant
    floor = 1e-10 * np.maximum(qa, qb) + 1e-300
    ok = (va > floor) & (vb > floor)
    scores = np.full(offsets.size, -np.inf)
    scores[ok] = cov[ok] / np.sqrt(va[ok] * vb[ok])
    return scores


def _scan(x, periods, offset_sets):
    """Return (scores, offsets, periods) flattened over all evaluated pairs."""
    sums = _running_sums(x)
    all_scores, all_offsets, all_periods = [], [], []
    for L in periods:
        offsets = offset_sets(L)
        if offsets.size == 0:
            continue
        all_scores.append(_pair_scores(x, L, offsets, sums))
        all_offsets.append(offsets)
        all_periods.append(np.full(offsets.size, L))
    if not all_scores:
        return np.empty(0), np.empty(0, int), np.empty(0, int)
    return np.concatenate(all_scores), np.concatenate(all_offsets), np.concatenate(all_periods)


def _exact(x, o, L):
    try:
        return ncc(x[o:o + L], x[o + L:o + 2 * L])
    except DegenerateInput:
        return None


def _select(x, scores, offsets, periods):
    best = scores.max()
    if not np.isfinite(best):
        return None
    # rescore the near-best pairs with the scalar ncc so the reported score
    # is exactly what an independent recomputation gives
    near = np.flatnonzero(scores >= best - 1e-7)
    exact = []
    for o, L in zip(offsets[near], periods[near]):
        s = _exact(x, int(o), int(L))
        if s is not None:
            exact.append((s, int(o), int(L)))
    if not exact:
        return None
    top = max(s for s, _, _ in exact)
    tied = [(o, L, s) for s, o, L in exact if s >= top - TIE_TOLERANCE]
    o, L, s = min(tied)
    return TemplateCandidate(o, L, s)


def scan_candidates(buffer, params: SuppressionParams) -> TemplateCandidate | None:
    """Best adjacent-window pair over the admissible periods and offsets.

    Returns ``None`` only if every window in the buffer is constant.
    """
    x = as_samples(buffer)
    lo, hi = params.min_period, params.max_period
    if x.size < 2 * hi:
        raise BufferTooShort(f"need at least {2 * hi} samples for estimation, got {x.size}")
    periods = range(lo, hi + 1)
    n = x.size
    stride = params.search_stride

    scores, offsets, lengths = _scan(x, periods, lambda L: np.arange(0, n - 2 * L + 1, stride))
    if stride > 1 and scores.size:
        coarse = _select(x, scores, offsets, lengths)
        if coarse is None:
            return None
        lo_off = max(0, coarse.offset - stride)

        def refine(L):
            return np.arange(lo_off, min(coarse.offset + stride, n - 2 * L) + 1)

        scores, offsets, lengths = _scan(x, periods, refine)
    if scores.size == 0:
        return None
    return _select(x, scores, offsets, lengths)


def estimate_template(buffer, params: SuppressionParams) -> tuple[NoiseTemplate, TemplateCandidate]:
    """Estimate the noise template from a noise-dominated buffer.

    Returns the template and the candidate it came from.  Raises
    :class:`TemplateNotFound` carrying the best score when no pair reaches
    ``params.theta_xcorr``.
    """
    x = as_samples(buffer)
    cand = scan_candidates(x, params)
    if cand is None:
        raise TemplateNotFound(float("-inf"))
    if cand.score < params.theta_xcorr:
        raise TemplateNotFound(cand.score, cand)
    template = NoiseTemplate.from_samples(x[cand.offset:cand.offset + cand.period_L])
    return template, cand
