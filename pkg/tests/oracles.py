"""Brute-force reference computations, deliberately independent of the package."""
import math

import numpy as np

TIE = 1e-12


def pearson(a, b):
    """Plain-Python Pearson correlation; None for a constant operand."""
    n = len(a)
    ma = sum(a) / n
    mb = sum(b) / n
    sab = saa = sbb = 0.0
    for x, y in zip(a, b):
        dx, dy = x - ma, y - mb
        sab += dx * dy
        saa += dx * dx
        sbb += dy * dy
    if saa == 0.0 or sbb == 0.0:
        return None
    return sab / math.sqrt(saa * sbb)


def corrcoef(a, b):
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if np.ptp(a) == 0 or np.ptp(b) == 0:
        return None
    return float(np.corrcoef(a, b)[0, 1])


def best_adjacent_pair(x, lo, hi):
    """Full scan over (offset, period); returns (offset, period, score)."""
    x = np.asarray(x, float)
    found = []
    for L in range(lo, hi + 1):
        for o in range(0, x.size - 2 * L + 1):
            s = corrcoef(x[o:o + L], x[o + L:o + 2 * L])
            if s is not None:
                found.append((s, o, L))
    top = max(s for s, _, _ in found)
    return min((o, L, s) for s, o, L in found if s >= top - TIE)


def best_lag(x, template, first=0, last=None):
    """Full lag scan of a template across a buffer; earliest lag wins ties."""
    x = np.asarray(x, float)
    L = len(template)
    last = x.size - L if last is None else last
    found = []
    for k in range(first, last + 1):
        s = corrcoef(template, x[k:k + L])
        if s is not None:
            found.append((s, k))
    top = max(s for s, _ in found)
    return next((k, s) for s, k in found if s >= top - TIE)
