"""Bracketed scalar optimization and monotone root finding.

Golden-section search on a bracket located by a coarse grid; bisection for
monotone residuals.  Both are deliberately derivative-free: the objectives
here involve binomial tails whose derivatives underflow near the endpoints.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

__all__ = ["golden_max", "grid_golden_max", "bisect_increasing"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi


def golden_max(f: Callable[[float], float], lo: float, hi: float,
               tol: float = 1e-10) -> tuple[float, float]:
    """Maximize ``f`` on [lo, hi], assumed unimodal there.

    Returns (argmax, max); the argmax is located to within ``tol``.
    """
    a, b = float(lo), float(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def grid_golden_max(f: Callable[[float], float], grid: Sequence[float],
                    tol: float = 1e-10) -> tuple[float, float]:
    """Maximize ``f`` by coarse grid bracketing plus golden-section refinement.

    The grid guards against multimodality; golden section then refines the
    bracket formed by the neighbors of the best grid point.
    """
    pts = [float(g) for g in grid]
    if len(pts) < 3:
        raise ValueError("grid must contain at least 3 points")
    vals = [f(x) for x in pts]
    i = max(range(len(pts)), key=vals.__getitem__)
    lo = pts[max(i - 1, 0)]
    hi = pts[min(i + 1, len(pts) - 1)]
    x, fx = golden_max(f, lo, hi, tol=tol)
    if vals[i] > fx:
        return pts[i], vals[i]
    return x, fx


def bisect_increasing(f: Callable[[float], float], lo: float, hi: float,
                      xtol: float = 1e-13) -> float:
    """Root of a nondecreasing ``f`` on [lo, hi] with f(lo) <= 0 <= f(hi).

    Plain bisection down to interval width ``xtol``; monotonicity makes the
    bracket invariant, so no derivative or sign re-check is needed.
    """
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    if fa > 0.0 or fb < 0.0:
        raise ValueError(f"root not bracketed: f({a})={fa}, f({b})={fb}")
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    while (b - a) > xtol:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:  # float spacing exhausted
            break
        if f(mid) < 0.0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)
