"""Adaptive composite Gauss-Legendre quadrature and set areas.

The integrator is a classic global-adaptive scheme on a 7-point Gauss /
15-point Kronrod pair: each subinterval carries the embedded error estimate
|K15 - G7|, and the worst interval is split until the summed estimate drops
below the tolerance or the refinement budget runs out.

Areas of pure primitives use their closed forms; areas of boolean
expressions integrate the horizontal slice measure h -> |{x : (x,h) in E}|,
which the segment clipper provides exactly per slice. Slice measures of
expressions are piecewise smooth with finitely many kinks and jumps, which
adaptive bisection localizes at geometric rate.
"""

from __future__ import annotations

import heapq
import math
from typing import Callable

from ..errors import NonconvergentQuadrature
from .intervals import IntervalSet
from .primitives import Primitive
from .setexpr import Prim, SetExpr, clip_segment

__all__ = ["adaptive_quadrature", "area", "gauss_kronrod_15"]

# Standard Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
_XGK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
)
_WGK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)


def gauss_kronrod_15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """(K15 integral, |K15 - G7| error estimate) of f over [a, b]."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    result_k = _WGK[7] * fc
    result_g = _WG[3] * fc
    for j in range(7):
        x = half * _XGK[j]
        f1 = f(center - x)
        f2 = f(center + x)
        result_k += _WGK[j] * (f1 + f2)
        if j % 2 == 1:
            result_g += _WG[j // 2] * (f1 + f2)
    return result_k * half, abs(result_k - result_g) * half


def adaptive_quadrature(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_intervals: int = 200_000,
) -> float:
    """Integral of f over [a, b] to absolute tolerance tol.

    Raises NonconvergentQuadrature when the refinement budget is exhausted
    with the summed error estimate still above tol.
    """
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    value, err = gauss_kronrod_15(f, a, b)
    heap = [(-err, a, b, value)]
    total_value = value
    total_err = err
    count = 1
    while total_err > 0.25 * tol:
        if count >= max_intervals:
            raise NonconvergentQuadrature(
                f"adaptive quadrature needs more than {max_intervals} intervals "
                f"(error estimate {total_err:.3g} > tol {tol:.3g})"
            )
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # interval at floating-point resolution; accept its estimate
            total_err += neg_err  # removes this error from the pending sum
            if not heap:
                break
            continue
        v1, e1 = gauss_kronrod_15(f, lo, mid)
        v2, e2 = gauss_kronrod_15(f, mid, hi)
        total_value += v1 + v2 - val
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        count += 1
    return total_value


def _slice_measure(expr: SetExpr) -> Callable[[float], float]:
    def f(h: float) -> float:
        hh = min(max(h, 0.0), 1.0)
        return clip_segment(expr, (0.0, hh), (1.0, hh)).measure

    return f


def area(expr: SetExpr, tol: float | None = None) -> float:
    """Lebesgue measure of the expression within the unit square.

    Pure primitives use closed forms (default tol 1e-12); boolean
    expressions integrate horizontal slice lengths adaptively (default tol
    1e-9, tight enough that T * area error stays below 1e-3 for flow
    horizons up to 1e6).
    """
    if isinstance(expr, Prim):
        if tol is not None and not (0.0 < tol <= 1e-3):
            raise ValueError("tol must be in (0, 1e-3]")
        return expr.shape.area()
    if tol is None:
        tol = 1e-9
    if not (0.0 < tol <= 1e-3):
        raise ValueError("tol must be in (0, 1e-3]")
    return adaptive_quadrature(_slice_measure(expr), 0.0, 1.0, tol)
