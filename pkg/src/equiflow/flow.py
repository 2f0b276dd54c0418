"""Translation flow on the unit torus: trajectory decomposition, exact
occupation times, error terms and error curves, weighted occupation.

The flow is Y(t) = ({x1 + t}, {x2 + alpha t}). A trajectory up to time T
splits into maximal straight segments between wrap events. Wrap times are
computed in exact integer arithmetic over a common denominator derived
from the exact rational value of the slope (every Slope is an exact
rational, either natively or as a fixed-point approximant), so event
ordering and corner coincidences are decided exactly, never by floating
comparisons.

With alpha = n/d (lowest terms), x1 = c1/d1, x2 = c2/d2, T = ct/dt (all
exact, the floats being dyadic rationals), every event time is an integer
multiple structure over DG = d1*d2*n*dt: horizontal wraps step DG, vertical
wraps step DGY = d1*d2*d*dt, and the same integer numerator measures the
horizontal advance (over DG) and the vertical advance (over DGY). One
merge of two integer arithmetic progressions yields the trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from .errors import NonconvergentQuadrature, PrecisionExhausted
from .geometry import IntervalSet, SetExpr, area, clip_segment, expr_digest, gauss_kronrod_15
from .slope import Slope

__all__ = [
    "Segment",
    "Trajectory",
    "ErrorCurve",
    "decompose",
    "occupation_time",
    "error_term",
    "error_curve",
    "weighted_occupation",
]


def _ratio_to_float(num: int, den: int) -> float:
    # float(num)/float(den) overflows for multi-hundred-bit denominators
    if num == 0:
        return 0.0
    return (num << 64) // den / 18446744073709551616.0


@dataclass(frozen=True)
class Segment:
    """One maximal straight sub-segment of a trajectory inside the square."""

    start: tuple[float, float]
    end: tuple[float, float]
    t_begin: float
    t_end: float
    length: float  # parameter length t_end - t_begin, computed exactly


@dataclass
class Trajectory:
    start: tuple[float, float]
    alpha: Slope
    duration: float
    segments: list[Segment]

    def param_total(self) -> float:
        return math.fsum(s.length for s in self.segments)


@dataclass
class ErrorCurve:
    """Sampled error term Delta(T) = occupation(E,x,alpha,T) - T*area(E)."""

    grid: list[float]
    deltas: list[float]
    set_digest: str
    alpha_label: str
    start: tuple[float, float]
    set_area: float

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.grid, self.deltas))


class _Kahan:
    """Compensated accumulator."""

    __slots__ = ("total", "_c")

    def __init__(self) -> None:
        self.total = 0.0
        self._c = 0.0

    def add(self, x: float) -> None:
        y = x - self._c
        t = self.total + y
        self._c = (t - self.total) - y
        self.total = t


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"non-finite coordinate {v}")
        return Fraction(v)
    raise TypeError(f"expected a real number, got {type(v).__name__}")


def _slope_fraction(alpha) -> tuple[Fraction, float, str]:
    if isinstance(alpha, Slope):
        return alpha.rational(), alpha.value, alpha.label or "slope"
    a = _as_fraction(alpha)
    return a, float(a), "slope"


def _check_budget(alpha, T: float) -> None:
    if isinstance(alpha, Slope) and alpha.exact is None:
        # fixed-point slope: wrap times drift from the ideal real by ~T*2^-bits;
        # keep at least 64 bits of headroom
        if T * max(1.0, abs(alpha.value)) > float(2 ** (alpha.bits - 64)):
            raise PrecisionExhausted(
                f"T = {T} exceeds the fixed-point budget of a {alpha.bits}-bit slope"
            )


def _stream(
    x1: Fraction, x2: Fraction, a: Fraction, T: Fraction
) -> Iterator[tuple[int, int, int, int, int, int, int]]:
    """Yield (num0, num1, xnum0, ynum0, DG, DGY, vshift) per segment.

    Times are numerators over DG; horizontal position at the segment start
    is xnum0 over DG, vertical ynum0 over DGY; the segment advances both
    numerators by num1 - num0 (vertical only when vshift is 1).
    """
    c1, d1 = x1.numerator, x1.denominator
    c2, d2 = x2.numerator, x2.denominator
    na, da = a.numerator, a.denominator
    ct, dt = T.numerator, T.denominator
    DGY = d1 * d2 * da * dt
    if na == 0:
        DG = DGY
        vshift = 0
    else:
        DG = d1 * d2 * na * dt
        vshift = 1
    t_num = ct * (DG // dt)
    k1 = DG // d1
    ky = DGY // d2
    xbase = c1 * k1
    ybase = c2 * ky
    # horizontal wraps: t = k - x1, numerators stepping DG
    h_next = DG - xbase if DG > xbase else None  # first wrap at t = 1 - x1 > 0
    # vertical wraps: t = (m - x2)/a, numerators stepping DGY
    v_next = DGY - ybase if na else None
    if h_next is not None and h_next > t_num:
        h_next = None
    if v_next is not None and v_next > t_num:
        v_next = None
    prev = 0
    xnum = xbase
    ynum = ybase
    while h_next is not None or v_next is not None:
        if v_next is None or (h_next is not None and h_next <= v_next):
            cur = h_next
            corner = v_next == cur
            h_next = h_next + DG
            if h_next > t_num:
                h_next = None
            if corner:
                v_next = v_next + DGY
                if v_next > t_num:
                    v_next = None
        else:
            cur = v_next
            v_next = v_next + DGY
            if v_next > t_num:
                v_next = None
        d = cur - prev
        yield (prev, cur, xnum, ynum, DG, DGY, vshift)
        xnum = (xnum + d) % DG
        ynum = (ynum + d * vshift) % DGY
        prev = cur
    if prev < t_num:
        yield (prev, t_num, xnum, ynum, DG, DGY, vshift)


def _segment_floats(
    num0: int, num1: int, xnum: int, ynum: int, DG: int, DGY: int, vshift: int, reflect: bool
) -> tuple[tuple[float, float], tuple[float, float], float, float, float]:
    d = num1 - num0
    x0 = _ratio_to_float(xnum, DG)
    y0 = _ratio_to_float(ynum, DGY)
    x1 = _ratio_to_float(xnum + d, DG)
    y1 = _ratio_to_float(ynum + d * vshift, DGY)
    if reflect:
        y0, y1 = 1.0 - y0, 1.0 - y1
    t0 = _ratio_to_float(num0, DG)
    t1 = _ratio_to_float(num1, DG)
    return (x0, y0), (x1, y1), t0, t1, _ratio_to_float(d, DG)


def _prepare(x, alpha, T):
    """Common setup: exact start point, slope fraction, reflection flag."""
    x1 = _as_fraction(x[0]) % 1
    x2 = _as_fraction(x[1]) % 1
    a, a_float, label = _slope_fraction(alpha)
    Tf = _as_fraction(T)
    if Tf <= 0:
        raise ValueError(f"duration must be positive, got {T}")
    _check_budget(alpha, float(Tf))
    reflect = a < 0
    if reflect:
        a = -a
        x2 = (-x2) % 1
    return x1, x2, a, a_float, label, Tf, reflect


def decompose(x, alpha, T) -> Trajectory:
    """Split the trajectory from x with slope alpha, duration T, into
    maximal straight segments inside the unit square.

    x coordinates are taken mod 1. Negative slopes run through the
    vertical reflection y -> 1-y of the same machinery.
    """
    x1, x2, a, a_float, _, Tf, reflect = _prepare(x, alpha, T)
    segs = []
    for ev in _stream(x1, x2, a, Tf):
        p, q, t0, t1, ln = _segment_floats(*ev, reflect)
        segs.append(Segment(start=p, end=q, t_begin=t0, t_end=t1, length=ln))
    start = (float(x1), 1.0 - float(x2) if reflect else float(x2))
    if isinstance(alpha, Slope):
        slope = alpha
    else:
        slope = Slope.from_value(a_float if not reflect else -a_float, depth=0)
    return Trajectory(start=start, alpha=slope, duration=float(Tf), segments=segs)


def occupation_time(E: SetExpr, x, alpha, T) -> float:
    """Time in [0,T] the trajectory spends inside E, exactly decomposed
    and clipped segment by segment."""
    x1, x2, a, _, _, Tf, reflect = _prepare(x, alpha, T)
    acc = _Kahan()
    for ev in _stream(x1, x2, a, Tf):
        p, q, _, _, ln = _segment_floats(*ev, reflect)
        if p == q:
            continue  # exact length below float resolution (< 2^-63 of time)
        m = clip_segment(E, p, q).measure
        if m:
            acc.add(m * ln)
    return acc.total


def error_term(E: SetExpr, x, alpha, T, set_area: float | None = None) -> float:
    """occupation_time(E, x, alpha, T) - T * area(E)."""
    if set_area is None:
        set_area = area(E)
    return occupation_time(E, x, alpha, T) - float(T) * set_area


def error_curve(E: SetExpr, x, alpha, T_grid, set_area: float | None = None) -> ErrorCurve:
    """Delta(T) on an increasing grid from a single trajectory pass.

    Cost is O(segments(max T) + len(grid)): each grid time is resolved
    inside the segment containing it via the clip's partial measure.
    """
    grid = [float(t) for t in T_grid]
    if not grid:
        raise ValueError("empty T grid")
    if any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] <= 0:
        raise ValueError("T grid must be positive and strictly increasing")
    if set_area is None:
        set_area = area(E)
    x1, x2, a, _, label, Tf, reflect = _prepare(x, alpha, grid[-1])
    acc = _Kahan()
    deltas: list[float] = []
    j = 0
    for ev in _stream(x1, x2, a, Tf):
        p, q, t0, t1, ln = _segment_floats(*ev, reflect)
        if p == q:
            # collapsed under float projection: resolve any grid times in
            # its (sub-resolution) parameter range with zero contribution
            while j < len(grid) and grid[j] <= t1 + 1e-12:
                deltas.append(acc.total - grid[j] * set_area)
                j += 1
            continue
        clip = clip_segment(E, p, q)
        while j < len(grid) and grid[j] <= t1 + 1e-12:
            s = 0.0
            if ln > 0.0:
                s = min(max((grid[j] - t0) / ln, 0.0), 1.0)
            part = clip.measure_below(s) * ln
            deltas.append(acc.total + part - grid[j] * set_area)
            j += 1
        m = clip.measure
        if m:
            acc.add(m * ln)
    while j < len(grid):  # grid points at T itself, past the last event
        deltas.append(acc.total - grid[j] * set_area)
        j += 1
    return ErrorCurve(
        grid=grid,
        deltas=deltas,
        set_digest=expr_digest(E),
        alpha_label=label,
        start=(float(_as_fraction(x[0]) % 1), float(_as_fraction(x[1]) % 1)),
        set_area=set_area,
    )


def weighted_occupation(f: Callable[[float, float], float], x, alpha, T, tol: float = 1e-6) -> float:
    """Integral of f along the trajectory, by per-segment Gauss-Kronrod
    panels refined globally until the summed error estimate is below tol.

    f must be evaluable on the closed square and periodic-compatible
    (f(0,y) = f(1,y), f(x,0) = f(x,1)); this is assumed, not checked.
    """
    import heapq

    if not 0.0 < tol <= 1e-4:
        raise ValueError(f"tol must be in (0, 1e-4], got {tol}")
    x1, x2, a, a_float, _, Tf, reflect = _prepare(x, alpha, T)
    av = abs(a_float)

    heap: list[tuple[float, int, float, float, tuple[float, float], float]] = []
    total = _Kahan()
    err_total = 0.0
    tie = 0

    def panel(p: tuple[float, float], s0: float, s1: float) -> None:
        nonlocal err_total, tie
        sgn = -1.0 if reflect else 1.0

        def g(s: float) -> float:
            return f(p[0] + s, p[1] + sgn * av * s)

        val, err = gauss_kronrod_15(g, s0, s1)
        total.add(val)
        err_total += err
        tie += 1
        heapq.heappush(heap, (-err, tie, s0, s1, p, val))

    for ev in _stream(x1, x2, a, Tf):
        p, q, t0, t1, ln = _segment_floats(*ev, reflect)
        if ln > 0.0:
            panel(p, 0.0, ln)

    rounds = 0
    while err_total > tol and heap:
        rounds += 1
        if rounds > 200000:
            raise NonconvergentQuadrature(
                f"weighted occupation: error {err_total:.3e} above tol {tol} after {rounds} splits"
            )
        neg_err, _, s0, s1, p, val = heapq.heappop(heap)
        total.add(-val)
        err_total += neg_err  # remove this panel's error
        mid = 0.5 * (s0 + s1)
        panel(p, s0, mid)
        panel(p, mid, s1)
    return total.total
