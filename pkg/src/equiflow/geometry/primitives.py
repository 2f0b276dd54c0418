"""Convex primitives of the set algebra.

Four primitive shapes: convex CCW polygons, discs, rotated superellipses,
and power epigraphs {y >= c*x^p} within the unit square. Each primitive
supports point membership (scalar and vectorized), exact segment clipping to
a single parameter interval, a signed implicit function (negative inside,
zero on the boundary), and a closed-form area.

Clipping a straight segment against a convex region always yields one
parameter interval or nothing. Polygons and discs are clipped in closed
form; superellipses and power epigraphs clip by locating the minimum of the
convex implicit profile g(t) with a derivative-sign bisection, then
bisecting for the two roots of g (parameter tolerance well below the 1e-12
contract).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .intervals import IntervalSet

__all__ = [
    "Disc",
    "Polygon",
    "PowerEpigraph",
    "Primitive",
    "Superellipse",
    "UNIT_SQUARE",
]

_ROOT_TOL = 1e-14
_MAX_BISECT = 80


def _ipow(x: np.ndarray | float, n: int):
    """x**n for integer n >= 1 by repeated squaring (cheap for vector input)."""
    result = None
    base = x
    k = n
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return result


def _abs_pow(x, p: float):
    """|x|**p with a fast path for integer exponents."""
    if p == int(p) and 1 <= p <= 64:
        n = int(p)
        if n % 2 == 0:
            return _ipow(x, n)
        return _ipow(abs(x) if not isinstance(x, np.ndarray) else np.abs(x), n)
    if isinstance(x, np.ndarray):
        return np.power(np.abs(x), p)
    return abs(x) ** p


def _bisect_root(g, lo: float, hi: float) -> float:
    """Root of g in [lo, hi] with g(lo) <= 0 <= g(hi) or the reverse."""
    glo = g(lo)
    if glo == 0.0:
        return lo
    rising = glo < 0.0
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if hi - lo <= _ROOT_TOL:
            return mid
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm < 0.0) == rising:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _clip_convex_implicit(g, gprime, t0: float = 0.0, t1: float = 1.0):
    """Parameter interval {t in [t0,t1] : g(t) <= 0} for convex g.

    Locates the minimizer by bisection on the (nondecreasing) derivative,
    then bisects each side for the boundary roots. Returns None when the
    region is missed entirely.
    """
    g0, g1 = g(t0), g(t1)
    d0, d1 = gprime(t0), gprime(t1)
    if d0 >= 0.0:
        tmin = t0
        gmin = g0
    elif d1 <= 0.0:
        tmin = t1
        gmin = g1
    else:
        lo, hi = t0, t1
        for _ in range(_MAX_BISECT):
            if hi - lo <= _ROOT_TOL:
                break
            mid = 0.5 * (lo + hi)
            if gprime(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        tmin = 0.5 * (lo + hi)
        gmin = g(tmin)
    if gmin > 0.0:
        return None
    left = t0 if g0 <= 0.0 else _bisect_root(g, t0, tmin)
    right = t1 if g1 <= 0.0 else _bisect_root(g, tmin, t1)
    if right <= left:
        return None
    return (left, right)


@dataclass(frozen=True)
class Polygon:
    """Convex polygon, vertices counter-clockwise."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        v = self.vertices
        if len(v) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        n = len(v)
        for i in range(n):
            if v[i] == v[(i + 1) % n]:
                raise ValueError("repeated polygon vertices")
            ax, ay = v[i]
            bx, by = v[(i + 1) % n]
            cx, cy = v[(i + 2) % n]
            cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            if cross < -1e-15:
                raise ValueError("polygon must be convex and counter-clockwise")

    def _edges(self):
        v = self.vertices
        n = len(v)
        for i in range(n):
            yield v[i], v[(i + 1) % n]

    def contains(self, x: float, y: float) -> bool:
        for (ax, ay), (bx, by) in self._edges():
            if (bx - ax) * (y - ay) - (by - ay) * (x - ax) < 0.0:
                return False
        return True

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        inside = np.ones(xs.shape, dtype=bool)
        for (ax, ay), (bx, by) in self._edges():
            inside &= (bx - ax) * (ys - ay) - (by - ay) * (xs - ax) >= 0.0
        return inside

    def implicit(self, x: float, y: float) -> float:
        # max over edges of the outward signed offset; zero set = boundary
        worst = -math.inf
        for (ax, ay), (bx, by) in self._edges():
            ex, ey = bx - ax, by - ay
            norm = math.hypot(ex, ey)
            d = ((by - ay) * (x - ax) - (bx - ax) * (y - ay)) / norm
            if d > worst:
                worst = d
        return worst

    def clip(self, p, q):
        """Parameter interval of {t : p + t(q-p) in polygon} in [0, 1]."""
        px, py = p
        dx, dy = q[0] - px, q[1] - py
        lo, hi = 0.0, 1.0
        for (ax, ay), (bx, by) in self._edges():
            ex, ey = bx - ax, by - ay
            # inside: cross(e, x - a) >= 0  <=>  num + t*den >= 0
            num = ex * (py - ay) - ey * (px - ax)
            den = ex * dy - ey * dx
            if den == 0.0:
                if num < 0.0:
                    return None
                continue
            t = -num / den
            if den > 0.0:
                if t > lo:
                    lo = t
            else:
                if t < hi:
                    hi = t
            if lo > hi:
                return None
        if hi <= lo:
            return None
        return (lo, hi)

    def area(self) -> float:
        total = 0.0
        for (ax, ay), (bx, by) in self._edges():
            total += ax * by - bx * ay
        return 0.5 * total


@dataclass(frozen=True)
class Disc:
    center: tuple[float, float]
    radius: float

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValueError("disc radius must be positive")

    def contains(self, x: float, y: float) -> bool:
        dx, dy = x - self.center[0], y - self.center[1]
        return dx * dx + dy * dy <= self.radius * self.radius

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        dx = xs - self.center[0]
        dy = ys - self.center[1]
        return dx * dx + dy * dy <= self.radius * self.radius

    def implicit(self, x: float, y: float) -> float:
        dx, dy = x - self.center[0], y - self.center[1]
        return dx * dx + dy * dy - self.radius * self.radius

    def clip(self, p, q):
        px = p[0] - self.center[0]
        py = p[1] - self.center[1]
        dx, dy = q[0] - p[0], q[1] - p[1]
        a = dx * dx + dy * dy
        b = px * dx + py * dy
        c = px * px + py * py - self.radius * self.radius
        disc = b * b - a * c
        if disc <= 0.0:
            return None
        root = math.sqrt(disc)
        # stable quadratic for a t^2 + 2 b t + c = 0
        qq = -(b + math.copysign(root, b)) if b != 0.0 else -root
        t1 = qq / a
        t2 = c / qq
        lo, hi = (t1, t2) if t1 <= t2 else (t2, t1)
        lo, hi = max(lo, 0.0), min(hi, 1.0)
        if hi <= lo:
            return None
        return (lo, hi)

    def area(self) -> float:
        return math.pi * self.radius * self.radius


@dataclass(frozen=True)
class Superellipse:
    """{ |u/a|^p + |v/b|^p <= 1 } in frame coordinates (u,v) = R(-rot)(x - c)."""

    center: tuple[float, float]
    semi_axes: tuple[float, float]
    exponent: float
    rotation: float = 0.0

    def __post_init__(self) -> None:
        if self.semi_axes[0] <= 0.0 or self.semi_axes[1] <= 0.0:
            raise ValueError("semi-axes must be positive")
        if self.exponent < 2.0:
            raise ValueError("superellipse exponent must be >= 2")

    def _frame(self, x, y):
        cr, sr = math.cos(self.rotation), math.sin(self.rotation)
        dx, dy = x - self.center[0], y - self.center[1]
        return cr * dx + sr * dy, -sr * dx + cr * dy

    def to_global(self, u: float, v: float) -> tuple[float, float]:
        cr, sr = math.cos(self.rotation), math.sin(self.rotation)
        return (
            self.center[0] + cr * u - sr * v,
            self.center[1] + sr * u + cr * v,
        )

    def implicit(self, x: float, y: float) -> float:
        u, v = self._frame(x, y)
        a, b = self.semi_axes
        return _abs_pow(u / a, self.exponent) + _abs_pow(v / b, self.exponent) - 1.0

    def contains(self, x: float, y: float) -> bool:
        return self.implicit(x, y) <= 0.0

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        cr, sr = math.cos(self.rotation), math.sin(self.rotation)
        dx = xs - self.center[0]
        dy = ys - self.center[1]
        a, b = self.semi_axes
        u = (cr * dx + sr * dy) * (1.0 / a)
        v = (-sr * dx + cr * dy) * (1.0 / b)
        return _abs_pow(u, self.exponent) + _abs_pow(v, self.exponent) <= 1.0

    def clip(self, p, q):
        a, b = self.semi_axes
        p_exp = self.exponent
        u0, v0 = self._frame(p[0], p[1])
        u1, v1 = self._frame(q[0], q[1])
        du, dv = u1 - u0, v1 - v0

        def g(t: float) -> float:
            return (
                _abs_pow((u0 + t * du) / a, p_exp)
                + _abs_pow((v0 + t * dv) / b, p_exp)
                - 1.0
            )

        def gprime(t: float) -> float:
            u = (u0 + t * du) / a
            v = (v0 + t * dv) / b
            term_u = p_exp * _abs_pow(u, p_exp - 1.0) * math.copysign(1.0, u) * du / a
            term_v = p_exp * _abs_pow(v, p_exp - 1.0) * math.copysign(1.0, v) * dv / b
            return term_u + term_v

        return _clip_convex_implicit(g, gprime)

    def area(self) -> float:
        a, b = self.semi_axes
        p = self.exponent
        return 4.0 * a * b * math.gamma(1.0 + 1.0 / p) ** 2 / math.gamma(1.0 + 2.0 / p)

    def support(self, dx: float, dy: float) -> float:
        """Support function value max{ (x - c).d : x in shape } for unit-ish d."""
        cr, sr = math.cos(self.rotation), math.sin(self.rotation)
        # direction in frame coordinates
        fu = cr * dx + sr * dy
        fv = -sr * dx + cr * dy
        a, b = self.semi_axes
        pc = self.exponent / (self.exponent - 1.0)
        return (abs(a * fu) ** pc + abs(b * fv) ** pc) ** (1.0 / pc)


@dataclass(frozen=True)
class PowerEpigraph:
    """{ (x, y) in [0,1]^2 : y >= coefficient * x**exponent }.

    Convex region (epigraph of a convex power function meets the square).
    The curved boundary is flat to order `exponent` at the origin, which is
    what makes this primitive useful as a section-function test target.
    """

    coefficient: float
    exponent: float

    def __post_init__(self) -> None:
        if self.coefficient <= 0.0:
            raise ValueError("coefficient must be positive")
        if self.exponent < 1.0:
            raise ValueError("exponent must be >= 1")

    def x_max(self) -> float:
        """Largest x at which the curve stays within the unit square."""
        if self.coefficient <= 1.0:
            return 1.0
        return self.coefficient ** (-1.0 / self.exponent)

    def implicit(self, x: float, y: float) -> float:
        xs = max(x, 0.0)
        return self.coefficient * _abs_pow(xs, self.exponent) - y

    def contains(self, x: float, y: float) -> bool:
        return self.implicit(x, y) <= 0.0

    def contains_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        base = np.maximum(xs, 0.0)
        return self.coefficient * _abs_pow(base, self.exponent) <= ys

    def clip(self, p, q):
        c, p_exp = self.coefficient, self.exponent
        x0, y0 = p
        dx, dy = q[0] - p[0], q[1] - p[1]

        def g(t: float) -> float:
            x = x0 + t * dx
            return c * _abs_pow(x if x > 0.0 else 0.0, p_exp) - (y0 + t * dy)

        def gprime(t: float) -> float:
            x = x0 + t * dx
            if x <= 0.0:
                return -dy
            return c * p_exp * _abs_pow(x, p_exp - 1.0) * dx - dy

        return _clip_convex_implicit(g, gprime)

    def area(self) -> float:
        c, p = self.coefficient, self.exponent
        if c <= 1.0:
            return 1.0 - c / (p + 1.0)
        xm = self.x_max()
        return xm * p / (p + 1.0)


Primitive = Union[Polygon, Disc, Superellipse, PowerEpigraph]

UNIT_SQUARE = Polygon(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)))


def clip_segment_primitive(prim: Primitive, p, q) -> IntervalSet:
    """Parameter set {t in [0,1] : p + t(q - p) in prim} (one interval or empty)."""
    if p[0] == q[0] and p[1] == q[1]:
        raise ValueError("segment endpoints must differ")
    span = prim.clip(p, q)
    if span is None:
        return IntervalSet.empty()
    return IntervalSet.of([span])
