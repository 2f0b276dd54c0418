"""Shared test utilities.

Everything here is an independent oracle: membership and integration are
reimplemented from the raw scene parameters, never through the library's
clipping code, so agreement between the two sides is meaningful.
"""

import math
from bisect import bisect_left, bisect_right

import numba
import numpy as np

from equiflow.geometry import (
    Complement,
    Disc,
    Intersection,
    Polygon,
    Prim,
    Superellipse,
    Union,
)

CHUNK = 4_000_000


# ---------------------------------------------------------------------------
# random scenes over the {polygon, disc, superellipse} algebra
#
# Each builder returns (expr, spec) where spec is a plain-data description
# consumed only by the oracle below.


def random_disc(rng):
    cx, cy = rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)
    rmax = min(cx, cy, 1 - cx, 1 - cy) - 0.02
    r = rng.uniform(0.05, rmax)
    return Prim(Disc((cx, cy), r)), ("disc", (cx, cy, r))


def random_polygon(rng):
    while True:
        cx, cy = rng.uniform(0.35, 0.65), rng.uniform(0.35, 0.65)
        r = rng.uniform(0.1, min(cx, cy, 1 - cx, 1 - cy) - 0.02)
        k = rng.randrange(3, 7)
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
        gaps = [b - a for a, b in zip(angles, angles[1:])]
        gaps.append(2 * math.pi - angles[-1] + angles[0])
        if min(gaps) > 0.15:
            break
    verts = tuple((cx + r * math.cos(a), cy + r * math.sin(a)) for a in angles)
    return Prim(Polygon(verts)), ("poly", verts)


def random_superellipse(rng):
    cx, cy = rng.uniform(0.35, 0.65), rng.uniform(0.35, 0.65)
    cap = min(cx, cy, 1 - cx, 1 - cy) - 0.02
    a = rng.uniform(0.05, cap)
    b = rng.uniform(0.05, cap)
    # even exponents keep the oracle predicate multiplication-only
    p = rng.choice([2.0, 4.0])
    return Prim(Superellipse((cx, cy), (a, b), p)), ("super", (cx, cy, a, b, p))


def random_scene(rng, kind):
    """kind 0 disc, 1 polygon, 2 superellipse, 3 union, 4 difference."""
    if kind == 0:
        return random_disc(rng)
    if kind == 1:
        return random_polygon(rng)
    if kind == 2:
        return random_superellipse(rng)
    if kind == 3:
        e1, s1 = random_disc(rng)
        e2, s2 = random_polygon(rng)
        return Union((e1, e2)), ("union", (s1, s2))
    big = ((0.1, 0.1), (0.9, 0.1), (0.9, 0.9), (0.1, 0.9))
    small = (rng.uniform(0.4, 0.6), rng.uniform(0.4, 0.6), 0.15)
    expr = Intersection(
        (Prim(Polygon(big)), Complement(Prim(Disc((small[0], small[1]), small[2]))))
    )
    return expr, ("diff", (("poly", big), ("disc", small)))


# ---------------------------------------------------------------------------
# Riemann-sum occupation oracle (midpoint rule, jitted)


@numba.njit(cache=True)
def _prep_chunk(lo, hi, dt, afs):
    m = hi - lo
    tmod = np.empty(m, np.float32)
    ybs = np.empty((afs.size, m), np.float32)
    for i in range(m):
        t = (lo + i + 0.5) * dt
        tmod[i] = np.float32(t - math.floor(t))
        for j in range(afs.size):
            v = afs[j] * t
            ybs[j, i] = np.float32(v - math.floor(v))
    return tmod, ybs


@numba.njit(cache=True, inline="always")
def _wrap(x0, frac):
    u = x0 + frac
    if u >= 1.0:
        u -= 1.0
    return u


@numba.njit(cache=True, inline="always")
def _in_disc(u, v, cx, cy, r2):
    du = u - cx
    dv = v - cy
    return du * du + dv * dv <= r2


@numba.njit(cache=True, inline="always")
def _in_poly(u, v, px, py, ex, ey):
    inside = True
    for k in range(px.size):
        inside = inside and (ex[k] * (v - py[k]) - ey[k] * (u - px[k]) >= 0.0)
    return inside


@numba.njit(cache=True, inline="always")
def _in_super(u, v, cx, cy, inv_a, inv_b, p4):
    su = (u - cx) * inv_a
    sv = (v - cy) * inv_b
    a2 = su * su
    b2 = sv * sv
    if p4:
        a2 = a2 * a2
        b2 = b2 * b2
    return a2 + b2 <= 1.0


@numba.njit(cache=True)
def _count_disc(tmod, yb, x0, y0, cx, cy, r2):
    c = 0
    for i in range(tmod.size):
        c += _in_disc(_wrap(x0, tmod[i]), _wrap(y0, yb[i]), cx, cy, r2)
    return c


@numba.njit(cache=True)
def _count_poly(tmod, yb, x0, y0, px, py, ex, ey):
    c = 0
    for i in range(tmod.size):
        c += _in_poly(_wrap(x0, tmod[i]), _wrap(y0, yb[i]), px, py, ex, ey)
    return c


@numba.njit(cache=True)
def _count_super(tmod, yb, x0, y0, cx, cy, inv_a, inv_b, p4):
    c = 0
    for i in range(tmod.size):
        c += _in_super(_wrap(x0, tmod[i]), _wrap(y0, yb[i]), cx, cy, inv_a, inv_b, p4)
    return c


@numba.njit(cache=True)
def _count_union_disc_poly(tmod, yb, x0, y0, cx, cy, r2, px, py, ex, ey):
    c = 0
    for i in range(tmod.size):
        u = _wrap(x0, tmod[i])
        v = _wrap(y0, yb[i])
        c += _in_disc(u, v, cx, cy, r2) or _in_poly(u, v, px, py, ex, ey)
    return c


@numba.njit(cache=True)
def _count_poly_minus_disc(tmod, yb, x0, y0, px, py, ex, ey, cx, cy, r2):
    c = 0
    for i in range(tmod.size):
        u = _wrap(x0, tmod[i])
        v = _wrap(y0, yb[i])
        c += _in_poly(u, v, px, py, ex, ey) and not _in_disc(u, v, cx, cy, r2)
    return c


def _poly_arrays(verts):
    px = np.array([p[0] for p in verts])
    py = np.array([p[1] for p in verts])
    ex = np.roll(px, -1) - px
    ey = np.roll(py, -1) - py
    return px, py, ex, ey


def _count_spec(spec, tmod, yb, x0, y0):
    tag, params = spec
    if tag == "disc":
        cx, cy, r = params
        return _count_disc(tmod, yb, x0, y0, cx, cy, r * r)
    if tag == "poly":
        return _count_poly(tmod, yb, x0, y0, *_poly_arrays(params))
    if tag == "super":
        cx, cy, a, b, p = params
        return _count_super(tmod, yb, x0, y0, cx, cy, 1.0 / a, 1.0 / b, p == 4.0)
    if tag == "union":
        (t1, (cx, cy, r)), (t2, verts) = params
        assert (t1, t2) == ("disc", "poly")
        return _count_union_disc_poly(
            tmod, yb, x0, y0, cx, cy, r * r, *_poly_arrays(verts)
        )
    if tag == "diff":
        (t1, verts), (t2, (cx, cy, r)) = params
        assert (t1, t2) == ("poly", "disc")
        return _count_poly_minus_disc(
            tmod, yb, x0, y0, *_poly_arrays(verts), cx, cy, r * r
        )
    raise AssertionError(f"unknown spec {tag}")


def riemann_occupations(specs, starts, alpha_values, T, dt):
    """Midpoint Riemann sums of chi_E along the flow, one value per case.

    All cases share the duration and step so the per-chunk fractional
    parts of t and alpha*t are computed once.
    """
    afs = np.array(sorted(set(alpha_values)), dtype=np.float64)
    aidx = [int(np.searchsorted(afs, a)) for a in alpha_values]
    n = int(round(T / dt))
    counts = [0] * len(specs)
    for lo in range(0, n, CHUNK):
        hi = min(lo + CHUNK, n)
        tmod, ybs = _prep_chunk(lo, hi, dt, afs)
        for j, spec in enumerate(specs):
            counts[j] += _count_spec(spec, tmod, ybs[aidx[j]], *starts[j])
    return [c * dt for c in counts]


# ---------------------------------------------------------------------------
# discrepancy oracles


def brute_star_discrepancy(points):
    """sup_t |A([0,t])/N - t| by scanning every jump of the empirical CDF.

    Counts through bisection on the sorted values, so ties are handled by
    construction; the candidate suprema are the one-sided limits at each
    distinct point plus the interval ends.
    """
    xs = sorted(points)
    n = len(xs)
    best = max(xs[0], 1.0 - xs[-1]) if n else 1.0
    for x in sorted(set(xs)):
        lt = bisect_left(xs, x)
        le = bisect_right(xs, x)
        best = max(best, abs(lt / n - x), abs(le / n - x))
    return best


def quad_lp_discrepancy(points, p):
    """(integral of |A([0,t])/N - t|^p dt)^(1/p) by adaptive quadrature."""
    from scipy.integrate import quad

    xs = sorted(points)
    n = len(xs)

    def f(t):
        return abs(bisect_right(xs, t) / n - t) ** p

    # break at the points and at every i/n where |F| can kink to zero
    brk = sorted(set(xs) | {i / n for i in range(n + 1)})
    val, _ = quad(f, 0.0, 1.0, points=brk, limit=50 + 20 * n, epsabs=1e-14)
    return val ** (1.0 / p)


# ---------------------------------------------------------------------------
# trigonometric polynomials


class TrigPoly:
    """f(x) = a0 + sum_k ak cos(2 pi k x) + bk sin(2 pi k x)."""

    def __init__(self, a0, ak, bk):
        self.a0 = float(a0)
        self.ak = np.asarray(ak, dtype=float)
        self.bk = np.asarray(bk, dtype=float)
        self.ks = np.arange(1, len(self.ak) + 1, dtype=float)

    @classmethod
    def random(cls, rng, degree):
        return cls(
            rng.uniform(-1, 1),
            [rng.uniform(-1, 1) for _ in range(degree)],
            [rng.uniform(-1, 1) for _ in range(degree)],
        )

    @property
    def integral(self):
        return self.a0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        ph = 2 * math.pi * np.outer(x, self.ks)
        return self.a0 + np.cos(ph) @ self.ak + np.sin(ph) @ self.bk

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        ph = 2 * math.pi * np.outer(x, self.ks)
        w = 2 * math.pi * self.ks
        return -np.sin(ph) @ (w * self.ak) + np.cos(ph) @ (w * self.bk)
