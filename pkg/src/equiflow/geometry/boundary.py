"""Boundary decomposition of set expressions into graphical pieces.

Every primitive contributes parametric boundary arcs (polygon edges, circle
and superellipse quarters, the power curve with its square edges). Arcs are
split at crossings with the boundaries of the other primitives in the
expression, located by sign sampling of the other primitive's implicit
function plus bisection. A sub-arc survives iff it actually separates the
expression (membership differs across it), and each surviving sub-arc
becomes one piece.

Charts: a piece's chart line is the tangent at the point where the tangent
direction bisects the endpoint tangent directions (the turning midpoint).
Convex arcs here turn at most 90 degrees, so the tangent never becomes
orthogonal to that chart direction and the piece is a graph over the chart.
The chart normal theta_c_perp points into the expression at the base point;
a piece is convex when the curve lies on the +theta_c_perp side of its
chart line (profile psi >= 0) and concave when it lies opposite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from ..errors import UnresolvedTangency
from .primitives import Disc, Polygon, PowerEpigraph, Primitive, Superellipse
from .setexpr import SetExpr, contains, iter_primitives

__all__ = ["BoundaryPiece", "boundary_pieces", "chart_slope"]

_SPLIT_TOL = 1e-12
_SIDE_EPS = 1e-7
_SAMPLES = 256


class _Arc:
    """Directed parametric boundary arc of one primitive."""

    owner: Primitive
    u0: float
    u1: float

    def point(self, u: float) -> tuple[float, float]:
        raise NotImplementedError

    def tangent(self, u: float) -> tuple[float, float]:
        """Unit tangent in the arc's own orientation."""
        raise NotImplementedError

    def flat_points(self) -> list[tuple[float, float, float]]:
        """(param, direction angle, separation order) of flat tangencies."""
        return []


@dataclass
class _LineArc(_Arc):
    owner: Primitive
    a: tuple[float, float]
    b: tuple[float, float]
    u0: float = 0.0
    u1: float = 1.0

    def point(self, u: float) -> tuple[float, float]:
        return (
            self.a[0] + u * (self.b[0] - self.a[0]),
            self.a[1] + u * (self.b[1] - self.a[1]),
        )

    def tangent(self, u: float) -> tuple[float, float]:
        dx, dy = self.b[0] - self.a[0], self.b[1] - self.a[1]
        h = math.hypot(dx, dy)
        return (dx / h, dy / h)

    def flat_points(self) -> list[tuple[float, float, float]]:
        t = self.tangent(0.0)
        return [(0.5 * (self.u0 + self.u1), math.atan2(t[1], t[0]) % math.pi, math.inf)]


@dataclass
class _CircleArc(_Arc):
    owner: Disc
    u0: float
    u1: float

    def point(self, u: float) -> tuple[float, float]:
        cx, cy = self.owner.center
        r = self.owner.radius
        return (cx + r * math.cos(u), cy + r * math.sin(u))

    def tangent(self, u: float) -> tuple[float, float]:
        return (-math.sin(u), math.cos(u))


@dataclass
class _SuperellipseArc(_Arc):
    owner: Superellipse
    u0: float
    u1: float

    def point(self, u: float) -> tuple[float, float]:
        a, b = self.owner.semi_axes
        e = 2.0 / self.owner.exponent
        cu, su = math.cos(u), math.sin(u)
        lx = a * math.copysign(abs(cu) ** e, cu)
        ly = b * math.copysign(abs(su) ** e, su)
        return self.owner.to_global(lx, ly)

    def tangent(self, u: float) -> tuple[float, float]:
        a, b = self.owner.semi_axes
        p = self.owner.exponent
        e = 2.0 / p
        # snap to the exact axis-point limits (the raw formula degenerates)
        k = round(u / (0.5 * math.pi))
        if abs(u - k * 0.5 * math.pi) < 1e-9:
            quadrant = k % 4
            local = [(0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 0.0)][quadrant]
            du, dv = local
        else:
            cu, su = math.cos(u), math.sin(u)
            du = -a * e * abs(cu) ** (e - 1.0) * su
            dv = b * e * abs(su) ** (e - 1.0) * cu
            h = math.hypot(du, dv)
            du, dv = du / h, dv / h
        cr, sr = math.cos(self.owner.rotation), math.sin(self.owner.rotation)
        return (cr * du - sr * dv, sr * du + cr * dv)

    def flat_points(self) -> list[tuple[float, float, float]]:
        out = []
        p = self.owner.exponent
        k0 = math.ceil(self.u0 / (0.5 * math.pi) - 1e-12)
        k1 = math.floor(self.u1 / (0.5 * math.pi) + 1e-12)
        for k in range(k0, k1 + 1):
            u = k * 0.5 * math.pi
            t = self.tangent(u)
            out.append((u, math.atan2(t[1], t[0]) % math.pi, p))
        return out


@dataclass
class _PowerArc(_Arc):
    """The curve y = c x^p parameterized by x, left to right, so the region
    {y >= c x^p} stays on the CCW-left side."""

    owner: PowerEpigraph
    u0: float
    u1: float

    def point(self, u: float) -> tuple[float, float]:
        return (u, self.owner.coefficient * u**self.owner.exponent)

    def tangent(self, u: float) -> tuple[float, float]:
        slope = self.owner.coefficient * self.owner.exponent * u ** (self.owner.exponent - 1.0)
        h = math.hypot(1.0, slope)
        return (1.0 / h, slope / h)

    def flat_points(self) -> list[tuple[float, float, float]]:
        # flat to order p where the curve leaves the origin
        if self.u0 <= 1e-15:
            return [(0.0, 0.0, self.owner.exponent)]
        return []


def _natural_arcs(prim: Primitive) -> list[_Arc]:
    if isinstance(prim, Polygon):
        v = prim.vertices
        return [
            _LineArc(prim, v[i], v[(i + 1) % len(v)]) for i in range(len(v))
        ]
    if isinstance(prim, Disc):
        q = 0.5 * math.pi
        return [_CircleArc(prim, k * q, (k + 1) * q) for k in range(4)]
    if isinstance(prim, Superellipse):
        q = 0.5 * math.pi
        return [_SuperellipseArc(prim, k * q, (k + 1) * q) for k in range(4)]
    if isinstance(prim, PowerEpigraph):
        c, p = prim.coefficient, prim.exponent
        xm = prim.x_max()
        # only the curve: along the square edges the epigraph's membership
        # extends across, so edge arcs can never separate the expression
        if p == 1.0:
            return [_LineArc(prim, (0.0, 0.0), (xm, c * xm))]
        return [_PowerArc(prim, 0.0, xm)]
    raise TypeError(f"unknown primitive {type(prim)!r}")


def _crossings(arc: _Arc, other: Primitive) -> list[float]:
    """Params where the arc crosses the other primitive's boundary."""
    n = _SAMPLES
    us = [arc.u0 + (arc.u1 - arc.u0) * i / n for i in range(n + 1)]
    gs = []
    near_zero_run = 0
    for u in us:
        x, y = arc.point(u)
        g = other.implicit(x, y)
        gs.append(g)
        if abs(g) < 1e-13:
            near_zero_run += 1
            if near_zero_run >= 3:
                raise UnresolvedTangency(
                    "two primitive boundaries overlap along a curve; "
                    "the expression has no finite piece decomposition"
                )
        else:
            near_zero_run = 0
    cuts = []
    for i in range(n):
        g0, g1 = gs[i], gs[i + 1]
        if g0 == 0.0:
            cuts.append(us[i])
            continue
        if g0 * g1 < 0.0:
            lo, hi = us[i], us[i + 1]
            rising = g0 < 0.0
            while hi - lo > _SPLIT_TOL:
                mid = 0.5 * (lo + hi)
                gm = other.implicit(*arc.point(mid))
                if gm == 0.0:
                    lo = hi = mid
                    break
                if (gm < 0.0) == rising:
                    lo = mid
                else:
                    hi = mid
            cuts.append(0.5 * (lo + hi))
    if gs[-1] == 0.0:
        cuts.append(us[-1])
    return cuts


def _turn_angle(t0: tuple[float, float], t1: tuple[float, float]) -> float:
    cross = t0[0] * t1[1] - t0[1] * t1[0]
    dot = t0[0] * t1[0] + t0[1] * t1[1]
    return math.atan2(cross, dot)


@dataclass
class BoundaryPiece:
    """One graphical piece of the boundary of a set expression.

    The piece is the graph {base + u*theta_c + psi(u)*theta_c_perp} over the
    chart domain. psi is convex with psi(0) = 0 and one-sided derivatives
    available through finite differences; kind records whether the
    expression lies on the convex side (convex) or not (concave).
    """

    theta_c: tuple[float, float]
    theta_c_perp: tuple[float, float]
    domain: tuple[float, float]
    psi: Callable[[float], float]
    kind: str
    base_point: tuple[float, float]
    source: Primitive
    flats: tuple[tuple[float, float], ...] = ()  # (direction angle, order)
    hull_in_set: bool | None = None
    endpoints: tuple[tuple[float, float], tuple[float, float]] | None = None

    def psi_one_sided(self, u: float, side: int, delta: float = 1e-7) -> float:
        """One-sided derivative of psi at u; side +1 right, -1 left."""
        h = delta if side >= 0 else -delta
        return (self.psi(u + h) - self.psi(u)) / h


def _bisector_param(arc: _Arc, s0: float, s1: float) -> float:
    """Param where the tangent bisects the endpoint tangent directions."""
    t0 = arc.tangent(s0)
    t1 = arc.tangent(s1)
    total = _turn_angle(t0, t1)
    if abs(total) < 1e-14:
        return 0.5 * (s0 + s1)
    target = 0.5 * total
    lo, hi = s0, s1
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        turn = _turn_angle(t0, arc.tangent(mid))
        if (turn - target) * math.copysign(1.0, total) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13 * max(1.0, abs(s1 - s0)):
            break
    return 0.5 * (lo + hi)


def _make_psi(
    arc: _Arc,
    s0: float,
    s1: float,
    base: tuple[float, float],
    theta_c: tuple[float, float],
    theta_perp: tuple[float, float],
) -> Callable[[float], float]:
    def proj(s: float) -> float:
        x, y = arc.point(s)
        return (x - base[0]) * theta_c[0] + (y - base[1]) * theta_c[1]

    p0, p1 = proj(s0), proj(s1)

    def psi(u: float) -> float:
        if not (min(p0, p1) - 1e-9 <= u <= max(p0, p1) + 1e-9):
            raise ValueError(f"chart coordinate {u} outside piece domain")
        lo, hi = s0, s1
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if proj(mid) < u:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-15 * max(1.0, abs(s1 - s0)):
                break
        s = 0.5 * (lo + hi)
        x, y = arc.point(s)
        return (x - base[0]) * theta_perp[0] + (y - base[1]) * theta_perp[1]

    return psi


def _classify_subarc(expr: SetExpr, arc: _Arc, s0: float, s1: float) -> BoundaryPiece | None:
    smid = _bisector_param(arc, s0, s1)
    base = arc.point(smid)
    tc = arc.tangent(smid)
    n = (-tc[1], tc[0])
    plus = contains(expr, base[0] + _SIDE_EPS * n[0], base[1] + _SIDE_EPS * n[1])
    minus = contains(expr, base[0] - _SIDE_EPS * n[0], base[1] - _SIDE_EPS * n[1])
    if plus == minus:
        return None  # not a separating piece of this expression
    perp = n if plus else (-n[0], -n[1])
    # curve side relative to the chart tangent line decides convexity
    h0 = _dot_offset(arc.point(s0), base, perp)
    h1 = _dot_offset(arc.point(s1), base, perp)
    h = h0 if abs(h0) >= abs(h1) else h1
    if abs(h) <= 1e-13:
        kind = "convex"  # flat pieces count as convex with psi == 0
    else:
        kind = "convex" if h > 0.0 else "concave"
    pr0 = _dot_offset(arc.point(s0), base, tc)
    pr1 = _dot_offset(arc.point(s1), base, tc)
    lo, hi = (pr0, pr1) if pr0 <= pr1 else (pr1, pr0)
    flats = []
    for (u_flat, angle, order) in arc.flat_points():
        if s0 - 1e-9 <= u_flat <= s1 + 1e-9:
            flats.append((angle, order))
    hull_ok = _hull_probe(expr, arc, s0, s1)
    return BoundaryPiece(
        theta_c=tc,
        theta_c_perp=perp,
        domain=(lo, hi),
        psi=_make_psi(arc, s0, s1, base, tc, perp),
        kind=kind,
        base_point=base,
        source=arc.owner,
        flats=tuple(flats),
        hull_in_set=hull_ok,
        endpoints=(arc.point(s0), arc.point(s1)),
    )


def _dot_offset(pt, base, direction) -> float:
    return (pt[0] - base[0]) * direction[0] + (pt[1] - base[1]) * direction[1]


def _hull_probe(expr: SetExpr, arc: _Arc, s0: float, s1: float, n: int = 7) -> bool:
    """Sampled check of the hull-in-set condition (recorded, not enforced)."""
    a = arc.point(s0)
    b = arc.point(s1)
    inside = True
    for i in range(1, n):
        t = i / n
        x = a[0] + t * (b[0] - a[0])
        y = a[1] + t * (b[1] - a[1])
        if not contains(expr, x, y):
            inside = False
            break
    return inside


def boundary_pieces(expr: SetExpr) -> list[BoundaryPiece]:
    """Finite list of convex/concave graphical pieces covering the boundary.

    Pieces come from the primitives' own boundary arcs, split where they
    cross the boundary of any other primitive in the expression; each
    surviving sub-arc separates inside from outside. The seam of the unit
    square itself is never a piece: boundaries along the square edge belong
    to pieces only where a primitive (polygon edge, power-epigraph edge)
    supplies them.
    """
    prims = list(iter_primitives(expr))
    pieces: list[BoundaryPiece] = []
    for prim in prims:
        for arc in _natural_arcs(prim):
            cuts = {arc.u0, arc.u1}
            for other in prims:
                if other is prim:
                    continue
                cuts.update(_crossings(arc, other))
            ordered = sorted(cuts)
            for s0, s1 in zip(ordered, ordered[1:]):
                if s1 - s0 <= _SPLIT_TOL:
                    continue
                piece = _classify_subarc(expr, arc, s0, s1)
                if piece is not None:
                    pieces.append(piece)
    return pieces


def chart_slope(piece: BoundaryPiece, alpha) -> float | None:
    """Chart-relative slope of the flow direction over the piece's chart.

    Returns None (the vertical flag) when the flow is orthogonal to the
    chart line, i.e. the denominator theta_c . (1, alpha) vanishes.
    """
    a = alpha.value if hasattr(alpha, "value") else float(alpha)
    den = piece.theta_c[0] + a * piece.theta_c[1]
    num = piece.theta_c_perp[0] + a * piece.theta_c_perp[1]
    scale = math.hypot(1.0, a)
    if abs(den) < 1e-15 * scale:
        return None
    return num / den
