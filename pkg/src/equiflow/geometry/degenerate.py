"""Degenerate flow directions of a set expression.

A direction is degenerate at separation exponent sigma when some boundary
piece, viewed in a chart aligned with that direction, has one-sided slopes
that approach each other faster than |x - y|**sigma. Straight pieces are
degenerate along their own direction for every sigma (the profile is
identically flat). A curved piece with an order-p flat tangency (the axis
points of an exponent-p superellipse, the origin of an exponent-p power
curve) contributes its tangent direction exactly when sigma < p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .boundary import BoundaryPiece, boundary_pieces
from .setexpr import SetExpr

__all__ = ["DegenerateDirection", "DegenerateSlopeSet", "degenerate_slopes"]


@dataclass(frozen=True)
class DegenerateDirection:
    """One degenerate direction with its provenance."""

    angle: float  # direction angle in [0, pi)
    order: float  # separation order of the flat feature (math.inf for lines)
    source: str  # primitive type that produced the flat boundary feature

    def slope(self) -> float | None:
        """Slope dy/dx of the direction; None for the vertical direction."""
        if abs(self.angle - 0.5 * math.pi) < 1e-15:
            return None
        return math.tan(self.angle)


def _angle_of_slope(alpha) -> float:
    if alpha is None:
        return 0.5 * math.pi
    a = alpha.value if hasattr(alpha, "value") else float(alpha)
    return math.atan2(a, 1.0) % math.pi


def _angle_dist(a: float, b: float) -> float:
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


@dataclass(frozen=True)
class DegenerateSlopeSet:
    """Finite set of degenerate directions for one expression and sigma."""

    sigma: float
    directions: tuple[DegenerateDirection, ...]

    def angles(self) -> list[float]:
        """Sorted distinct direction angles in [0, pi)."""
        out: list[float] = []
        for d in sorted(self.directions, key=lambda d: d.angle):
            if not out or _angle_dist(out[-1], d.angle) > 1e-12:
                out.append(d.angle)
        # first and last may alias mod pi
        if len(out) > 1 and _angle_dist(out[0], out[-1]) <= 1e-12:
            out.pop()
        return out

    def contains_direction(self, angle: float, tol: float = 1e-9) -> bool:
        return any(_angle_dist(angle % math.pi, d.angle) <= tol for d in self.directions)

    def contains_slope(self, alpha, tol: float = 1e-9) -> bool:
        """Whether the flow direction (1, alpha) is degenerate.

        alpha may be a float, a Slope, or None for the vertical direction.
        """
        return self.contains_direction(_angle_of_slope(alpha), tol)

    def nearest(self, angle: float) -> tuple[float, float]:
        """(distance, angle) of the nearest degenerate direction."""
        if not self.directions:
            return (math.inf, math.nan)
        best = min(self.directions, key=lambda d: _angle_dist(angle % math.pi, d.angle))
        return (_angle_dist(angle % math.pi, best.angle), best.angle)


def degenerate_slopes(
    expr: SetExpr,
    sigma: float = 2.0,
    pieces: list[BoundaryPiece] | None = None,
) -> DegenerateSlopeSet:
    """All degenerate directions of the expression at separation sigma.

    sigma must be >= 2; below that even a circle's tangencies would qualify
    and the notion stops being discriminating.
    """
    if not sigma >= 2.0:
        raise ValueError(f"sigma must be >= 2, got {sigma}")
    if pieces is None:
        pieces = boundary_pieces(expr)
    found: list[DegenerateDirection] = []
    for piece in pieces:
        for angle, order in piece.flats:
            if math.isinf(order) or sigma < order:
                found.append(
                    DegenerateDirection(
                        angle=angle % math.pi,
                        order=order,
                        source=type(piece.source).__name__,
                    )
                )
    dedup: list[DegenerateDirection] = []
    for d in sorted(found, key=lambda d: (d.angle, -d.order)):
        if dedup and _angle_dist(dedup[-1].angle, d.angle) <= 1e-12 and dedup[-1].source == d.source:
            continue
        dedup.append(d)
    return DegenerateSlopeSet(sigma=sigma, directions=tuple(dedup))
