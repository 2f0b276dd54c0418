"""Geometry of nice sets in the unit square: primitives, boolean
expressions, chord clipping, areas, boundary charts, degenerate directions."""

from .boundary import BoundaryPiece, boundary_pieces, chart_slope
from .degenerate import DegenerateDirection, DegenerateSlopeSet, degenerate_slopes
from .intervals import IntervalSet
from .primitives import (
    Disc,
    Polygon,
    PowerEpigraph,
    Primitive,
    Superellipse,
    clip_segment_primitive,
)
from .quadrature import adaptive_quadrature, area, gauss_kronrod_15
from .setexpr import (
    Complement,
    Intersection,
    Prim,
    SetExpr,
    Union,
    clip_segment,
    contains,
    contains_many,
    expr_digest,
    iter_primitives,
    validate,
)

__all__ = [
    "BoundaryPiece",
    "Complement",
    "DegenerateDirection",
    "DegenerateSlopeSet",
    "Disc",
    "IntervalSet",
    "Intersection",
    "Polygon",
    "PowerEpigraph",
    "Prim",
    "Primitive",
    "SetExpr",
    "Superellipse",
    "Union",
    "adaptive_quadrature",
    "area",
    "boundary_pieces",
    "chart_slope",
    "clip_segment",
    "clip_segment_primitive",
    "contains",
    "contains_many",
    "degenerate_slopes",
    "expr_digest",
    "gauss_kronrod_15",
    "iter_primitives",
    "validate",
]
