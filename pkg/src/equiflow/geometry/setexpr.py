"""Boolean algebra of convex sets over the unit square.

A SetExpr is a finite tree whose leaves wrap convex primitives and whose
internal nodes are Union, Intersection, and Complement (complement relative
to [0,1]^2). Membership and segment clipping distribute over the tree;
clipping a segment yields an IntervalSet in the segment parameter.

Expressions and primitives are immutable; everything here is pure and safe
for concurrent use.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..errors import SceneError
from .intervals import IntervalSet
from .primitives import (
    Disc,
    Polygon,
    PowerEpigraph,
    Primitive,
    Superellipse,
    clip_segment_primitive,
)

__all__ = [
    "Complement",
    "Intersection",
    "Prim",
    "SetExpr",
    "Union",
    "clip_segment",
    "contains",
    "contains_many",
    "expr_digest",
    "iter_primitives",
    "validate",
]


@dataclass(frozen=True)
class Prim:
    shape: Primitive


@dataclass(frozen=True)
class Union:
    children: tuple["SetExpr", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 1:
            raise ValueError("union needs at least one child")


@dataclass(frozen=True)
class Intersection:
    children: tuple["SetExpr", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 1:
            raise ValueError("intersection needs at least one child")


@dataclass(frozen=True)
class Complement:
    child: "SetExpr"


SetExpr = Prim | Union | Intersection | Complement


def contains(expr: SetExpr, x: float, y: float) -> bool:
    """Membership of (x, y); boundary points follow the closed-set convention
    on primitives and the induced boolean convention on expressions."""
    if isinstance(expr, Prim):
        return expr.shape.contains(x, y)
    if isinstance(expr, Union):
        return any(contains(c, x, y) for c in expr.children)
    if isinstance(expr, Intersection):
        return all(contains(c, x, y) for c in expr.children)
    return not contains(expr.child, x, y)


def contains_many(expr: SetExpr, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    if isinstance(expr, Prim):
        return expr.shape.contains_many(xs, ys)
    if isinstance(expr, Union):
        out = contains_many(expr.children[0], xs, ys)
        for c in expr.children[1:]:
            out |= contains_many(c, xs, ys)
        return out
    if isinstance(expr, Intersection):
        out = contains_many(expr.children[0], xs, ys)
        for c in expr.children[1:]:
            out &= contains_many(c, xs, ys)
        return out
    return ~contains_many(expr.child, xs, ys)


def clip_segment(expr: SetExpr, p, q) -> IntervalSet:
    """Parameter set {t in [0,1] : p + t(q-p) in expr} as a boolean
    combination of the per-primitive intervals."""
    if isinstance(expr, Prim):
        return clip_segment_primitive(expr.shape, p, q)
    if isinstance(expr, Union):
        out = clip_segment(expr.children[0], p, q)
        for c in expr.children[1:]:
            out = out.union(clip_segment(c, p, q))
        return out
    if isinstance(expr, Intersection):
        out = clip_segment(expr.children[0], p, q)
        for c in expr.children[1:]:
            if out.is_empty():
                return out
            out = out.intersection(clip_segment(c, p, q))
        return out
    return clip_segment(expr.child, p, q).complement()


def iter_primitives(expr: SetExpr) -> Iterator[Primitive]:
    if isinstance(expr, Prim):
        yield expr.shape
    elif isinstance(expr, (Union, Intersection)):
        for c in expr.children:
            yield from iter_primitives(c)
    else:
        yield from iter_primitives(expr.child)


def _check_in_square(shape: Primitive, tol: float = 1e-9) -> None:
    lo, hi = -tol, 1.0 + tol
    if isinstance(shape, Polygon):
        for x, y in shape.vertices:
            if not (lo <= x <= hi and lo <= y <= hi):
                raise SceneError(f"polygon vertex ({x}, {y}) outside the unit square")
        return
    if isinstance(shape, Disc):
        cx, cy = shape.center
        r = shape.radius
        if cx - r < lo or cx + r > hi or cy - r < lo or cy + r > hi:
            raise SceneError("disc extends outside the unit square")
        return
    if isinstance(shape, Superellipse):
        cx, cy = shape.center
        for dx, dy, c in ((1, 0, cx), (-1, 0, cx), (0, 1, cy), (0, -1, cy)):
            reach = shape.support(float(dx), float(dy))
            coord = c + reach if (dx + dy) > 0 else c - reach
            if not (lo <= coord <= hi):
                raise SceneError("superellipse extends outside the unit square")
        return
    if isinstance(shape, PowerEpigraph):
        return  # defined relative to the square
    raise SceneError(f"unknown primitive type {type(shape)!r}")


def validate(expr: SetExpr) -> None:
    """Check that every primitive used as a flow target fits in [0,1]^2."""
    count = 0
    for shape in iter_primitives(expr):
        _check_in_square(shape)
        count += 1
    if count == 0:
        raise SceneError("expression contains no primitives")


def expr_digest(expr: SetExpr) -> str:
    """Stable short digest of an expression (dataclass reprs are deterministic)."""
    return hashlib.sha256(repr(expr).encode()).hexdigest()[:16]
