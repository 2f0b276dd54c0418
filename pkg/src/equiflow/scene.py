"""Scene files: JSON descriptions of sets in the unit square.

A scene is a JSON object with a single "set" key holding a node tree.
Interior nodes are boolean operations:

    {"op": "union" | "intersection" | "complement", "children": [node, ...]}

(complement takes exactly one child). Leaves are shapes:

    {"shape": "polygon", "vertices": [[x, y], ...]}          convex, CCW
    {"shape": "disc", "center": [x, y], "radius": r}
    {"shape": "superellipse", "center": [x, y], "semi_axes": [a, b],
     "exponent": p, "rotation": radians}                      rotation optional
    {"shape": "power", "coefficient": c, "exponent": p}       {y >= c x^p}

All numbers are parsed at full double precision. Every primitive must lie
inside the closed unit square; parse_scene validates and raises SceneError
on any malformed or out-of-square input.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import SceneError
from .geometry import (
    Complement,
    Disc,
    Intersection,
    Polygon,
    PowerEpigraph,
    Prim,
    SetExpr,
    Superellipse,
    Union,
    expr_digest,
    validate,
)

__all__ = ["parse_scene", "load_scene", "scene_dict", "dump_scene", "scene_digest"]

_OPS = ("union", "intersection", "complement")
_SHAPES = ("polygon", "disc", "superellipse", "power")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise SceneError(msg)


def _number(node: dict, key: str, where: str) -> float:
    _require(key in node, f"{where}: missing field {key!r}")
    v = node[key]
    _require(isinstance(v, (int, float)) and not isinstance(v, bool),
             f"{where}: field {key!r} must be a number")
    return float(v)


def _point(v, where: str) -> tuple[float, float]:
    _require(
        isinstance(v, (list, tuple)) and len(v) == 2
        and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v),
        f"{where}: expected a [x, y] pair",
    )
    return (float(v[0]), float(v[1]))


def _parse_shape(node: dict) -> SetExpr:
    shape = node["shape"]
    where = f"shape {shape!r}"
    if shape == "polygon":
        raw = node.get("vertices")
        _require(isinstance(raw, list) and len(raw) >= 3,
                 f"{where}: needs a list of at least 3 vertices")
        verts = tuple(_point(v, where) for v in raw)
        try:
            return Prim(Polygon(verts))
        except ValueError as e:
            raise SceneError(f"{where}: {e}") from e
    if shape == "disc":
        center = _point(node.get("center"), where)
        radius = _number(node, "radius", where)
        _require(radius > 0, f"{where}: radius must be positive")
        return Prim(Disc(center, radius))
    if shape == "superellipse":
        center = _point(node.get("center"), where)
        axes = _point(node.get("semi_axes"), where)
        exponent = _number(node, "exponent", where)
        rotation = _number(node, "rotation", where) if "rotation" in node else 0.0
        _require(axes[0] > 0 and axes[1] > 0, f"{where}: semi_axes must be positive")
        _require(exponent >= 2, f"{where}: exponent must be >= 2")
        return Prim(Superellipse(center, axes, exponent, rotation))
    if shape == "power":
        coefficient = _number(node, "coefficient", where)
        exponent = _number(node, "exponent", where)
        _require(coefficient > 0, f"{where}: coefficient must be positive")
        _require(exponent >= 1, f"{where}: exponent must be >= 1")
        return Prim(PowerEpigraph(coefficient, exponent))
    raise SceneError(f"unknown shape {shape!r}; expected one of {_SHAPES}")


def _parse_node(node) -> SetExpr:
    _require(isinstance(node, dict), f"scene node must be an object, got {type(node).__name__}")
    if "op" in node and "shape" in node:
        raise SceneError("scene node cannot have both 'op' and 'shape'")
    if "shape" in node:
        return _parse_shape(node)
    if "op" in node:
        op = node["op"]
        _require(op in _OPS, f"unknown op {op!r}; expected one of {_OPS}")
        raw = node.get("children")
        _require(isinstance(raw, list) and len(raw) >= 1,
                 f"op {op!r}: needs a nonempty 'children' list")
        children = tuple(_parse_node(c) for c in raw)
        if op == "complement":
            _require(len(children) == 1, "op 'complement': takes exactly one child")
            return Complement(children[0])
        if op == "union":
            return Union(children)
        return Intersection(children)
    raise SceneError("scene node needs either an 'op' or a 'shape' field")


def parse_scene(doc) -> SetExpr:
    """Parse and validate a scene from a JSON string or a decoded dict."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise SceneError(f"scene is not valid JSON: {e}") from e
    _require(isinstance(doc, dict), "scene document must be a JSON object")
    _require("set" in doc, "scene document must have a 'set' key")
    expr = _parse_node(doc["set"])
    validate(expr)
    return expr


def load_scene(path) -> SetExpr:
    p = Path(path)
    if not p.is_file():
        raise SceneError(f"scene file not found: {p}")
    return parse_scene(p.read_text())


def _node_dict(expr: SetExpr) -> dict:
    if isinstance(expr, Prim):
        s = expr.shape
        if isinstance(s, Polygon):
            return {"shape": "polygon", "vertices": [list(v) for v in s.vertices]}
        if isinstance(s, Disc):
            return {"shape": "disc", "center": list(s.center), "radius": s.radius}
        if isinstance(s, Superellipse):
            return {
                "shape": "superellipse",
                "center": list(s.center),
                "semi_axes": list(s.semi_axes),
                "exponent": s.exponent,
                "rotation": s.rotation,
            }
        if isinstance(s, PowerEpigraph):
            return {"shape": "power", "coefficient": s.coefficient, "exponent": s.exponent}
        raise SceneError(f"unknown primitive type {type(s)!r}")
    if isinstance(expr, Complement):
        return {"op": "complement", "children": [_node_dict(expr.child)]}
    if isinstance(expr, Union):
        return {"op": "union", "children": [_node_dict(c) for c in expr.children]}
    if isinstance(expr, Intersection):
        return {"op": "intersection", "children": [_node_dict(c) for c in expr.children]}
    raise SceneError(f"unknown expression node {type(expr)!r}")


def scene_dict(expr: SetExpr) -> dict:
    """Round-trippable dict form: parse_scene(scene_dict(e)) == e."""
    return {"set": _node_dict(expr)}


def dump_scene(expr: SetExpr, path) -> None:
    Path(path).write_text(json.dumps(scene_dict(expr), indent=2) + "\n")


def scene_digest(expr: SetExpr) -> str:
    """Short stable digest of the expression, for output headers."""
    return expr_digest(expr)
