"""Body-spec JSON codec, canonical hashing and run records.

Canonical form: sorted keys, compact separators, repr-roundtrip floats,
polygon vertices CCW starting at the lexicographic minimum (the Polytope
constructor already stores them that way).  The body hash is the sha256 of
that canonical text, so it is invariant under vertex rotation/permutation of
the same polygon.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .bodies import (
    AffineImage,
    Ball,
    Body,
    DirectSum,
    MinkowskiSum,
    Polytope,
    ValidationError,
)

TOOL_VERSION = "homothety-lab 0.1.0"


class SchemaError(ValidationError):
    """Body JSON violates the schema; message carries a JSON pointer."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


def _expect(cond: bool, pointer: str, message: str):
    if not cond:
        raise SchemaError(pointer, message)


def _num_list(val, pointer: str, lo: int = 1, hi: int = 3) -> list:
    _expect(isinstance(val, (list, tuple)), pointer, "expected a number list")
    _expect(lo <= len(val) <= hi, pointer, f"expected {lo}..{hi} numbers")
    out = []
    for i, x in enumerate(val):
        _expect(isinstance(x, (int, float)) and not isinstance(x, bool),
                f"{pointer}/{i}", "expected a number")
        out.append(float(x))
    return out


def _check_convex_ring(vertices: list, pointer: str):
    """Reject rings with a reflex vertex; collinear vertices are dropped later."""
    n = len(vertices)
    sign = 0
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        c = vertices[(i + 2) % n]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        scale = max(1.0, abs(a[0]), abs(a[1]), abs(b[0]), abs(b[1]))
        if abs(cross) <= 1e-12 * scale * scale:
            continue
        s = 1 if cross > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            raise SchemaError(f"{pointer}/{(i + 1) % n}",
                              f"reflex vertex {b} makes the polygon non-convex")


def parse_body(data) -> Body:
    """Parse a body spec from JSON text or an already-decoded object."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"invalid JSON: {exc}") from exc
    return _parse_node(data, "")


def _parse_node(node, pointer: str) -> Body:
    _expect(isinstance(node, dict), pointer, "expected an object")
    typ = node.get("type")
    _expect(isinstance(typ, str), f"{pointer}/type", "missing or non-string 'type'")

    if typ == "polygon":
        verts = node.get("vertices")
        _expect(isinstance(verts, list) and len(verts) >= 3,
                f"{pointer}/vertices", "polygon needs >= 3 vertices")
        pts = [_num_list(v, f"{pointer}/vertices/{i}", 2, 2)
               for i, v in enumerate(verts)]
        _check_convex_ring(pts, f"{pointer}/vertices")
        try:
            return Polytope(pts)
        except ValidationError as exc:
            raise SchemaError(f"{pointer}/vertices", str(exc)) from exc

    if typ == "polytope":
        verts = node.get("vertices")
        _expect(isinstance(verts, list) and len(verts) >= 2,
                f"{pointer}/vertices", "polytope needs >= 2 vertices")
        dims = {len(v) for v in verts if isinstance(v, (list, tuple))}
        _expect(len(dims) == 1, f"{pointer}/vertices", "mixed vertex dimensions")
        d = dims.pop()
        pts = [_num_list(v, f"{pointer}/vertices/{i}", d, d)
               for i, v in enumerate(verts)]
        try:
            return Polytope(pts)
        except ValidationError as exc:
            raise SchemaError(f"{pointer}/vertices", str(exc)) from exc

    if typ == "segment":
        ep = node.get("endpoints", [-1.0, 1.0])
        ep = _num_list(ep, f"{pointer}/endpoints", 2, 2)
        _expect(ep[0] != ep[1], f"{pointer}/endpoints", "degenerate segment")
        return Polytope([[min(ep)], [max(ep)]])

    if typ == "ball":
        r = node.get("radius")
        _expect(isinstance(r, (int, float)) and not isinstance(r, bool) and r > 0,
                f"{pointer}/radius", "radius must be a positive number")
        center = node.get("center", [0.0, 0.0])
        c = _num_list(center, f"{pointer}/center")
        return Ball(float(r), tuple(c))

    if typ == "affine":
        body = _parse_node(node.get("body"), f"{pointer}/body")
        mat = node.get("matrix")
        d = body.dim
        _expect(isinstance(mat, list) and len(mat) == d,
                f"{pointer}/matrix", f"matrix must be {d}x{d}")
        rows = [_num_list(r, f"{pointer}/matrix/{i}", d, d)
                for i, r in enumerate(mat)]
        off = _num_list(node.get("offset", [0.0] * d), f"{pointer}/offset", d, d)
        try:
            return AffineImage(tuple(map(tuple, rows)), tuple(off), body)
        except ValidationError as exc:
            raise SchemaError(f"{pointer}/matrix", str(exc)) from exc

    if typ in ("minkowski_sum", "direct_sum"):
        parts = node.get("parts")
        _expect(isinstance(parts, list) and len(parts) >= 2,
                f"{pointer}/parts", "needs >= 2 parts")
        bodies = [_parse_node(p, f"{pointer}/parts/{i}") for i, p in enumerate(parts)]
        try:
            if typ == "minkowski_sum":
                return MinkowskiSum(tuple(bodies))
            return DirectSum(tuple(bodies))
        except ValidationError as exc:
            raise SchemaError(f"{pointer}/parts", str(exc)) from exc

    raise SchemaError(f"{pointer}/type", f"unknown body type {typ!r}")


def body_to_jsonable(K: Body) -> dict:
    if isinstance(K, Polytope):
        if K.dim == 1:
            return {"type": "segment",
                    "endpoints": [float(K.vertices[0, 0]), float(K.vertices[1, 0])]}
        key = "polygon" if K.dim == 2 else "polytope"
        return {"type": key, "vertices": [[float(x) for x in v] for v in K.vertices]}
    if isinstance(K, Ball):
        return {"type": "ball", "radius": float(K.radius),
                "center": [float(x) for x in K.center]}
    if isinstance(K, AffineImage):
        return {"type": "affine",
                "matrix": [[float(x) for x in row] for row in K.matrix],
                "offset": [float(x) for x in K.offset],
                "body": body_to_jsonable(K.body)}
    if isinstance(K, MinkowskiSum):
        return {"type": "minkowski_sum", "parts": [body_to_jsonable(p) for p in K.parts]}
    if isinstance(K, DirectSum):
        return {"type": "direct_sum", "parts": [body_to_jsonable(p) for p in K.parts]}
    raise ValidationError(f"unknown body variant {type(K).__name__}")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def body_canonical_text(K: Body) -> str:
    return canonical_json(body_to_jsonable(K))


def body_hash(K: Body) -> str:
    return hashlib.sha256(body_canonical_text(K).encode("utf-8")).hexdigest()


def jsonable(x):
    """Best-effort conversion of numpy/dataclass results to plain JSON values."""
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


@dataclass(frozen=True)
class RunRecord:
    body_hash: str
    command: str
    params: dict
    result: Any
    seed: int
    runtime_ms: int
    tool_version: str = TOOL_VERSION

    def to_json(self) -> str:
        return canonical_json({
            "body_hash": self.body_hash,
            "command": self.command,
            "params": jsonable(self.params),
            "result": jsonable(self.result),
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
            "tool_version": self.tool_version,
        })

    @staticmethod
    def from_json(text: str) -> "RunRecord":
        obj = json.loads(text)
        return RunRecord(obj["body_hash"], obj["command"], obj["params"],
                         obj["result"], obj["seed"], obj["runtime_ms"],
                         obj.get("tool_version", TOOL_VERSION))
