"""Body spec parsing, canonical JSON, hashing, and run records."""

import json

import numpy as np
import pytest

from homothety_lab.bodies import Ball, DirectSum, MinkowskiSum, Polytope
from homothety_lab.serialization import (
    RunRecord,
    SchemaError,
    body_hash,
    body_to_jsonable,
    canonical_json,
    jsonable,
    parse_body,
)


def test_parse_polygon_roundtrip():
    spec = {"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}
    K = parse_body(spec)
    assert isinstance(K, Polytope)
    back = body_to_jsonable(K)
    K2 = parse_body(back)
    assert body_hash(K) == body_hash(K2)


def test_parse_ball_and_segment():
    B = parse_body({"type": "ball", "radius": 2.0, "center": [1.0, 0.0]})
    assert isinstance(B, Ball)
    assert B.radius == pytest.approx(2.0)
    s = parse_body({"type": "segment", "a": -1.0, "b": 3.0})
    assert s.dim == 1


def test_parse_composites():
    spec = {"type": "direct_sum", "parts": [
        {"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
        {"type": "segment", "a": -1.0, "b": 1.0},
    ]}
    K = parse_body(spec)
    assert isinstance(K, DirectSum)
    assert K.dim == 3
    spec2 = {"type": "minkowski_sum", "parts": [
        {"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
        {"type": "ball", "radius": 0.5, "center": [0.0, 0.0]},
    ]}
    K2 = parse_body(spec2)
    assert isinstance(K2, MinkowskiSum)


def test_parse_affine():
    spec = {"type": "affine", "matrix": [[2, 0], [0, 1]], "offset": [0, 0],
            "body": {"type": "ball", "radius": 1.0, "center": [0.0, 0.0]}}
    K = parse_body(spec)
    assert K.dim == 2


def test_schema_error_has_pointer():
    with pytest.raises(SchemaError) as exc:
        parse_body({"type": "polygon"})
    assert "/" in str(exc.value)
    with pytest.raises(SchemaError):
        parse_body({"type": "polygons", "vertices": [[0, 0], [1, 0], [0, 1]]})
    with pytest.raises(SchemaError) as exc2:
        parse_body({"type": "direct_sum", "parts": [
            {"type": "ball", "radius": -1.0, "center": [0.0, 0.0]}]})
    assert "parts" in str(exc2.value)


def test_body_hash_invariant_under_vertex_rotation():
    a = Polytope([[0, 0], [1, 0], [1, 1], [0, 1]])
    b = Polytope([[1, 1], [0, 1], [0, 0], [1, 0]])
    assert body_hash(a) == body_hash(b)
    c = Polytope([[0, 0], [2, 0], [2, 1], [0, 1]])
    assert body_hash(a) != body_hash(c)


def test_canonical_json_deterministic_and_sorted():
    doc = {"b": 1.0, "a": [np.float64(0.25), np.int64(3)]}
    s1 = canonical_json(jsonable(doc))
    s2 = canonical_json(jsonable(json.loads(s1)))
    assert s1 == s2
    assert s1.index('"a"') < s1.index('"b"')


def test_run_record_roundtrip():
    rec = RunRecord(body_hash="abc", command="gamma",
                    params={"m": 4}, result={"value": 0.5},
                    seed=7, runtime_ms=12)
    s = rec.to_json()
    back = RunRecord.from_json(s)
    assert back.body_hash == "abc"
    assert back.result["value"] == 0.5
    assert back.seed == 7
    assert back.tool_version == rec.tool_version


def test_jsonable_handles_numpy_scalars_and_arrays():
    out = jsonable({"x": np.array([1.0, 2.0]), "y": np.float32(0.5),
                    "z": (np.int32(3), np.bool_(True))})
    assert out["x"] == [1.0, 2.0]
    assert isinstance(out["y"], float)
    assert out["z"][0] == 3
    assert out["z"][1] is True
