"""Body constructors, validation, and derived geometry."""

import numpy as np
import pytest

from homothety_lab.bodies import (
    Ball,
    DirectSum,
    DomainError,
    MinkowskiSum,
    Polytope,
    ValidationError,
    as_ball,
    as_polytope,
    difference_body,
    interior_point,
    normal_cone,
    parallelotope_frame,
)

from oracles import triangle_difference_hexagon


SQUARE = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
TRIANGLE = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]


def test_polytope_vertices_hulled_and_ordered():
    P = Polytope(SQUARE + [[0.5, 0.5]])  # interior point dropped by the hull
    assert len(P.vertices) == 4
    assert P.dim == 2


def test_polytope_rejects_degenerate():
    with pytest.raises((DomainError, ValidationError)):
        Polytope([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])


def test_ball_radius_positive():
    with pytest.raises((DomainError, ValidationError)):
        Ball(-1.0, [0.0, 0.0])


def test_facets_normalized_and_supporting():
    P = Polytope(SQUARE)
    N, b = P.facets
    assert np.allclose(np.linalg.norm(N, axis=1), 1.0)
    V = P.vertices
    assert np.all(V @ N.T <= b[None, :] + 1e-12)
    # every facet is attained by some vertex
    assert np.all(np.max(V @ N.T, axis=0) >= b - 1e-12)


def test_interior_point_is_interior():
    for body in (Polytope(SQUARE), Polytope(TRIANGLE), Ball(2.0, [3.0, -1.0])):
        p = interior_point(body)
        if isinstance(body, Polytope):
            N, b = body.facets
            assert np.all(N @ p < b - 1e-12)
        else:
            assert np.linalg.norm(p - body.center_vec) < body.radius


def test_as_polytope_and_as_ball_roundtrip():
    P = Polytope(SQUARE)
    B = Ball(1.0, [0.0, 0.0])
    assert as_polytope(P) is not None
    assert as_ball(P) is None
    assert as_ball(B) is not None
    assert as_polytope(B) is None


def test_parallelotope_frame_detection():
    sq = Polytope(SQUARE)
    frame = parallelotope_frame(sq)
    assert frame is not None
    v0, F = frame
    corners = [np.asarray(v0) + F @ np.array(e)
               for e in [[0, 0], [1, 0], [0, 1], [1, 1]]]
    got = {tuple(np.round(c, 9)) for c in corners}
    want = {tuple(np.round(np.asarray(v, float), 9)) for v in SQUARE}
    assert got == want
    assert parallelotope_frame(Polytope(TRIANGLE)) is None
    slanted = Polytope([[0, 0], [2, 1], [3, 4], [1, 3]])
    assert parallelotope_frame(slanted) is not None


def test_difference_body_of_triangle_is_hexagon():
    D = difference_body(Polytope(TRIANGLE))
    want = triangle_difference_hexagon(np.array(TRIANGLE))
    got = D.vertices
    assert len(got) == 6
    # same vertex set up to cyclic order
    gs = {tuple(np.round(v, 9)) for v in got}
    ws = {tuple(np.round(v, 9)) for v in want}
    assert gs == ws


def test_difference_body_is_o_symmetric():
    P = Polytope([[0, 0], [3, 0], [2, 2], [0, 1]])
    D = difference_body(P)
    vs = {tuple(np.round(v, 9)) for v in D.vertices}
    assert vs == {tuple(np.round(-np.asarray(v), 9)) for v in D.vertices}


def test_normal_cone_at_square_corner():
    P = Polytope(SQUARE)
    idx = int(np.argmax(P.vertices @ np.array([1.0, 1.0])))
    cone = normal_cone(P, idx)
    assert np.allclose(cone.apex, [1.0, 1.0])
    gens = np.array(cone.generators)
    assert gens.shape == (2, 2)
    units = {tuple(np.round(g / np.linalg.norm(g), 9)) for g in gens}
    assert units == {(1.0, 0.0), (0.0, 1.0)}
    with pytest.raises(IndexError):
        normal_cone(P, 99)


def test_direct_sum_dimensions():
    prism = DirectSum([Polytope(SQUARE), Polytope([[-1.0], [1.0]])])
    assert prism.dim == 3
    assert len(prism.parts) == 2


def test_minkowski_sum_dim_match():
    s = MinkowskiSum([Polytope(SQUARE), Ball(0.5, [0.0, 0.0])])
    assert s.dim == 2
    with pytest.raises((DomainError, ValidationError)):
        MinkowskiSum([Polytope(SQUARE), Polytope([[-1.0], [1.0]])])
