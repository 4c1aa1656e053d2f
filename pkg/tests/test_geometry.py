"""Support, gauge, containment, boundary sampling, and John position."""

import math

import numpy as np
import pytest

from homothety_lab.bodies import Ball, Polytope
from homothety_lab.geometry import (
    AffineMap,
    apply_affine,
    boundary_points,
    contains,
    direction_grid_2d,
    fibonacci_sphere,
    gauge,
    gauge_many,
    gauge_norm,
    is_o_symmetric,
    john_sandwich,
    support,
    support_many,
    support_points,
)


def test_support_square_matches_vertex_maximum(square):
    dirs = direction_grid_2d(64)
    vals = support_many(square, dirs)
    want = (square.vertices @ dirs.T).max(axis=0)
    assert np.allclose(vals, want, atol=1e-12)


def test_support_ball_closed_form():
    B = Ball(2.0, [1.0, -1.0])
    u = np.array([0.6, 0.8])
    assert support(B, u) == pytest.approx(1.0 * 0.6 - 1.0 * 0.8 + 2.0)


def test_support_points_lie_on_boundary(square):
    dirs = direction_grid_2d(16)
    pts = support_points(square, dirs)
    vals = np.einsum("ij,ij->i", pts, dirs)
    assert np.allclose(vals, support_many(square, dirs), atol=1e-9)


def test_gauge_square_centered():
    C = Polytope([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    assert gauge(C, np.array([0.5, 0.0])) == pytest.approx(0.5)
    assert gauge(C, np.array([1.0, 1.0])) == pytest.approx(1.0)
    assert gauge(C, np.array([0.0, 0.0])) == pytest.approx(0.0)


def test_gauge_needs_interior_origin(triangle):
    # origin sits on the triangle's boundary, so no gauge exists
    with pytest.raises(Exception):
        gauge(triangle, np.array([0.25, 0.25]))
    shifted = Polytope(triangle.vertices - [0.25, 0.25])
    assert gauge(shifted, np.array([0.25, 0.25])) == pytest.approx(1.0)


def test_gauge_many_matches_scalar(square):
    # gauge about an interior origin: recenter the square at its centroid
    C = Polytope(square.vertices - square.vertices.mean(axis=0))
    pts = np.array([[0.1, 0.2], [-0.3, 0.1], [0.49, -0.49], [0.0, 0.0]])
    many = gauge_many(C, pts)
    each = [gauge(C, p) for p in pts]
    assert np.allclose(many, each, atol=1e-12)


def test_gauge_norm_requires_symmetry(triangle):
    C = Polytope([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    assert gauge_norm(C, np.array([-0.5, 0.0])) == pytest.approx(0.5)
    with pytest.raises(Exception):
        gauge_norm(triangle, np.array([0.1, 0.1]))


def test_contains_boundary_and_exterior(square):
    assert contains(square, np.array([0.5, 0.5]))
    assert contains(square, np.array([1.0, 1.0]))
    assert not contains(square, np.array([1.0 + 1e-6, 0.5]))


def test_is_o_symmetric(square, hexagon):
    assert not is_o_symmetric(square)  # square at [0,1]^2 is not o-symmetric
    assert is_o_symmetric(hexagon)
    assert is_o_symmetric(Ball(1.0, [0.0, 0.0]))
    assert not is_o_symmetric(Ball(1.0, [0.5, 0.0]))


def test_boundary_points_on_boundary_and_include_vertices(square):
    pts = boundary_points(square, 40)
    assert len(pts) >= 16
    N, b = square.facets
    dist = np.abs(pts @ N.T - b[None, :]).min(axis=1)
    assert np.all(dist <= 1e-9)
    asset = {tuple(np.round(v, 9)) for v in square.vertices}
    got = {tuple(np.round(p, 9)) for p in pts}
    assert asset <= got


def test_direction_grid_and_fibonacci_sphere_are_unit():
    d2 = direction_grid_2d(37)
    assert np.allclose(np.linalg.norm(d2, axis=1), 1.0)
    d3 = fibonacci_sphere(100)
    assert d3.shape == (100, 3)
    assert np.allclose(np.linalg.norm(d3, axis=1), 1.0)
    # reasonable spread: no two of the first 100 directions coincide
    gram = d3 @ d3.T - np.eye(100)
    assert gram.max() < 1.0 - 1e-6


def test_affine_map_roundtrip(square):
    A = np.array([[2.0, 1.0], [0.0, 1.0]])
    b = np.array([3.0, -2.0])
    img = apply_affine(A, b, square)
    want = square.vertices @ A.T + b
    got = {tuple(np.round(v, 9)) for v in img.vertices}
    assert got == {tuple(np.round(v, 9)) for v in want}
    amap = AffineMap(tuple(map(tuple, A)), tuple(b))
    assert np.allclose(amap.apply(square.vertices), want)


def test_john_sandwich_square(square):
    T, rep = john_sandwich(square)
    img = apply_affine(T.matrix_arr, T.offset_vec, square)
    # unit ball inside, d * ball outside
    pts = boundary_points(img, 64)
    r = np.linalg.norm(pts, axis=1)
    assert r.min() >= 1.0 - 1e-6
    assert r.max() <= 2.0 + 1e-6
    assert rep.inner_radius <= rep.outer_radius


def test_john_sandwich_offset_disk():
    B = Ball(5.0, [40.0, -3.0])
    T, rep = john_sandwich(B)
    img = apply_affine(T.matrix_arr, T.offset_vec, B)
    pts = boundary_points(img, 32)
    r = np.linalg.norm(pts, axis=1)
    assert r.min() >= 1.0 - 1e-6 and r.max() <= 2.0 + 1e-6
