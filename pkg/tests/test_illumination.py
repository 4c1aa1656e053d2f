"""Illumination numbers, X-ray numbers, and the illumination parameter."""

import math

import numpy as np
import pytest

from homothety_lab.bodies import Ball, DomainError, Polytope
from homothety_lab.illumination import (
    IlluminationCertificate,
    IlluminationConfig,
    XrayConfig,
    illuminates_dir,
    illuminates_point,
    illumination_number_polygon,
    illumination_number_upper,
    illumination_parameter,
    verify_illumination,
    xray_number_polygon,
)
from homothety_lab.sampling import (
    ellipse_polygon,
    random_o_symmetric_polygon,
    random_polygon,
    regular_polygon,
)

from oracles import illumination_oracle, illuminates_point_oracle, xray_oracle


# ---------------------------------------------------------------------------
# direction / point illumination predicates

def test_illuminates_dir_square_edge_and_corner(square):
    # straight down illuminates the top edge but no point of the bottom edge
    assert illuminates_dir(square, np.array([0.5, 1.0]), np.array([0.0, -1.0]))
    assert not illuminates_dir(square, np.array([0.5, 0.0]),
                               np.array([0.0, -1.0]))
    # a corner needs the direction strictly inside both edge half-spaces
    assert illuminates_dir(square, np.array([1.0, 1.0]),
                           np.array([-1.0, -1.0]))
    assert not illuminates_dir(square, np.array([1.0, 1.0]),
                               np.array([0.0, -1.0]))


def test_illuminates_point_matches_ray_oracle():
    V = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
    K = Polytope(V)
    cases = [([2.0, 2.0], [1.0, 1.0]),    # corner seen from its own diagonal
             ([2.0, 2.0], [-1.0, 1.0]),   # corner seen edge-on: not lit
             ([2.0, 2.0], [0.5, 1.0]),
             ([0.0, 3.0], [0.0, 1.0]),
             ([3.0, 0.0], [1.0, 0.5])]
    for p, b in cases:
        want = illuminates_point_oracle(V, p, b)
        got = illuminates_point(K, np.array(p, float), np.array(b, float))
        assert got == want, (p, b)


def test_illuminates_point_frozen_corner_case():
    # source at (2,2) cannot light the far corner (-1,1): the ray through it
    # leaves the square immediately
    K = Polytope([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
    assert illuminates_point(K, np.array([2.0, 2.0]),
                             np.array([-1.0, 1.0])) is False


# ---------------------------------------------------------------------------
# planar illumination numbers

def test_illum_square_is_four(square):
    n, cert = illumination_number_polygon(square)
    assert n == 4
    ok, _ = verify_illumination(square, cert.config)
    assert ok


def test_illum_triangle_is_three(triangle):
    n, cert = illumination_number_polygon(triangle)
    assert n == 3


def test_illum_hexagon_is_three(hexagon):
    n, cert = illumination_number_polygon(hexagon)
    assert n == 3


def test_illum_parallelogram_is_four():
    P = Polytope([[0, 0], [2, 1], [3, 4], [1, 3]])
    n, _ = illumination_number_polygon(P)
    assert n == 4


def test_illum_regular_gons_are_three():
    for m in (5, 7, 12, 33, 64):
        n, _ = illumination_number_polygon(regular_polygon(m))
        assert n == 3, m


def test_illum_matches_grid_oracle_on_random_polygons():
    rng = np.random.default_rng(11)
    for _ in range(12):
        P = random_polygon(rng)
        n, cert = illumination_number_polygon(P)
        want = illumination_oracle(P.vertices)
        assert n == want
        ok, _ = verify_illumination(P, cert.config)
        assert ok


def test_verify_illumination_rejects_insufficient(square):
    cfg = IlluminationConfig(mode="directions",
                             directions=((-1.0, -1.0), (1.0, 1.0)),
                             sources=())
    ok, witness = verify_illumination(square, cfg)
    assert not ok
    assert witness is not None


# ---------------------------------------------------------------------------
# X-ray numbers

def test_xray_square_two_triangle_three(square, triangle, hexagon):
    n, cfg = xray_number_polygon(square)
    assert n == 2 == xray_oracle(square.vertices)
    n, _ = xray_number_polygon(triangle)
    assert n == 3 == xray_oracle(triangle.vertices)
    n, _ = xray_number_polygon(hexagon)
    assert n == 2 == xray_oracle(hexagon.vertices)


def test_xray_ellipse_polygon_is_two():
    E = ellipse_polygon(2.0, 1.0, 48)
    n, _ = xray_number_polygon(E)
    assert n == 2


def test_xray_config_canonicalizes_mod_pi():
    c1 = XrayConfig(lines=((1.0, 0.5), (0.3, 1.0)))
    angs = [math.atan2(v[1], v[0]) for v in c1.lines]
    assert all(0.0 <= a < math.pi for a in angs)
    with pytest.raises(Exception):
        XrayConfig(lines=((1.0, 0.5), (-1.0, -0.5)))  # same line mod pi


# ---------------------------------------------------------------------------
# 3D upper bounds

def test_illum_3d_cube_octahedron_ball():
    cube = Polytope([[x, y, z] for x in (0, 1) for y in (0, 1)
                     for z in (0, 1)])
    assert illumination_number_upper(cube) == 8
    ball = Ball(1.0, [0.0, 0.0, 0.0])
    assert illumination_number_upper(ball) == 4
    octa = Polytope([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0],
                     [0, 0, 1], [0, 0, -1]])
    assert illumination_number_upper(octa) == 6


# ---------------------------------------------------------------------------
# illumination parameter (o-symmetric planar)

def test_ill_param_hexagon_and_square(hexagon):
    got = illumination_parameter(hexagon)
    assert got == pytest.approx(6.0, abs=1e-2)
    C = Polytope([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    assert illumination_parameter(C) == pytest.approx(4.0, abs=1e-2)


def test_ill_param_disk_exceeds_four_root_two():
    got = illumination_parameter(Ball(1.0, [0.0, 0.0]))
    assert got >= 4.0 * math.sqrt(2.0) - 1e-9
    assert got == pytest.approx(4.0 * math.sqrt(2.0), abs=0.02)


def test_ill_param_requires_o_symmetric(triangle):
    with pytest.raises(Exception):
        illumination_parameter(triangle)


def test_ill_param_at_least_illumination_number():
    rng = np.random.default_rng(5)
    for _ in range(6):
        P = random_o_symmetric_polygon(rng)
        n, _ = illumination_number_polygon(P)
        assert illumination_parameter(P) >= n - 1e-6
