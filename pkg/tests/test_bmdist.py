"""Banach-Mazur distance upper bounds."""

import math

import numpy as np
import pytest

from homothety_lab.bodies import Ball, DomainError, Polytope
from homothety_lab.geometry import apply_affine
from homothety_lab.bmdist import bm_distance_upper
from homothety_lab.sampling import random_polygon
from homothety_lab.search import SearchConfig

from oracles import square_disk_bm

CFG = SearchConfig(restarts=6)


def test_bm_square_to_itself(square):
    assert bm_distance_upper(square, square, CFG) == pytest.approx(1.0, abs=1e-6)


def test_bm_square_disk(square, disk):
    d = bm_distance_upper(square, disk, CFG)
    assert d == pytest.approx(square_disk_bm(), abs=5e-3)
    # symmetric arguments land on the same value
    d2 = bm_distance_upper(disk, square, CFG)
    assert d2 == pytest.approx(square_disk_bm(), abs=5e-3)


def test_bm_triangle_disk(triangle, disk):
    d = bm_distance_upper(triangle, disk, CFG)
    assert d == pytest.approx(2.0, abs=1e-2)


def test_bm_at_least_one():
    rng = np.random.default_rng(9)
    K = random_polygon(rng)
    L = random_polygon(rng)
    d = bm_distance_upper(K, L, CFG)
    assert d >= 1.0


def test_bm_affine_invariance():
    rng = np.random.default_rng(10)
    K = random_polygon(rng)
    A = np.array([[1.3, 0.4], [-0.2, 0.8]])
    L = apply_affine(A, np.array([0.7, -0.3]), K)
    d = bm_distance_upper(K, L, CFG)
    assert d <= 1.0 + 1e-6


def test_bm_rejects_3d():
    cube = Polytope([[i, j, k] for i in (0, 1) for j in (0, 1) for k in (0, 1)])
    with pytest.raises(DomainError):
        bm_distance_upper(cube, Ball(1.0, (0.0, 0.0, 0.0)))
