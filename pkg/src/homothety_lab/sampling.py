"""Seeded random convex-body generators for experiments and test suites."""

from __future__ import annotations

import numpy as np

from .bodies import Polytope


def random_polygon(rng: np.random.Generator, n_min: int = 4, n_max: int = 9,
                   r_min: float = 0.55, r_max: float = 1.0) -> Polytope:
    """Convex polygon from jittered polar samples: angles sorted uniform,
    radii uniform in [r_min, r_max], convex hull taken."""
    n = int(rng.integers(n_min, n_max + 1))
    while True:
        ang = np.sort(rng.uniform(0.0, 2.0 * np.pi, size=n))
        if np.min(np.diff(ang)) < 1e-3:
            continue
        rad = rng.uniform(r_min, r_max, size=n)
        pts = np.c_[rad * np.cos(ang), rad * np.sin(ang)]
        try:
            P = Polytope(pts)
        except ValueError:
            continue
        if len(P.vertices) >= 3:
            return P


def random_o_symmetric_polygon(rng: np.random.Generator, n_min: int = 3,
                               n_max: int = 6, r_min: float = 0.55,
                               r_max: float = 1.0) -> Polytope:
    """Origin-symmetric convex polygon: hull of +/- jittered polar samples."""
    n = int(rng.integers(n_min, n_max + 1))
    while True:
        ang = np.sort(rng.uniform(0.0, np.pi, size=n))
        if np.min(np.diff(ang)) < 1e-3:
            continue
        rad = rng.uniform(r_min, r_max, size=n)
        pts = np.c_[rad * np.cos(ang), rad * np.sin(ang)]
        try:
            P = Polytope(np.vstack([pts, -pts]))
        except ValueError:
            continue
        if len(P.vertices) >= 4:
            return P


def regular_polygon(m: int, radius: float = 1.0, phase: float = 0.0) -> Polytope:
    ang = phase + 2.0 * np.pi * np.arange(m) / m
    return Polytope(np.c_[radius * np.cos(ang), radius * np.sin(ang)])


def ellipse_polygon(a: float, b: float, n: int = 64, phase: float = 0.0) -> Polytope:
    """Polygon inscribed in the axis-aligned ellipse x^2/a^2 + y^2/b^2 = 1."""
    ang = phase + 2.0 * np.pi * np.arange(n) / n
    return Polytope(np.c_[a * np.cos(ang), b * np.sin(ang)])
