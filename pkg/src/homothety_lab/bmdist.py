"""Banach-Mazur distance upper bounds for planar bodies.

For a linear map T and interior centers a of K and b of L, the quantity

    f(T, a, b) = max_w gauge_{T(K-a)}(w - b) * max_v gauge_{L-b}(T(v - a))

is invariant under rescaling T, and after normalizing T so the first factor
equals 1 it realizes a sandwich L - b within T'(K - a) within f * (L - b).
So f is always a valid distance upper bound and minimizing it over (T, a, b)
tightens it.  The probe sets are vertices for polytopes (making both
containments exact) and 720 support points otherwise (a documented
approximation for smooth bodies).
"""

from __future__ import annotations

import numpy as np

from .bodies import Ball, Body, DomainError, as_polytope, interior_point
from .geometry import direction_grid_2d, john_sandwich, support_many, support_points
from .search import SearchConfig, pattern_search, polish_nm

PROBE_GRID = 720


def _probe_points(K: Body) -> np.ndarray:
    P = as_polytope(K)
    if P is not None:
        return P.vertices
    return support_points(K, direction_grid_2d(PROBE_GRID))


def _shifted_gauge(K: Body):
    """Closure (a, Y) -> gauge values of K - a at the rows of Y, or None when
    a is not safely interior.  Exact for polytopes and balls."""
    P = as_polytope(K)
    if P is not None:
        N, b = P.facets
        def g(a, Y):
            den = b - N @ a
            if np.any(den <= 1e-12):
                return None
            return np.maximum((Y @ N.T) / den, 0.0).max(axis=1)
        return g
    if isinstance(K, Ball):
        c0, r = K.center_vec, K.radius
        def g(a, Y):
            c = c0 - a
            nc = float(c @ c)
            if nc >= r * r - 1e-15:
                return None
            dot = Y @ c
            ny = np.einsum("ij,ij->i", Y, Y)
            return (dot + np.sqrt(dot * dot + (r * r - nc) * ny)) / (r * r - nc)
        return g
    U = direction_grid_2d(PROBE_GRID)
    H = support_many(K, U)
    def g(a, Y):
        den = H - U @ a
        if np.any(den <= 1e-12):
            return None
        return np.maximum((Y @ U.T) / den, 0.0).max(axis=1)
    return g


def bm_distance_upper(K: Body, L: Body, cfg: SearchConfig | None = None) -> float:
    """Upper bound (>= 1) on the Banach-Mazur distance between planar bodies.

    Multistart pattern search over the 8 parameters (4 matrix entries and the
    two centers), seeded from the John-position alignment of both bodies plus
    seeded random perturbations of it.
    """
    if K.dim != 2 or L.dim != 2:
        raise DomainError("bm_distance_upper is a planar routine")
    cfg = cfg or SearchConfig()
    gK = _shifted_gauge(K)
    gL = _shifted_gauge(L)
    V = _probe_points(K)
    W = _probe_points(L)

    def objective(x):
        T = x[:4].reshape(2, 2)
        a, b = x[4:6], x[6:8]
        det = T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]
        if abs(det) < 1e-9:
            return 1e9
        Tinv = np.array([[T[1, 1], -T[0, 1]], [-T[1, 0], T[0, 0]]]) / det
        g_in = gK(a, (W - b) @ Tinv.T)
        g_out = gL(b, (V - a) @ T.T)
        if g_in is None or g_out is None:
            return 1e9
        return float(g_in.max()) * float(g_out.max())

    TK, _ = john_sandwich(K)
    TL, _ = john_sandwich(L)
    MK, cK = TK.matrix_arr, TK.offset_vec
    ML, cL = TL.matrix_arr, TL.offset_vec
    T0 = np.linalg.solve(ML, MK)
    a0 = -np.linalg.solve(MK, cK)
    b0 = -np.linalg.solve(ML, cL)
    starts = [np.concatenate([T0.ravel(), a0, b0]),
              np.concatenate([np.eye(2).ravel(), interior_point(K), interior_point(L)])]
    for r in range(max(0, min(cfg.restarts, 12) - len(starts))):
        rng = cfg.child_rng(61, r)
        starts.append(np.concatenate([
            (T0 + 0.3 * rng.standard_normal((2, 2))).ravel(),
            a0 + 0.1 * rng.standard_normal(2),
            b0 + 0.1 * rng.standard_normal(2)]))

    best = np.inf
    for x0 in starts:
        x, fx, _ = pattern_search(objective, x0, step=0.2, min_step=1e-7,
                                  max_evals=min(3000, cfg.max_iters * 2))
        x, fx = polish_nm(objective, x, max_iters=400)
        fx = objective(x)
        if fx < best:
            best = fx
    return float(max(1.0, best))
