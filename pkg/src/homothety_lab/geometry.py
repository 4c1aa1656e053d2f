"""Support values, membership, gauges and John-type sandwiching.

The covering and illumination engines only ever query bodies through the
functions here.  Polytopes and balls are handled exactly; Minkowski sums that
cannot be reduced to an exact polytope fall back to a support-grid outer
approximation (0.5 degree resolution in 2D, a Fibonacci direction set in 3D),
which is the documented approximation for composite trees.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bodies import (
    AffineImage,
    Ball,
    Body,
    DirectSum,
    DomainError,
    MinkowskiSum,
    Polytope,
    ValidationError,
    as_ball,
    as_polytope,
    as_vector,
    interior_point,
)

GRID_2D = 720  # 0.5 degree support grid for approximate membership
GRID_3D = 2048


@lru_cache(maxsize=32)
def direction_grid_2d(n: int = GRID_2D) -> np.ndarray:
    th = np.arange(n) * (2.0 * np.pi / n)
    return np.stack([np.cos(th), np.sin(th)], axis=1)


@lru_cache(maxsize=8)
def fibonacci_sphere(n: int = GRID_3D) -> np.ndarray:
    """Near-uniform direction set on S^2 (golden-angle lattice)."""
    i = np.arange(n) + 0.5
    phi = np.pi * (3.0 - np.sqrt(5.0)) * i
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def default_grid(dim: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        return direction_grid_2d()
    return fibonacci_sphere()


# ---------------------------------------------------------------------------
# support

def support_many(K: Body, U: np.ndarray) -> np.ndarray:
    """h_K row-wise over a direction matrix U (not necessarily unit)."""
    U = np.atleast_2d(np.asarray(U, dtype=float))
    if isinstance(K, Polytope):
        return (U @ K.vertices.T).max(axis=1)
    if isinstance(K, Ball):
        return U @ K.center_vec + K.radius * np.linalg.norm(U, axis=1)
    if isinstance(K, AffineImage):
        return support_many(K.body, U @ K.matrix_arr) + U @ K.offset_vec
    if isinstance(K, MinkowskiSum):
        return np.sum([support_many(p, U) for p in K.parts], axis=0)
    if isinstance(K, DirectSum):
        # product body: support splits additively over coordinate blocks
        acc = np.zeros(len(U))
        for p, (a, b) in zip(K.parts, K.blocks()):
            acc += support_many(p, U[:, a:b])
        return acc
    raise ValidationError(f"unknown body variant {type(K).__name__}")


def support(K: Body, u) -> float:
    return float(support_many(K, as_vector(u, K.dim)[None, :])[0])


def support_points(K: Body, U: np.ndarray) -> np.ndarray:
    """One maximizer of <x, u> per row of U (a boundary point for u != 0)."""
    U = np.atleast_2d(np.asarray(U, dtype=float))
    if isinstance(K, Polytope):
        idx = np.argmax(U @ K.vertices.T, axis=1)
        return K.vertices[idx]
    if isinstance(K, Ball):
        norms = np.linalg.norm(U, axis=1)
        safe = np.where(norms > 1e-15, norms, 1.0)
        return K.center_vec + K.radius * np.where(
            (norms > 1e-15)[:, None], U / safe[:, None], 0.0
        )
    if isinstance(K, AffineImage):
        return support_points(K.body, U @ K.matrix_arr) @ K.matrix_arr.T + K.offset_vec
    if isinstance(K, MinkowskiSum):
        return np.sum([support_points(p, U) for p in K.parts], axis=0)
    if isinstance(K, DirectSum):
        cols = []
        for p, (a, b) in zip(K.parts, K.blocks()):
            sub = U[:, a:b]
            pts = support_points(p, sub)
            degen = np.linalg.norm(sub, axis=1) <= 1e-15
            if degen.any():
                pts[degen] = interior_point(p)
            cols.append(pts)
        return np.concatenate(cols, axis=1)
    raise ValidationError(f"unknown body variant {type(K).__name__}")


# ---------------------------------------------------------------------------
# membership

def contains(K: Body, x, tol: float = 0.0) -> bool:
    if tol < 0:
        raise DomainError("tol must be >= 0")
    x = as_vector(x, K.dim)
    if isinstance(K, Polytope):
        N, b = K.facets
        return bool(np.all(N @ x <= b + tol))
    if isinstance(K, Ball):
        return float(np.linalg.norm(x - K.center_vec)) <= K.radius + tol
    if isinstance(K, AffineImage):
        A = K.matrix_arr
        y = np.linalg.solve(A, x - K.offset_vec)
        inner_tol = tol / float(np.linalg.norm(A, 2)) if tol > 0 else 0.0
        return contains(K.body, y, inner_tol)
    if isinstance(K, DirectSum):
        return all(
            contains(p, x[a:b], tol) for p, (a, b) in zip(K.parts, K.blocks())
        )
    if isinstance(K, MinkowskiSum):
        P = as_polytope(K)
        if P is not None:
            return contains(P, x, tol)
        if K.dim == 1:
            lo = -support(K, [-1.0])
            hi = support(K, [1.0])
            return lo - tol <= x[0] <= hi + tol
        U = default_grid(K.dim)
        return bool(np.all(U @ x <= support_many(K, U) + tol))
    raise ValidationError(f"unknown body variant {type(K).__name__}")


# ---------------------------------------------------------------------------
# gauges

def gauge(K: Body, x) -> float:
    """Asymmetric Minkowski gauge inf{lam > 0 : x in lam K}; needs 0 interior."""
    return float(gauge_many(K, as_vector(x, K.dim)[None, :])[0])


def gauge_many(K: Body, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if isinstance(K, Polytope):
        N, b = K.facets
        if np.any(b <= 1e-12):
            raise DomainError("gauge needs the origin interior to the body")
        return np.maximum((X @ N.T) / b, 0.0).max(axis=1)
    if isinstance(K, Ball):
        c, r = K.center_vec, K.radius
        nc = float(np.dot(c, c))
        if nc >= r * r - 1e-15:
            raise DomainError("gauge needs the origin interior to the body")
        # lam solves |x - lam c| = lam r, smallest positive root
        dot = X @ c
        nx = np.einsum("ij,ij->i", X, X)
        return (dot + np.sqrt(dot * dot + (r * r - nc) * nx)) / (r * r - nc)
    if isinstance(K, AffineImage) and not np.any(K.offset_vec):
        return gauge_many(K.body, X @ np.linalg.inv(K.matrix_arr).T)
    if isinstance(K, DirectSum):
        vals = []
        for p, (a, b) in zip(K.parts, K.blocks()):
            vals.append(gauge_many(p, X[:, a:b]))
        return np.max(vals, axis=0)
    # composite fallback: dual formula on the support grid (outer approximation,
    # consistent with the grid membership test)
    U = default_grid(K.dim)
    h = support_many(K, U)
    if np.any(h <= 1e-12):
        raise DomainError("gauge needs the origin interior to the body")
    return np.maximum((X @ U.T) / h, 0.0).max(axis=1)


def is_o_symmetric(K: Body, tol: float = 1e-7) -> bool:
    U = default_grid(K.dim)
    h = support_many(K, U)
    hneg = support_many(K, -U)
    scale = max(1.0, float(np.abs(h).max()))
    return bool(np.all(np.abs(h - hneg) <= tol * scale))


def gauge_norm(K: Body, x) -> float:
    """The norm ||x||_K for an o-symmetric K with the origin interior."""
    if not is_o_symmetric(K):
        raise DomainError("gauge_norm requires an o-symmetric body")
    x = as_vector(x, K.dim)
    if not np.any(x):
        return 0.0
    return gauge(K, x)


# ---------------------------------------------------------------------------
# planar polygon approximations

def polygon_inner(K: Body, n: int = GRID_2D) -> Polytope:
    """Inscribed polygon through support points on an angle grid (2D)."""
    if K.dim != 2:
        raise DomainError("polygon_inner is planar")
    P = as_polytope(K)
    if P is not None:
        return P
    return Polytope(support_points(K, direction_grid_2d(n)))


def polygon_outer(K: Body, n: int = GRID_2D) -> Polytope:
    """Circumscribed polygon from tangent lines on an angle grid (2D)."""
    if K.dim != 2:
        raise DomainError("polygon_outer is planar")
    P = as_polytope(K)
    if P is not None:
        return P
    U = direction_grid_2d(n)
    h = support_many(K, U)
    nxt = np.roll(np.arange(n), -1)
    det = U[:, 0] * U[nxt, 1] - U[:, 1] * U[nxt, 0]
    x = (h * U[nxt, 1] - h[nxt] * U[:, 1]) / det
    y = (U[:, 0] * h[nxt] - U[nxt, 0] * h) / det
    return Polytope(np.stack([x, y], axis=1))


def to_shapely(K: Body, n: int = GRID_2D, outer: bool = False):
    from shapely.geometry import Polygon as ShapelyPolygon

    P = as_polytope(K)
    if P is None:
        P = polygon_outer(K, n) if outer else polygon_inner(K, n)
    return ShapelyPolygon(P.vertices)


def boundary_points(K: Body, n: int) -> np.ndarray:
    """Boundary sample: support points over a direction grid, plus polytope
    vertices / 3D edge midpoints where available."""
    if K.dim == 1:
        return np.array([[-support(K, [-1.0])], [support(K, [1.0])]])
    U = direction_grid_2d(n) if K.dim == 2 else fibonacci_sphere(n)
    pts = support_points(K, U)
    P = as_polytope(K)
    extras = []
    if P is not None:
        extras.append(P.vertices)
        if K.dim == 2:
            V = P.vertices
            for frac in (0.25, 0.5, 0.75):
                extras.append(V + frac * (np.roll(V, -1, axis=0) - V))
        else:
            tri = P.hull_simplices
            V = P.vertices
            a, b, c = V[tri[:, 0]], V[tri[:, 1]], V[tri[:, 2]]
            extras.extend([(a + b) / 2, (b + c) / 2, (a + c) / 2, (a + b + c) / 3])
    if extras:
        pts = np.vstack([pts] + extras)
    return np.unique(np.round(pts, 12), axis=0)


# ---------------------------------------------------------------------------
# affine maps and John position

@dataclass(frozen=True)
class AffineMap:
    matrix: tuple
    offset: tuple

    @property
    def matrix_arr(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    @property
    def offset_vec(self) -> np.ndarray:
        return np.asarray(self.offset, dtype=float)

    def apply(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X @ self.matrix_arr.T + self.offset_vec

    def apply_body(self, K: Body) -> Body:
        return apply_affine(self.matrix_arr, self.offset_vec, K)

    def inverse(self) -> "AffineMap":
        Ainv = np.linalg.inv(self.matrix_arr)
        return AffineMap(
            tuple(map(tuple, Ainv)), tuple(-(Ainv @ self.offset_vec))
        )

    @staticmethod
    def identity(d: int) -> "AffineMap":
        return AffineMap(tuple(map(tuple, np.eye(d))), tuple(np.zeros(d)))


def apply_affine(A: np.ndarray, b: np.ndarray, K: Body) -> Body:
    """A K + b, collapsing to an exact Polytope or Ball when possible."""
    A = np.asarray(A, dtype=float)
    b = as_vector(b, K.dim)
    if isinstance(K, Polytope):
        return Polytope(K.vertices @ A.T + b)
    bal = as_ball(K)
    if bal is not None:
        ata = A.T @ A
        s2 = ata[0, 0]
        if np.allclose(ata, s2 * np.eye(K.dim), atol=1e-12 * max(1.0, abs(s2))):
            return Ball(float(np.sqrt(s2)) * bal.radius, tuple(A @ bal.center_vec + b))
    return AffineImage(A, b, K)


@dataclass(frozen=True)
class JohnReport:
    inner_radius: float
    outer_radius: float
    iterations: int
    gap: float
    converged: bool


class ConvergenceError(RuntimeError):
    """Optimization failed to converge; carries the best iterate found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


def mvee(points: np.ndarray, tol: float = 1e-8, max_iter: int = 20000):
    """Minimum-volume enclosing ellipsoid {x : (x-c)^T A (x-c) <= 1}.

    Iterative reweighting on the lifted points; afterwards A is scaled so the
    returned ellipsoid encloses every input point exactly.
    """
    P = np.asarray(points, dtype=float)
    n, d = P.shape
    Q = np.column_stack([P, np.ones(n)])
    u = np.full(n, 1.0 / n)
    it = 0
    gap = np.inf
    for it in range(1, max_iter + 1):
        X = Q.T @ (Q * u[:, None])
        try:
            M = np.einsum("ij,ij->i", Q @ np.linalg.inv(X), Q)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"mvee normal matrix singular: {exc}") from exc
        j = int(np.argmax(M))
        maximum = float(M[j])
        gap = maximum / (d + 1) - 1.0
        if gap <= tol:
            break
        step = (maximum - d - 1.0) / ((d + 1.0) * (maximum - 1.0))
        u *= 1.0 - step
        u[j] += step
    c = P.T @ u
    cov = P.T @ (P * u[:, None]) - np.outer(c, c)
    A = np.linalg.inv(cov) / d
    # force exact enclosure
    q = np.einsum("ij,ij->i", (P - c) @ A, P - c)
    A = A / max(1.0, float(q.max()))
    return A, c, it, gap


def john_sandwich(K: Body, tol: float = 1e-8, grid: int = GRID_2D):
    """Affine T with B^d inside T(K) inside d B^d, plus the achieved radii.

    Exact containment checks are used for polytopes (facet offsets, vertex
    norms) and balls; for other specs the radii are measured on a direction
    grid and reported as such.
    """
    d = K.dim
    bal = as_ball(K)
    if bal is not None:
        A = np.eye(d) / bal.radius
        b = -A @ bal.center_vec
        T = AffineMap(tuple(map(tuple, A)), tuple(b))
        return T, JohnReport(1.0, 1.0, 0, 0.0, True)

    P = as_polytope(K)
    if P is not None:
        pts = P.vertices
    else:
        pts = support_points(K, default_grid(d))
    A, c, iters, gap = mvee(pts, tol=tol)
    # the sandwich radii are re-measured exactly below, so a loose reweighting
    # gap only costs frame quality; fail only when the frame itself is suspect
    if gap > 1e-3:
        raise ConvergenceError(
            f"enclosing-ellipsoid reweighting stalled at gap {gap:.3e}", best=(A, c)
        )
    L = np.linalg.cholesky(A).T  # ellipsoid = {|L (x - c)| <= 1}
    M = d * L
    b = -M @ c
    T = AffineMap(tuple(map(tuple, M)), tuple(b))

    img = T.apply_body(K)
    inner, outer = _sandwich_radii(img, grid)
    # normalize so the inner radius is exactly 1 on the checked set
    M2 = M / inner
    T = AffineMap(tuple(map(tuple, M2)), tuple(-(M2 @ c)))
    img = T.apply_body(K)
    inner2, outer2 = _sandwich_radii(img, grid)
    report = JohnReport(inner2, outer2, iters, gap, outer2 <= d + 1e-6 and inner2 >= 1.0 - 1e-9)
    return T, report


def _sandwich_radii(K: Body, grid: int) -> tuple[float, float]:
    P = as_polytope(K) if not isinstance(K, Polytope) else K
    if isinstance(P, Polytope):
        N, b = P.facets
        inner = float(b.min())  # unit normals: offset = distance of facet plane
        outer = float(np.linalg.norm(P.vertices, axis=1).max())
        return inner, outer
    U = default_grid(K.dim)
    h = support_many(K, U)
    inner = float(h.min())
    bpts = support_points(K, U)
    outer = float(np.linalg.norm(bpts, axis=1).max())
    return inner, outer
