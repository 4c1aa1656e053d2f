"""Convex body representations for low-dimensional covering experiments.

A body is an algebraic spec tree: polytopes (V-representation with derived
facets), Euclidean balls, invertible affine images, Minkowski sums and direct
(Cartesian) sums.  Dimensions 1, 2 and 3 only; everything downstream relies on
support values, membership and boundary access, so that is the interface the
tree is built around.

All objects are immutable after construction (vertex arrays are frozen), so
they can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Optional, Sequence, Union

import numpy as np

MAX_DIM = 3
PREDICATE_TOL = 1e-9


class ValidationError(ValueError):
    """Raised when a body spec violates a structural invariant."""


class DomainError(ValueError):
    """Raised when an operation's precondition on the body fails."""


def as_vector(x, dim: Optional[int] = None) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size < 1 or v.size > MAX_DIM:
        raise ValidationError(f"vector dimension {v.size} outside 1..{MAX_DIM}")
    if not np.all(np.isfinite(v)):
        raise ValidationError("vector has non-finite coordinates")
    if dim is not None and v.size != dim:
        raise ValidationError(f"expected dimension {dim}, got {v.size}")
    return v


def as_direction(u, dim: Optional[int] = None) -> np.ndarray:
    """Unit vector; rejects (near-)zero input rather than guessing."""
    u = as_vector(u, dim)
    n = float(np.linalg.norm(u))
    if n < 1e-12:
        raise ValidationError("zero vector cannot be normalized to a direction")
    return u / n


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# hull utilities (2D monotone chain; 3D via scipy)

def hull_2d(points: np.ndarray) -> np.ndarray:
    """Indices of extreme points in CCW order, collinear points dropped."""
    pts = [(float(x), float(y), i) for i, (x, y) in enumerate(points)]
    pts = sorted(set(pts), key=lambda p: (p[0], p[1]))
    # dedupe coordinates exactly equal
    uniq = []
    for p in pts:
        if uniq and abs(p[0] - uniq[-1][0]) < 1e-300 and abs(p[1] - uniq[-1][1]) < 1e-300:
            continue
        uniq.append(p)
    pts = uniq
    if len(pts) < 3:
        return np.array([p[2] for p in pts], dtype=int)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    ring = lower[:-1] + upper[:-1]
    return np.array([p[2] for p in ring], dtype=int)


def _rotate_to_lex_min(vertices: np.ndarray) -> np.ndarray:
    # rounded keys so the start vertex is stable under last-bit wobble
    keys = [tuple(np.round(v, 9)) for v in vertices]
    k = min(range(len(keys)), key=lambda i: keys[i])
    return np.roll(vertices, -k, axis=0)


class Polytope:
    """Full-dimensional convex polytope, canonical V-representation.

    2D vertices are stored in CCW order starting at the lexicographically
    smallest; 1D/3D vertices are stored lexicographically sorted.  Facets
    (outer unit normal, offset) are derived and satisfy <n,x> <= b for all
    vertices x within 1e-9.
    """

    __slots__ = ("_vertices", "_dim", "__dict__")

    def __init__(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] < 1 or pts.shape[1] > MAX_DIM:
            raise ValidationError("polytope points must be an (n, d) array, d in 1..3")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("polytope points must be finite")
        d = pts.shape[1]
        if d == 1:
            lo, hi = float(pts.min()), float(pts.max())
            if hi - lo < 1e-12:
                raise ValidationError("segment is degenerate (zero length)")
            verts = np.array([[lo], [hi]])
        elif d == 2:
            idx = hull_2d(pts)
            if len(idx) < 3:
                raise ValidationError("polygon is not full-dimensional (collinear points)")
            verts = _rotate_to_lex_min(pts[idx])
        else:
            from scipy.spatial import ConvexHull, QhullError  # type: ignore
            try:
                hull = ConvexHull(pts)
            except QhullError as exc:
                raise ValidationError(f"polytope is not full-dimensional: {exc}") from exc
            verts = pts[np.sort(hull.vertices)]
            order = np.lexsort(verts.T[::-1])
            verts = verts[order]
        self._vertices = _frozen(verts)
        self._dim = d

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @cached_property
    def facets(self) -> tuple[np.ndarray, np.ndarray]:
        """(normals, offsets): unit outer normals N and offsets b with N x <= b on the body."""
        V, d = self._vertices, self._dim
        if d == 1:
            normals = np.array([[1.0], [-1.0]])
            offsets = np.array([V[1, 0], -V[0, 0]])
        elif d == 2:
            edges = np.roll(V, -1, axis=0) - V
            normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
            lens = np.linalg.norm(normals, axis=1)
            normals = normals / lens[:, None]
            offsets = np.einsum("ij,ij->i", normals, V)
        else:
            from scipy.spatial import ConvexHull
            hull = ConvexHull(V)
            eqs = hull.equations  # a·x + b <= 0
            normals = eqs[:, :-1]
            offsets = -eqs[:, -1]
            # merge coplanar simplex facets
            key = np.round(np.column_stack([normals, offsets]), 7)
            _, keep = np.unique(key, axis=0, return_index=True)
            normals, offsets = normals[np.sort(keep)], offsets[np.sort(keep)]
        return _frozen(normals), _frozen(offsets)

    @cached_property
    def hull_simplices(self) -> np.ndarray:
        """Triangulated boundary (3D only), indices into vertices."""
        if self._dim != 3:
            raise DomainError("hull_simplices is a 3D helper")
        from scipy.spatial import ConvexHull
        return ConvexHull(self._vertices).simplices

    def volume(self) -> float:
        V, d = self._vertices, self._dim
        if d == 1:
            return float(V[1, 0] - V[0, 0])
        if d == 2:
            x, y = V[:, 0], V[:, 1]
            return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))
        from scipy.spatial import ConvexHull
        return float(ConvexHull(V).volume)

    def __repr__(self) -> str:
        return f"Polytope(d={self._dim}, nverts={len(self._vertices)})"


@dataclass(frozen=True)
class Ball:
    radius: float
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ValidationError("ball radius must be positive and finite")
        c = as_vector(self.center)
        object.__setattr__(self, "center", tuple(float(v) for v in c))

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def center_vec(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)


@dataclass(frozen=True)
class AffineImage:
    """A K + b for an invertible linear map A."""
    matrix: tuple
    offset: tuple
    body: "Body"

    def __post_init__(self):
        A = np.asarray(self.matrix, dtype=float)
        d = self.body.dim
        if A.shape != (d, d):
            raise ValidationError(f"affine matrix must be {d}x{d}")
        if abs(np.linalg.det(A)) <= 1e-12:
            raise ValidationError("affine matrix is singular (|det| <= 1e-12)")
        b = as_vector(self.offset, d)
        object.__setattr__(self, "matrix", tuple(tuple(float(x) for x in row) for row in A))
        object.__setattr__(self, "offset", tuple(float(x) for x in b))

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def matrix_arr(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    @property
    def offset_vec(self) -> np.ndarray:
        return np.asarray(self.offset, dtype=float)


@dataclass(frozen=True)
class MinkowskiSum:
    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if len(parts) < 2:
            raise ValidationError("minkowski_sum needs at least two parts")
        d = parts[0].dim
        if any(p.dim != d for p in parts):
            raise ValidationError("minkowski_sum parts must share a dimension")
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self) -> int:
        return self.parts[0].dim


@dataclass(frozen=True)
class DirectSum:
    """Cartesian product along complementary coordinate subspaces."""
    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if len(parts) < 2:
            raise ValidationError("direct_sum needs at least two parts")
        d = sum(p.dim for p in parts)
        if d > MAX_DIM:
            raise ValidationError(f"direct_sum total dimension {d} exceeds {MAX_DIM}")
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self) -> int:
        return sum(p.dim for p in self.parts)

    def blocks(self) -> list[tuple[int, int]]:
        """Coordinate (start, stop) slices of the summands."""
        out, k = [], 0
        for p in self.parts:
            out.append((k, k + p.dim))
            k += p.dim
        return out


Body = Union[Polytope, Ball, AffineImage, MinkowskiSum, DirectSum]


@dataclass(frozen=True)
class NormalCone:
    """Outer normal cone at a polytope vertex, generated by incident facet normals."""
    apex: tuple
    generators: tuple

    def __post_init__(self):
        if len(self.generators) == 0:
            raise ValidationError("normal cone needs at least one generator")


def normal_cone(P: Polytope, vertex_index: int) -> NormalCone:
    V = P.vertices
    if not (0 <= vertex_index < len(V)):
        raise IndexError(f"vertex index {vertex_index} out of range 0..{len(V) - 1}")
    v = V[vertex_index]
    normals, offsets = P.facets
    active = np.abs(normals @ v - offsets) <= 1e-9 * (1.0 + np.abs(offsets))
    gens = normals[active]
    if P.dim == 2:
        ang = np.arctan2(gens[:, 1], gens[:, 0])
        gens = gens[np.argsort(ang)]
        if len(gens) != 2:
            raise ValidationError(f"2D vertex should have exactly 2 incident facets, got {len(gens)}")
    return NormalCone(apex=tuple(v), generators=tuple(tuple(g) for g in gens))


# ---------------------------------------------------------------------------
# spec-tree structural helpers

def interior_point(K: Body) -> np.ndarray:
    """A point in the interior of K (vertex mean for polytopes)."""
    if isinstance(K, Polytope):
        return K.vertices.mean(axis=0)
    if isinstance(K, Ball):
        return K.center_vec.copy()
    if isinstance(K, AffineImage):
        return K.matrix_arr @ interior_point(K.body) + K.offset_vec
    if isinstance(K, MinkowskiSum):
        return np.sum([interior_point(p) for p in K.parts], axis=0)
    if isinstance(K, DirectSum):
        return np.concatenate([interior_point(p) for p in K.parts])
    raise ValidationError(f"unknown body variant {type(K).__name__}")


def translate(K: Body, t) -> Body:
    t = as_vector(t, K.dim)
    if isinstance(K, Polytope):
        return Polytope(K.vertices + t)
    return AffineImage(np.eye(K.dim), t, K)


def as_polytope(K: Body) -> Optional[Polytope]:
    """Exact polytope for a ball-free spec tree, else None."""
    if isinstance(K, Polytope):
        return K
    if isinstance(K, Ball):
        return None
    if isinstance(K, AffineImage):
        P = as_polytope(K.body)
        if P is None:
            return None
        return Polytope(P.vertices @ K.matrix_arr.T + K.offset_vec)
    if isinstance(K, MinkowskiSum):
        acc = as_polytope(K.parts[0])
        for p in K.parts[1:]:
            q = as_polytope(p)
            if acc is None or q is None:
                return None
            pts = (acc.vertices[:, None, :] + q.vertices[None, :, :]).reshape(-1, K.dim)
            acc = Polytope(pts)
        return acc
    if isinstance(K, DirectSum):
        factors = [as_polytope(p) for p in K.parts]
        if any(f is None for f in factors):
            return None
        combos = product(*[f.vertices for f in factors])
        pts = np.array([np.concatenate(c) for c in combos])
        return Polytope(pts)
    raise ValidationError(f"unknown body variant {type(K).__name__}")


def as_ball(K: Body) -> Optional[Ball]:
    """Ball equivalent of the spec if it is literally one (possibly affinely scaled)."""
    if isinstance(K, Ball):
        return K
    if isinstance(K, AffineImage):
        inner = as_ball(K.body)
        if inner is None:
            return None
        A = K.matrix_arr
        # only similarity maps keep balls round
        ata = A.T @ A
        s2 = ata[0, 0]
        if np.allclose(ata, s2 * np.eye(K.dim), atol=1e-12 * max(1.0, s2)):
            c = A @ inner.center_vec + K.offset_vec
            return Ball(radius=float(np.sqrt(s2)) * inner.radius, center=tuple(c))
    return None


def negate(K: Body) -> Body:
    """-K as a spec."""
    if isinstance(K, Polytope):
        return Polytope(-K.vertices)
    if isinstance(K, Ball):
        return Ball(K.radius, tuple(-K.center_vec))
    return AffineImage(-np.eye(K.dim), np.zeros(K.dim), K)


def difference_body(K: Body) -> Body:
    """K + (-K); o-symmetric by construction."""
    neg = negate(K)
    P, Q = as_polytope(K), as_polytope(neg)
    if P is not None and Q is not None:
        pts = (P.vertices[:, None, :] + Q.vertices[None, :, :]).reshape(-1, K.dim)
        return Polytope(pts)
    B = as_ball(K)
    if B is not None:
        return Ball(2.0 * B.radius, tuple(np.zeros(K.dim)))
    return MinkowskiSum((K, neg))


def scale_about(P: Polytope, lam: float, anchor) -> Polytope:
    anchor = as_vector(anchor, P.dim)
    return Polytope(anchor + lam * (P.vertices - anchor))


def parallelotope_frame(K: Body) -> Optional[tuple[np.ndarray, np.ndarray]]:
    """(base vertex, edge matrix F) if K is a parallelotope, else None.

    Vertices of a parallelotope are base + F e over e in {0,1}^d.
    """
    P = as_polytope(K)
    if P is None:
        return None
    V, d = P.vertices, P.dim
    if len(V) != 2 ** d:
        return None
    scale = max(1.0, float(np.abs(V).max()))
    if d == 1:
        return V[0], np.array([[V[1, 0] - V[0, 0]]])
    v0 = V[0]
    rest = V[1:]
    for axes in combinations(range(len(rest)), d):
        F = np.stack([rest[i] - v0 for i in axes], axis=1)
        if abs(np.linalg.det(F)) < 1e-12 * scale ** d:
            continue
        predicted = v0 + np.array(list(product((0.0, 1.0), repeat=d))) @ F.T
        got = {tuple(np.round(v / scale, 9)) for v in predicted}
        want = {tuple(np.round(v / scale, 9)) for v in V}
        if got == want:
            return v0, F
    return None


def body_dim(K: Body) -> int:
    return K.dim
