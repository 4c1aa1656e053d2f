"""Homothetic covering functionals.

The central quantity is gamma_m(K), the least common ratio lambda such that m
translates of lambda*K cover K.  After moving an interior point to the origin,
a translate t + lambda*K contains x iff the asymmetric gauge of x - t is at
most lambda, so

    gamma_m(K) = min over translations of  max_{x in K} min_i ||x - t_i||_K,

a gauge m-center problem.  The feasibility subproblem of an outer bisection on
lambda (maximize the minimal coverage depth at fixed lambda) does not actually
depend on lambda, so the bisection collapses onto one global minimization of
the covering radius followed by a verification gate:

  * exact polygon boolean difference for planar polytopes,
  * an exact arc/vertex analysis for disks covered by disks,
  * adaptive one-sided sampling in 3D and for composite specs,

with probe-set refinement driven by gate witnesses.  Parallelotopes skip the
search: a lattice pigeonhole forces gamma_m = 1/floor(m^(1/d)) (and 1 when
m < 2^d), achieved by grid configurations.

Every reported value is a certificate-plus-tolerance claim.  Search results
are upper bounds of the true infima; the parallelotope table and the disk
evaluator (exact for the returned translations) are the exceptions.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp
from scipy.sparse import csr_matrix

from .bodies import (
    Ball,
    Body,
    DirectSum,
    DomainError,
    MinkowskiSum,
    Polytope,
    ValidationError,
    as_ball,
    as_polytope,
    difference_body,
    interior_point,
    parallelotope_frame,
)
from .geometry import (
    AffineMap,
    apply_affine,
    boundary_points,
    contains,
    fibonacci_sphere,
    gauge_many,
    john_sandwich,
    support,
)
from .search import (SearchConfig, local_descend, multistart, multistart_top,
                     pattern_search)
from .serialization import body_hash


class BudgetError(RuntimeError):
    """An enumeration or search exceeded its configured budget."""


# ---------------------------------------------------------------------------
# domain types

@dataclass(frozen=True)
class Homothet:
    lam: float
    t: tuple

    def __post_init__(self):
        if not (0.0 < self.lam <= 1.0):
            raise ValidationError(f"homothety ratio {self.lam} outside (0, 1]")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "t", tuple(float(x) for x in np.atleast_1d(self.t)))


@dataclass(frozen=True)
class CoverConfig:
    body: Body
    homothets: tuple

    def __post_init__(self):
        hs = tuple(self.homothets)
        if not hs:
            raise ValidationError("cover config needs at least one homothet")
        if any(len(h.t) != self.body.dim for h in hs):
            raise ValidationError("homothet translation dimension mismatch")
        object.__setattr__(self, "homothets", hs)


@dataclass(frozen=True)
class CoverCertificate:
    m: int
    lam: float
    translations: tuple
    margin: float
    status: str  # "verified" | "upper_bound_only"

    def __post_init__(self):
        if self.m != len(self.translations):
            raise ValidationError("certificate m must equal len(translations)")
        if self.status not in ("verified", "upper_bound_only"):
            raise ValidationError(f"unknown certificate status {self.status!r}")
        # margin 0 is legitimate only for the forced identity cover (lam = 1)
        if self.status == "verified" and self.margin <= 0.0 and self.lam < 1.0:
            raise ValidationError("verified certificate needs positive margin")
        object.__setattr__(
            self, "translations",
            tuple(tuple(float(x) for x in t) for t in self.translations))

    def to_config(self, K: Body) -> CoverConfig:
        return CoverConfig(K, tuple(Homothet(self.lam, t) for t in self.translations))

    def to_jsonable(self) -> dict:
        return {"m": self.m, "lambda": self.lam,
                "translations": [list(t) for t in self.translations],
                "margin": self.margin, "status": self.status}

    @staticmethod
    def from_jsonable(obj: dict) -> "CoverCertificate":
        return CoverCertificate(int(obj["m"]), float(obj["lambda"]),
                                tuple(tuple(t) for t in obj["translations"]),
                                float(obj["margin"]), str(obj["status"]))


# ---------------------------------------------------------------------------
# coverage verification

def covers(cfg: CoverConfig, geo_tol: float = 1e-9):
    """Decide K subset of union(t_i + lam_i K); returns (covered, witness).

    Exact for planar polytopes (polygon boolean difference tested for
    emptiness at geo_tol) and for disks covered by disks (boundary-arc union
    plus arrangement-vertex probes).  Otherwise decided by adaptive
    boundary/interior sampling refined near the worst probe; that path is
    one-sided: False comes with a witness, True holds up to sampling density.
    """
    K = cfg.body
    lams = np.array([h.lam for h in cfg.homothets], dtype=float)
    ts = np.array([h.t for h in cfg.homothets], dtype=float)
    return _covers_body(K, lams, ts, geo_tol)


def _covers_body(K: Body, lams, ts, geo_tol):
    if K.dim == 1:
        return _covers_1d(K, lams, ts, geo_tol)
    if K.dim == 2:
        P = as_polytope(K)
        if P is not None:
            return _covers_polygon(P, lams, ts, geo_tol)
        B = as_ball(K)
        if B is not None:
            return _covers_disk(B, lams, ts, geo_tol)
    return _covers_sampled(K, lams, ts, geo_tol)


def _covers_1d(K, lams, ts, geo_tol):
    lo = -support(K, [-1.0])
    hi = support(K, [1.0])
    ivals = sorted((lam * lo + t[0], lam * hi + t[0]) for lam, t in zip(lams, ts))
    reach = lo
    for a, b in ivals:
        if a > reach + geo_tol:
            break
        reach = max(reach, b)
    if reach >= hi - geo_tol:
        return True, None
    nxt = min((a for a, _ in ivals if a > reach + geo_tol), default=hi)
    return False, np.array([0.5 * (reach + min(nxt, hi))])


def _covers_polygon(P: Polytope, lams, ts, geo_tol):
    from shapely.geometry import Polygon as SPolygon
    from shapely.ops import unary_union

    base = SPolygon(P.vertices)
    union = unary_union([SPolygon(lam * P.vertices + t) for lam, t in zip(lams, ts)])
    residual = base.difference(union)
    if residual.is_empty or residual.area <= 1e-15:
        return True, None
    core = residual.buffer(-geo_tol)
    if core.is_empty:
        return True, None
    piece = max(getattr(core, "geoms", [core]), key=lambda g: g.area)
    w = piece.representative_point()
    return False, np.array([w.x, w.y])


def _covers_disk(B: Ball, lams, ts, geo_tol):
    R = B.radius
    c0 = B.center_vec
    rel = ts + (lams[:, None] - 1.0) * c0  # homothet centers, relative to c0
    radii = lams * R
    n = len(radii)

    for i in range(n):
        if np.linalg.norm(rel[i]) + R <= radii[i] + geo_tol:
            return True, None

    # union of boundary arcs covered by each small disk
    eps_ang = max(geo_tol / R, 1e-13)
    arcs = []
    for i in range(n):
        dist = np.linalg.norm(rel[i])
        if dist <= 1e-15:
            continue  # concentric strictly smaller disk misses the boundary
        cosv = (R * R + dist * dist - radii[i] ** 2) / (2.0 * R * dist)
        if cosv > 1.0:
            continue
        half = math.acos(max(-1.0, cosv))
        mid = math.atan2(rel[i][1], rel[i][0])
        a = (mid - half) % (2.0 * math.pi)
        arcs.append((a, a + 2.0 * half))
    if not arcs:
        return False, c0 + np.array([R, 0.0])
    arcs.sort()
    start = arcs[0][0]
    reach = start
    closed = False
    for a, b in arcs + [(a + 2 * math.pi, b + 2 * math.pi) for a, b in arcs]:
        if a > reach + eps_ang:
            break
        reach = max(reach, b)
        if reach >= start + 2.0 * math.pi - eps_ang:
            closed = True
            break
    if not closed:
        th = reach + min(1e-9, eps_ang)
        return False, c0 + R * np.array([math.cos(th), math.sin(th)])

    # arrangement vertices: pairwise circle intersections inside the disk,
    # probed on a small ring to detect pockets deeper than geo_tol
    probe_eps = max(1e-7 * R, 10.0 * geo_tol)
    slack = max(geo_tol, 1e-12)
    dirs = np.array([[math.cos(k * math.pi / 4.0), math.sin(k * math.pi / 4.0)]
                     for k in range(8)])
    for i, j in combinations(range(n), 2):
        dvec = rel[j] - rel[i]
        dist = np.linalg.norm(dvec)
        if dist <= 1e-15 or dist > radii[i] + radii[j] or dist < abs(radii[i] - radii[j]):
            continue
        a = (radii[i] ** 2 - radii[j] ** 2 + dist * dist) / (2.0 * dist)
        h2 = radii[i] ** 2 - a * a
        if h2 < 0.0:
            continue
        h = math.sqrt(h2)
        mid = rel[i] + a * dvec / dist
        perp = np.array([-dvec[1], dvec[0]]) / dist
        for sgn in (1.0, -1.0):
            p = mid + sgn * h * perp
            if np.linalg.norm(p) > R + probe_eps:
                continue
            for w in dirs:
                q = p + probe_eps * w
                if np.linalg.norm(q) > R:
                    continue
                if np.all(np.linalg.norm(q - rel, axis=1) > radii + slack):
                    return False, c0 + q
    return True, None


def _interior_lattice(W: Body, k: int) -> np.ndarray:
    d = W.dim
    lo = np.array([-support(W, -e) for e in np.eye(d)])
    hi = np.array([support(W, e) for e in np.eye(d)])
    axes = [np.linspace(lo[j], hi[j], k) for j in range(d)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    keep = [x for x in mesh if contains(W, x, 0.0)]
    return np.array(keep) if keep else np.zeros((1, d))


def _covers_sampled(K: Body, lams, ts, geo_tol, dense: int = 4096):
    c = interior_point(K)
    W = apply_affine(np.eye(K.dim), -c, K)
    ts_c = ts + (lams[:, None] - 1.0) * c
    probes = np.vstack([
        boundary_points(W, dense),
        _interior_lattice(W, 9 if K.dim == 3 else 25),
        np.zeros((1, K.dim)),
    ])
    depth = _cover_depth(W, probes, lams, ts_c)
    order = np.argsort(depth)

    def shortfall(x):
        # negative of the uncovered amount; +inf outside the body
        if not contains(W, x, 0.0):
            return math.inf
        return float(_cover_depth(W, x[None, :], lams, ts_c)[0])

    best_val, best_x = -math.inf, None
    for idx in order[:16]:
        x, fx, _ = pattern_search(shortfall, probes[idx], step=0.08,
                                  min_step=1e-8, max_evals=400)
        if -fx > best_val:
            best_val, best_x = -fx, x
    if best_val > geo_tol:
        return False, best_x + c
    return True, None


def _cover_depth(W: Body, X: np.ndarray, lams, ts) -> np.ndarray:
    """max_i (lam_i - gauge(x - t_i)); nonnegative where x is covered."""
    diffs = X[None, :, :] - ts[:, None, :]
    g = gauge_many(W, diffs.reshape(-1, X.shape[1])).reshape(len(ts), len(X))
    return (lams[:, None] - g).max(axis=0)


# ---------------------------------------------------------------------------
# exact covering radius for the unit disk

def _disk_objective(m: int):
    """Exact covering radius of the unit disk by m points (max over the disk
    of the distance to the nearest point).  Candidates for the max are the
    per-point boundary antipodes, bisector/circle crossings, and circumcenters
    of triples inside the disk; the Voronoi cell structure admits no others.
    """
    i2, j2 = (np.array(x) for x in zip(*combinations(range(m), 2))) if m >= 2 else (None, None)
    trip = list(combinations(range(m), 3))
    i3, j3, k3 = (np.array(x) for x in zip(*trip)) if trip else (None, None, None)

    def radius(flat: np.ndarray) -> float:
        C = flat.reshape(m, 2)
        n2 = (C * C).sum(axis=1)
        norms = np.sqrt(n2)
        anti = np.where(norms[:, None] > 1e-12, -C / np.maximum(norms, 1e-12)[:, None],
                        np.array([1.0, 0.0]))
        cands = [anti]
        if i2 is not None:
            A = 2.0 * (C[j2] - C[i2])
            rhs = n2[j2] - n2[i2]
            na2 = (A * A).sum(axis=1)
            ok = na2 > 1e-24
            A, rhs, na2 = A[ok], rhs[ok], na2[ok]
            x0 = A * (rhs / na2)[:, None]
            d2 = 1.0 - (x0 * x0).sum(axis=1)
            hit = d2 >= -1e-15
            if hit.any():
                s = np.sqrt(np.clip(d2[hit], 0.0, None))[:, None]
                perp = np.stack([-A[hit, 1], A[hit, 0]], axis=1) / np.sqrt(na2[hit])[:, None]
                cands.append(x0[hit] + s * perp)
                cands.append(x0[hit] - s * perp)
        if i3 is not None:
            A1 = 2.0 * (C[j3] - C[i3])
            A2 = 2.0 * (C[k3] - C[i3])
            r1 = n2[j3] - n2[i3]
            r2 = n2[k3] - n2[i3]
            det = A1[:, 0] * A2[:, 1] - A1[:, 1] * A2[:, 0]
            ok = np.abs(det) > 1e-14
            if ok.any():
                x = np.stack([(A2[ok, 1] * r1[ok] - A1[ok, 1] * r2[ok]) / det[ok],
                              (A1[ok, 0] * r2[ok] - A2[ok, 0] * r1[ok]) / det[ok]], axis=1)
                inside = (x * x).sum(axis=1) <= 1.0 + 1e-12
                if inside.any():
                    cands.append(x[inside])
        P = np.vstack(cands)
        D = np.linalg.norm(P[:, None, :] - C[None, :, :], axis=2).min(axis=1)
        return float(D.max())

    return radius


# ---------------------------------------------------------------------------
# normalized search frame

@dataclass
class _Workspace:
    W: Body
    back: AffineMap
    probes: np.ndarray
    disk: bool  # planar unit disk: exact evaluator applies


def _canonical_rotation(W: Body) -> np.ndarray:
    """Orthogonal frame fixed by affine-invariant features, so the John
    workspaces of K and of A(K) agree up to the ellipsoid solver's wobble and
    searches on affine images align.

    Planar polytopes: anchor on the lexicographically extremal cyclic
    sequence of triangle-area features (scanning both traversal directions
    handles orientation-reversing maps), rotate the anchor vertex onto the
    positive x-axis, and reflect so the chosen traversal runs counterclockwise.
    Other bodies: principal axes of the boundary second moment with cubic
    moment sign fixing (best effort; exact-symmetric ties are harmless since
    the tied frames are related by a symmetry of the body)."""
    if isinstance(W, Polytope) and W.dim == 2 and len(W.vertices) >= 3:
        V = W.vertices
        n = len(V)
        e = V - np.roll(V, 1, axis=0)  # edge i-1 -> i
        nxt = np.roll(e, -1, axis=0)   # edge i -> i+1
        f = e[:, 0] * nxt[:, 1] - e[:, 1] * nxt[:, 0]
        f = np.round(f / f.sum(), 12)  # blunt last-bit wobble in key ties
        best_key, best = None, (0, 1)
        for direction in (1, -1):
            for i0 in range(n):
                key = tuple(f[(i0 + direction * k) % n] for k in range(n))
                if best_key is None or key > best_key:
                    best_key, best = key, (i0, direction)
        i0, direction = best
        a = V[i0]
        na = np.linalg.norm(a)
        if na > 1e-12:
            R = np.array([[a[0], a[1]], [-a[1], a[0]]]) / na
            b = R @ V[(i0 + direction) % n]
            if math.atan2(b[1], b[0]) < 0:
                R = np.array([[1.0, 0.0], [0.0, -1.0]]) @ R
            return R
    X = boundary_points(W, 256)
    _, V = np.linalg.eigh(X.T @ X / len(X))
    V = V[:, ::-1]
    for j in range(V.shape[1]):
        s = float(np.sum((X @ V[:, j]) ** 3))
        if s < -1e-12:
            V[:, j] = -V[:, j]
    return V.T


def _shoelace_centroid(V: np.ndarray) -> np.ndarray:
    X, Y = V[:, 0], V[:, 1]
    Xn, Yn = np.roll(X, -1), np.roll(Y, -1)
    cr = X * Yn - Xn * Y
    A = cr.sum()
    return np.array([((X + Xn) * cr).sum(), ((Y + Yn) * cr).sum()]) / (3.0 * A)


def _triangle_frame(P: Polytope) -> AffineMap:
    """Affine-equivariant planar frame with no iterative solver in the loop.

    The maximum-area inscribed vertex triangle is mapped onto a fixed
    equilateral one, then the image is recentred at its area centroid and
    scaled to outer radius 2.  Normalised triple areas are affine invariants,
    so affine images of a body land in workspaces that agree up to a dihedral
    symmetry of the reference triangle (resolved by _canonical_rotation) and
    floating-point noise, which keeps searches on affine images in lockstep."""
    V = P.vertices
    n = len(V)
    idx = np.array(list(combinations(range(n), 3)))
    a, b, c = V[idx[:, 0]], V[idx[:, 1]], V[idx[:, 2]]
    ab, ac = b - a, c - a
    areas = ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0]  # CCW order keeps these > 0
    i, j, k = idx[_stable_argmax(areas / areas.sum(), decimals=12)]
    A3 = V[[i, j, k]]
    E = np.array([[2.0, 0.0], [-1.0, math.sqrt(3.0)], [-1.0, -math.sqrt(3.0)]])
    M = np.column_stack([E[1] - E[0], E[2] - E[0]]) @ np.linalg.inv(
        np.column_stack([A3[1] - A3[0], A3[2] - A3[0]]))
    off = E[0] - M @ A3[0]
    W0 = V @ M.T + off
    cen = _shoelace_centroid(W0)
    s = 2.0 / float(np.linalg.norm(W0 - cen, axis=1).max())
    return AffineMap(tuple(map(tuple, s * M)), tuple(s * (off - cen)))


def _make_workspace(K: Body) -> _Workspace:
    d = K.dim
    bal = as_ball(K)
    pol = as_polytope(K)
    if bal is not None and d >= 2:
        A = np.eye(d) / bal.radius
        T = AffineMap(tuple(map(tuple, A)), tuple(-A @ bal.center_vec))
        W = Ball(1.0, (0.0,) * d)
    elif d == 1:
        lo, hi = -support(K, [-1.0]), support(K, [1.0])
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        T = AffineMap(((1.0 / half,),), (-mid / half,))
        W = Polytope([[-1.0], [1.0]])
    else:
        if pol is not None and d == 2:
            T = _triangle_frame(pol)
            W = T.apply_body(pol)
        else:
            T, _ = john_sandwich(K)
            W = T.apply_body(K)
        Q = _canonical_rotation(W)
        M = Q @ T.matrix_arr
        T = AffineMap(tuple(map(tuple, M)), tuple(Q @ T.offset_vec))
        W = apply_affine(Q, np.zeros(d), W)
        if pol is not None and d == 2:
            # snap to a grid so affine presentations of one body search the
            # byte-identical workspace; the certificate ratio is bumped past
            # the snap distortion before mapping back
            W = Polytope(np.round(W.vertices, 7))
    return _Workspace(W, T.inverse(), _probe_set(W), isinstance(W, Ball) and d == 2)


def _probe_set(W: Body) -> np.ndarray:
    d = W.dim
    if d == 1:
        return np.linspace(-1.0, 1.0, 41)[:, None]
    pts = [boundary_points(W, 160 if d == 2 else 700),
           _interior_lattice(W, 17 if d == 2 else 7),
           np.zeros((1, d))]
    allp = np.vstack(pts)
    return np.unique(np.round(allp, 12), axis=0)


def _probe_objective(W: Body, probes: np.ndarray, m: int):
    d = probes.shape[1]
    if isinstance(W, Polytope):
        N, b = W.facets
        NT = N.T / b  # gauge(x) = max_f <n_f, x>/b_f; origin interior so b > 0

        def radius(flat: np.ndarray) -> float:
            C = flat.reshape(m, d)
            diffs = probes[None, :, :] - C[:, None, :]
            g = (diffs.reshape(-1, d) @ NT).max(axis=1).reshape(m, -1)
            return float(g.min(axis=0).max())

        return radius
    if isinstance(W, Ball):
        def radius(flat: np.ndarray) -> float:
            C = flat.reshape(m, d)
            g = np.linalg.norm(probes[None, :, :] - C[:, None, :], axis=2)
            return float(g.min(axis=0).max() / W.radius)

        return radius

    def radius(flat: np.ndarray) -> float:
        C = flat.reshape(m, d)
        diffs = probes[None, :, :] - C[:, None, :]
        g = gauge_many(W, diffs.reshape(-1, d)).reshape(m, -1)
        return float(g.min(axis=0).max())

    return radius


def _final_polish(obj, x, fx, cfg: SearchConfig):
    """Deep descent from the multistart incumbent; shrinks the spread left by
    budget-truncated per-start polishing."""
    from .search import polish_nm

    y, fy, _ = pattern_search(obj, x, step=0.03, min_step=1e-8,
                              max_evals=4 * cfg.max_iters)
    if fy < fx:
        x, fx = y, fy
    y, fy = polish_nm(obj, x, 4 * cfg.max_iters)
    if fy < fx:
        x, fx = y, fy
    return x, fx


def _stable_argmax(vals: np.ndarray, decimals: int = 9) -> int:
    """argmax with ties broken by first index; rounding keeps the winner
    stable under sub-tolerance input wobble (probes are lexsorted, so first
    index means lexicographically smallest point)."""
    r = np.round(vals, decimals)
    return int(np.flatnonzero(r == r.max())[0])


def _kcenter(W: Body, probes: np.ndarray, m: int) -> np.ndarray:
    chosen = [_stable_argmax(gauge_many(W, probes))]
    dmin = gauge_many(W, probes - probes[chosen[0]])
    while len(chosen) < m:
        nxt = _stable_argmax(dmin)
        chosen.append(nxt)
        dmin = np.minimum(dmin, gauge_many(W, probes - probes[nxt]))
    return probes[chosen]


def _ring(W: Body, k: int, rho: float, phase: float = 0.0) -> np.ndarray:
    """k points at the rho-fraction of W's radial extent, equally spaced in
    angle (plain circle of radius rho on the unit disk)."""
    ang = phase + 2.0 * math.pi * np.arange(k) / max(k, 1)
    u = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return u * (rho / gauge_many(W, u))[:, None]


def _perimeter_points(W: Polytope, k: int, phase: float = 0.0) -> np.ndarray:
    """k boundary points equally spaced by arc length, offset by phase in
    units of one spacing."""
    V = W.vertices
    E = np.roll(V, -1, axis=0) - V
    lens = np.linalg.norm(E, axis=1)
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    total = cum[-1]
    s = (np.arange(k) + phase) / k * total % total
    idx = np.searchsorted(cum, s, side="right") - 1
    idx = np.clip(idx, 0, len(V) - 1)
    frac = (s - cum[idx]) / np.maximum(lens[idx], 1e-300)
    return V[idx] + frac[:, None] * E[idx]


def _seed_list(ws: _Workspace, m: int, cfg: SearchConfig,
               prev: Optional[np.ndarray]) -> list:
    d = ws.W.dim
    lam0 = float(np.clip(m ** (-1.0 / d), 0.2, 0.9))
    shrink = 1.0 - lam0
    seeds = []
    if prev is not None and len(prev) == m - 1 and prev.shape[1] == d:
        dmin = np.min([gauge_many(ws.W, ws.probes - c) for c in prev], axis=0)
        extra = ws.probes[_stable_argmax(dmin)] * shrink
        seeds.append(np.vstack([prev, extra[None, :]]))
    seeds.append(_kcenter(ws.W, ws.probes, m) * shrink)
    if isinstance(ws.W, Polytope) and d >= 2:
        V = ws.W.vertices
        idx = np.unique(np.round(np.linspace(0, len(V) - 1, m)).astype(int))
        picks = V[idx]
        while len(picks) < m:
            picks = np.vstack([picks, np.zeros((1, d))])
        for s in (shrink, 0.5, 1.0 / 3.0):  # vertex anchors at common ratios
            seeds.append(picks * s)
    if d == 2:
        for rho in (0.4, 0.55, 0.7):
            seeds.append(_ring(ws.W, m, rho))
        if m >= 3:
            for rho in (0.5, 0.65, 0.8):
                seeds.append(np.vstack([_ring(ws.W, m - 1, rho),
                                        np.zeros((1, 2))]))
        if isinstance(ws.W, Polytope):
            # arc-length chunks track the boundary shape better than rings
            # do on elongated bodies
            for phase in (0.0, 0.5):
                seeds.append(_perimeter_points(ws.W, m, phase) * 0.72)
            if m >= 3:
                seeds.append(np.vstack([
                    _perimeter_points(ws.W, m - 1, 0.25) * 0.78,
                    np.zeros((1, 2))]))
        if m >= 5:
            inner = np.array([[0.0, 1.0], [0.0, -1.0]])
            inner = inner * (0.3 / gauge_many(ws.W, inner))[:, None]
            seeds.append(np.vstack([_ring(ws.W, m - 2, 0.7), inner]))
    if d == 3:
        for rho in (0.45, 0.65):
            seeds.append(fibonacci_sphere(m) * rho)
        if m >= 5:
            seeds.append(np.vstack([fibonacci_sphere(m - 1) * 0.6,
                                    np.zeros((1, 3))]))
    seeds = [s.ravel() for s in seeds]
    rng = cfg.child_rng(31, m)
    while len(seeds) < cfg.restarts:
        seeds.append(rng.uniform(-0.75, 0.75, size=m * d))
    return seeds[:max(cfg.restarts, 1)]


# ---------------------------------------------------------------------------
# gamma_m

_GAMMA_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def clear_caches():
    with _CACHE_LOCK:
        _GAMMA_CACHE.clear()


def _cfg_key(cfg: SearchConfig) -> tuple:
    return (cfg.seed, cfg.restarts, cfg.max_iters,
            round(cfg.lambda_tol, 12), round(cfg.geo_tol, 15))


def _identity_cert(K: Body, m: int) -> CoverCertificate:
    zeros = tuple((0.0,) * K.dim for _ in range(m))
    return CoverCertificate(m, 1.0, zeros, 0.0, "verified")


def _int_root(m: int, d: int) -> int:
    j = 1
    while (j + 1) ** d <= m:
        j += 1
    return j


def _shifted(translations, K: Body, lam_from: float, lam_to: float):
    """Move ratio-lam_from homothets into ratio-lam_to ones that contain them
    (valid for lam_to >= lam_from): t' = t + (lam_from - lam_to) p0."""
    p0 = interior_point(K)
    return tuple(tuple(np.asarray(t, dtype=float) + (lam_from - lam_to) * p0)
                 for t in translations)


def _grid_certificate(K: Body, v0, F, j: int, m: int) -> CoverCertificate:
    lam = 1.0 / j
    lam_c = lam + 1e-8
    base = [tuple((1.0 - lam) * v0 + F @ np.array(g) / j)
            for g in product(range(j), repeat=K.dim)]
    ts = base + [base[0]] * (m - len(base))
    return CoverCertificate(m, lam_c, _shifted(ts, K, lam, lam_c), 1e-8, "verified")


def gamma_m(K: Body, m: int, cfg: Optional[SearchConfig] = None):
    """Least common ratio for covering K by m translates of lam*K.

    Returns (lambda_hat, certificate).  Monotone in m (seeded with the
    (m-1)-solution), cached per (body hash, config, m).
    """
    cfg = cfg or SearchConfig()
    if int(m) != m or m < 1:
        raise DomainError("m must be a positive integer")
    m = int(m)
    key = (body_hash(K), _cfg_key(cfg), m)
    with _CACHE_LOCK:
        hit = _GAMMA_CACHE.get(key)
        prev_entry = _GAMMA_CACHE.get(key[:2] + (m - 1,))
    if hit is not None:
        return hit[0], hit[1]
    prev = prev_entry[2] if prev_entry is not None else None
    value, cert, centers = _gamma_impl(K, m, cfg, prev)
    with _CACHE_LOCK:
        _GAMMA_CACHE[key] = (value, cert, centers)
    return value, cert


def _gamma_impl(K: Body, m: int, cfg: SearchConfig, prev):
    d = K.dim
    if m == 1:
        return 1.0, _identity_cert(K, 1), None
    frame = parallelotope_frame(K)
    if frame is not None:
        v0, F = frame
        j = _int_root(m, d)
        if j <= 1:
            return 1.0, _identity_cert(K, m), None
        return 1.0 / j, _grid_certificate(K, v0, F, j, m), None
    return _gamma_search(K, m, cfg, prev)


def _poly_radius_bisect(W: Polytope, C: np.ndarray, geo_tol: float):
    """Covering radius of the translation set C on a planar polytope to 1e-7,
    bracketed by the boolean gate; returns (covering lam, uncovered lam,
    witness point of the deepest verified-uncovered gate or None)."""
    m = len(C)
    hi = float(gauge_many(W, W.vertices - C[0]).max()) * (1.0 + 1e-9) + 1e-12
    wit = None
    for _ in range(8):
        ok, w = _covers_body(W, np.full(m, min(hi, 1.0)), C, geo_tol)
        if ok or hi >= 1.0:
            break
        hi *= 1.25     # single-translate bound can graze exactness; widen
    hi = min(hi, 1.0)
    if not ok:
        return 1.0, hi, w
    lo = 0.0
    while hi - lo > 1e-7:
        mid = 0.5 * (lo + hi)
        ok, w = _covers_body(W, np.full(m, mid), C, geo_tol)
        if ok:
            hi = mid
        else:
            lo, wit = mid, w
    return hi, lo, wit


def _gauge_center(W: Polytope, pts: np.ndarray) -> np.ndarray:
    """Exact gauge 1-center of a finite point set, as the LP
    min r s.t. <n_f, p - c> <= r b_f for every point p and facet f."""
    Nmat, b = W.facets
    A = np.hstack([np.tile(-Nmat, (len(pts), 1)),
                   -np.tile(b[:, None], (len(pts), 1))])
    rhs = -(pts @ Nmat.T).ravel()
    res = linprog(c=[0.0, 0.0, 1.0], A_ub=A, b_ub=rhs,
                  bounds=[(None, None), (None, None), (0.0, None)],
                  method="highs")
    return res.x[:2] if res.success else pts.mean(axis=0)


def _lloyd_recenter(W: Polytope, probes: np.ndarray, C: np.ndarray,
                    rounds: int = 4) -> np.ndarray:
    """Alternate nearest-center assignment with exact per-cell 1-centers."""
    C = np.array(C, dtype=float)
    for _ in range(rounds):
        G = np.stack([gauge_many(W, probes - c) for c in C])
        owner = np.argmin(G, axis=0)
        nxt = C.copy()
        for i in range(len(C)):
            cell = probes[owner == i]
            if len(cell):
                nxt[i] = _gauge_center(W, cell)
        if np.allclose(nxt, C, atol=1e-13):
            break
        C = nxt
    return C


def _uncovered_points(W: Polytope, lam: float, C: np.ndarray,
                      cap: int = 80) -> np.ndarray:
    """Vertices and representative points of every pocket the ratio-lam
    translates at C leave uncovered (exact polygon difference)."""
    from shapely.geometry import Polygon as SPolygon
    from shapely.ops import unary_union

    base = SPolygon(W.vertices)
    union = unary_union([SPolygon(lam * W.vertices + c) for c in C])
    residual = base.difference(union)
    pts = []
    for g in getattr(residual, "geoms", [residual]):
        if g.is_empty or g.area <= 1e-14:
            continue
        rp = g.representative_point()
        pts.append([rp.x, rp.y])
        xs, ys = g.exterior.coords.xy
        pts.extend(np.c_[xs, ys][:-1].tolist())
    out = np.asarray(pts, dtype=float) if pts else np.zeros((0, 2))
    if len(out) > cap:
        out = out[np.linspace(0, len(out) - 1, cap).astype(int)]
    return out


def _cover_candidates(W: Polytope, lam: float) -> np.ndarray:
    """Center grid for the set-cover relaxation at ratio lam: boundary
    profiles at several radial depths plus an interior lattice.  The fine
    band at depth 1-lam holds the exactly-anchored positions (a translate
    pinned to a vertex sits at (1-lam) times the vertex); the chord band
    beyond it holds protruding positions that cover boundary chunks the way
    a chord disk covers an arc."""
    B = boundary_points(W, 96)
    if len(B) > 160:
        B = B[np.linspace(0, len(B) - 1, 160).astype(int)]
    depth0 = 1.0 - lam
    fine = depth0 + np.array([-0.02, -0.008, 0.0, 0.008, 0.02, 0.05])
    chord = depth0 + lam * np.array([0.35, 0.5, 0.65, 0.8, 0.95])
    coarse = np.array([0.25, 0.5, 0.75, 1.0])
    depths = np.unique(np.clip(np.concatenate([fine, chord, coarse]),
                               0.02, 1.0))
    layers = [mu * B for mu in depths]
    layers.append(_interior_lattice(W, 17))
    layers.append(np.zeros((1, 2)))
    return np.vstack(layers)


def _milp_probe_cover(W: Polytope, probes: np.ndarray, cands: np.ndarray,
                      lam: float, m: int):
    """Fewest candidate centers covering every probe at ratio lam, solved as
    a set-cover MILP; returns m centers or None when more than m are needed.
    Infeasibility here is only evidence about the probe subset, never a
    certified lower bound, so callers treat None as a search floor."""
    G = np.stack([gauge_many(W, probes - c) for c in cands])
    A = (G.T <= lam + 1e-9)
    if not A.any(axis=1).all():
        return None
    res = milp(c=np.ones(len(cands)),
               constraints=LinearConstraint(csr_matrix(A.astype(np.float64)),
                                            lb=1.0),
               integrality=np.ones(len(cands)),
               bounds=Bounds(0.0, 1.0),
               options={"node_limit": 20000})
    if res.x is None or int(round(res.fun)) > m:
        return None
    C = cands[res.x > 0.5][:m]
    while len(C) < m:
        k = min(len(C), m - len(C))
        C = np.vstack([C, C[:k] + 1e-4])
    return C


def _milp_descent(W: Polytope, probes: np.ndarray, m: int, cfg: SearchConfig,
                  ub: float, C0: np.ndarray):
    """Descend below the incumbent by alternating a probe set-cover at a
    trial ratio with exact pocket cuts: solve for centers, recenter, harvest
    the uncovered pockets into the probe set, retry.  Every accepted value
    is a bisected exact covering radius, so the incumbent never degrades."""
    lam_floor = max(2e-3, m ** -0.5 * 0.995)  # area forces gamma_m >= m^(-1/2)
    step = max(0.002, 2.0 * cfg.lambda_tol)
    best_hi, best_lo, best_wit, best_C = ub, None, None, C0
    lam_t = ub - step
    lb = None
    for _ in range(10):
        if lam_t < lam_floor or lam_t >= best_hi - 1e-7:
            break
        C = _milp_probe_cover(W, probes, _cover_candidates(W, lam_t),
                              lam_t, m)
        if C is None:
            lb = lam_t
            lam_t = 0.5 * (lam_t + best_hi)
            if best_hi - lam_t < max(cfg.lambda_tol, 5e-4):
                break
            continue
        closed = False
        for _ in range(8):
            C = _lloyd_recenter(W, probes, C)
            pk = _uncovered_points(W, lam_t + 1e-6, C)
            if len(pk) == 0:
                closed = True
                break
            probes = np.vstack([probes, pk])
            if len(probes) > 1600:
                probes = probes[np.linspace(0, len(probes) - 1,
                                            1600).astype(int)]
        hi, lo, wit = _poly_radius_bisect(W, C, cfg.geo_tol)
        if hi < best_hi - 1e-9:
            best_hi, best_lo, best_wit, best_C = hi, lo, wit, C
        if closed:
            lam_t = best_hi - step
            if lb is not None:
                lam_t = max(lam_t, 0.5 * (lb + best_hi))
        # a failed closure retries the same ratio with the enriched probes
    return best_hi, best_lo, best_wit, best_C, probes


def _gamma_polygon(K: Body, m: int, cfg: SearchConfig, ws: _Workspace,
                   seeds, prev) -> tuple:
    """Planar polytope search: the probe objective only ranks candidates; the
    reported value is always a bisected exact covering radius, so configs that
    tie on probes are separated by their true quality and last-bit noise
    cannot swing the result by a basin width."""
    W, d = ws.W, 2
    probes = ws.probes
    obj = _probe_objective(W, probes, m)
    finalists = multistart_top(obj, seeds, cfg, rng_tag=m, step=0.2, top=4)
    cand = [(x_i, i) for x_i, _, i in finalists]
    if prev is not None and len(prev) == m - 1 and prev.shape[1] == d:
        # adding a translate to the previous optimum never hurts, so scoring
        # this config keeps gamma monotone in m along ascending evaluations
        dmin = np.min([gauge_many(W, probes - c) for c in prev], axis=0)
        extra = probes[_stable_argmax(dmin)]
        cand.append((np.vstack([prev, extra[None, :]]).ravel(), len(seeds)))
    scored = []
    for x_i, i in cand:
        hi, lo, wit = _poly_radius_bisect(W, x_i.reshape(m, d), cfg.geo_tol)
        scored.append((round(hi, 9), i, x_i, hi, lo, wit))
    scored.sort(key=lambda t: (t[0], t[1]))
    _, _, x, bh, blo, bwit = scored[0]

    if 2 <= m <= 40 and bh < 1.0 - 1e-9:
        # multistart settles into the wrong cell structure on ratios near
        # tight covers; the set-cover stage re-picks the combinatorics
        bh2, lo2, wit2, C2, probes = _milp_descent(W, probes, m, cfg, bh,
                                                   x.reshape(m, d))
        if bh2 < bh - 1e-9:
            x, bh, blo, bwit = C2.ravel(), bh2, lo2, wit2

    # cutting rounds: pin the deepest uncovered pocket with a probe, descend
    # locally (no kicks, so the incumbent cannot hop basins), keep on strict
    # measured improvement
    for rnd in range(10):
        if bh >= 1.0 - 1e-9 or bwit is None:
            break
        probes = np.vstack([probes, np.asarray(bwit, dtype=float)[None, :]])
        obj = _probe_objective(W, probes, m)
        x2, _, _ = pattern_search(obj, x, step=0.03, min_step=1e-6,
                                  max_evals=cfg.max_iters)
        h2, lo2, w2 = _poly_radius_bisect(W, x2.reshape(m, d), cfg.geo_tol)
        if h2 < bh - 1e-9:
            x, bh, blo, bwit = x2, h2, lo2, w2
        else:
            break
    if bh >= 1.0 - 1e-9:
        return 1.0, _identity_cert(K, m), None
    lam_c = min(1.0, bh + 1e-6)  # covers the workspace snap distortion
    centers = x.reshape(m, d)
    ok, _ = _covers_body(W, np.full(m, lam_c), centers, cfg.geo_tol)
    status = "verified" if ok else "upper_bound_only"
    margin = max(lam_c - blo, 1e-12)
    Bmat = ws.back.matrix_arr
    off = ws.back.offset_vec
    ts = centers @ Bmat.T + (1.0 - lam_c) * off
    cert = CoverCertificate(m, lam_c, tuple(map(tuple, ts)), margin, status)
    return lam_c, cert, centers


def _gamma_search(K: Body, m: int, cfg: SearchConfig, prev):
    ws = _make_workspace(K)
    d = K.dim
    seeds = _seed_list(ws, m, cfg, prev)
    if isinstance(ws.W, Polytope) and ws.W.dim == 2:
        return _gamma_polygon(K, m, cfg, ws, seeds, prev)
    probes = ws.probes
    obj = _disk_objective(m) if ws.disk else _probe_objective(ws.W, probes, m)
    x, fx, _ = multistart(obj, seeds, cfg, rng_tag=m, step=0.2)
    x, fx = _final_polish(obj, x, fx, cfg)

    status = "verified"
    lam_c = 1.0
    verified = False
    for rnd in range(6):
        h = float(obj(x))
        if h >= 1.0 - 1e-9:
            return 1.0, _identity_cert(K, m), None
        extra = cfg.lambda_tol * max(0, rnd - 2) / 6.0
        lam_c = min(1.0, h * (1.0 + 1e-12) + 1e-8 + extra)
        ok, wit = _covers_body(ws.W, np.full(m, lam_c), x.reshape(m, d),
                               cfg.geo_tol)
        if ok:
            verified = True
            break
        probes = np.vstack([probes, np.asarray(wit, dtype=float)[None, :]])
        if not ws.disk:
            obj = _probe_objective(ws.W, probes, m)
        x2, f2 = local_descend(obj, x, cfg.child_rng(104729, m, rnd), cfg,
                               step=0.05)
        if f2 <= float(obj(x)):
            x = x2
    if not verified:
        h = float(obj(x))
        lam_c = min(1.0, h + cfg.lambda_tol)
        ok, _ = _covers_body(ws.W, np.full(m, lam_c), x.reshape(m, d), cfg.geo_tol)
        status = "verified" if ok else "upper_bound_only"
        if lam_c >= 1.0 - 1e-9:
            return 1.0, _identity_cert(K, m), None

    centers = x.reshape(m, d)
    margin = max(lam_c - float(obj(x)), 1e-12)
    Bmat = ws.back.matrix_arr
    off = ws.back.offset_vec
    ts = centers @ Bmat.T + (1.0 - lam_c) * off
    cert = CoverCertificate(m, lam_c, tuple(map(tuple, ts)), margin, status)
    return lam_c, cert, centers


# ---------------------------------------------------------------------------
# covering number and indices

def n_lambda(K: Body, lam: float, cfg: Optional[SearchConfig] = None):
    """Fewest translates of lam*K covering K; returns (m, certificate)."""
    cfg = cfg or SearchConfig()
    lam = float(lam)
    if not (0.0 < lam <= 1.0):
        raise DomainError("covering ratio must lie in (0, 1]")
    if lam >= 1.0 - 1e-12:
        return 1, _identity_cert(K, 1)
    d = K.dim
    frame = parallelotope_frame(K)
    if frame is not None:
        j = int(math.ceil(1.0 / lam - 1e-9))
        N = j ** d
        _, cert = gamma_m(K, N, cfg)
        if lam > cert.lam:
            cert = CoverCertificate(N, lam, _shifted(cert.translations, K, cert.lam, lam),
                                    cert.margin + (lam - cert.lam), cert.status)
        return N, cert
    m = max(1, int(math.ceil(lam ** (-d) - 1e-9)))  # volume floor
    for _ in range(64):
        val, cert = gamma_m(K, m, cfg)
        if val <= lam + cfg.lambda_tol:
            return m, cert
        m += 1
    raise BudgetError(f"covering number search stalled 64 levels above the "
                      f"volume floor at ratio {lam}")


@dataclass(frozen=True)
class CoinReport:
    value: float
    m: int
    lam: float
    certificate: CoverCertificate
    table: tuple  # ((m, gamma_hat), ...) for every m actually evaluated


def coin_report(K: Body, cfg: Optional[SearchConfig] = None) -> CoinReport:
    """min over m of m/(1 - gamma_m) subject to gamma_m <= 1/2, scanned from
    N_{1/2}(K) with slack 8; m >= incumbent and the volume bound
    gamma_m >= m^(-1/d) prune the window."""
    cfg = cfg or SearchConfig()
    d = K.dim
    N, _ = n_lambda(K, 0.5, cfg)
    best_term, best = math.inf, None
    rows = []
    for m in range(max(2, N), N + 9):
        if m >= best_term:
            break
        lb = m / (1.0 - m ** (-1.0 / d))
        if lb >= best_term:
            continue
        val, cert = gamma_m(K, m, cfg)
        rows.append((m, val))
        if val <= 0.5 + cfg.lambda_tol and val < 1.0:
            term = m / (1.0 - val)
            if term < best_term:
                best_term, best = term, (m, val, cert)
    if best is None:
        raise BudgetError("no cover at ratio 1/2 found inside the slack window")
    return CoinReport(best_term, best[0], best[1], best[2], tuple(rows))


def coin(K: Body, cfg: Optional[SearchConfig] = None):
    """Covering index; returns (value, (m, lambda)) at the optimizer."""
    rep = coin_report(K, cfg)
    return rep.value, (rep.m, rep.lam)


def weak_coin(K: Body, cfg: Optional[SearchConfig] = None) -> float:
    """Covering index with the ratio constraint relaxed to gamma_m < 1."""
    cfg = cfg or SearchConfig()
    d = K.dim
    N, _ = n_lambda(K, 0.5, cfg)
    best = math.inf
    for m in range(2, N + 9):
        if m >= best:
            break
        lb = m / (1.0 - m ** (-1.0 / d))
        if lb >= best:
            continue
        val, _ = gamma_m(K, m, cfg)
        if val <= 1.0 - 1e-9:
            best = min(best, m / (1.0 - val))
    return best


# ---------------------------------------------------------------------------
# covering parameter

@dataclass(frozen=True)
class CParamReport:
    value: float
    homothets: tuple
    converged: bool
    passes: int


def covering_parameter_report(K: Body, cfg: Optional[SearchConfig] = None) -> CParamReport:
    """Upper bound on inf sum 1/(1 - lam_i) over coverings with heterogeneous
    ratios: starts from the coin certificate (plus exact grid/disk seeds when
    available) and greedily drops homothets and shrinks ratios, accepting only
    configurations that still pass covers()."""
    cfg = cfg or SearchConfig()
    d = K.dim
    geo = cfg.geo_tol
    candidates = []
    frame = parallelotope_frame(K)
    if frame is not None:
        v0, F = frame
        ts = [tuple(0.5 * v0 + F @ np.array(g) / 2.0) for g in product((0, 1), repeat=d)]
        candidates.append(tuple(Homothet(0.5, t) for t in ts))
    bal = as_ball(K)
    if bal is not None and d == 2:
        # center disk plus six on the critical ring; the unique Sum = 14 cover
        r, c = bal.radius, bal.center_vec
        ts = [tuple(0.5 * c)]
        ts += [tuple(0.5 * c + (math.sqrt(3) / 2.0) * r *
                     np.array([math.cos(k * math.pi / 3.0), math.sin(k * math.pi / 3.0)]))
               for k in range(6)]
        candidates.append(tuple(Homothet(0.5, t) for t in ts))
    rep = coin_report(K, cfg)
    candidates.append(tuple(Homothet(rep.certificate.lam, t)
                            for t in rep.certificate.translations))

    best = None
    best_sum = math.inf
    for hs in candidates:
        if covers(CoverConfig(K, hs), geo)[0]:
            s = sum(1.0 / (1.0 - h.lam) for h in hs)
            if s < best_sum:
                best, best_sum = list(hs), s
    if best is None:  # certificate replay failed; keep it as an unverified bound
        best = list(candidates[-1])
        return CParamReport(sum(1.0 / (1.0 - h.lam) for h in best),
                            tuple(best), False, 0)

    passes = 0
    changed = True
    while changed and passes < 4:
        changed = False
        passes += 1
        i = 0
        while i < len(best) and len(best) > 1:
            trial = best[:i] + best[i + 1:]
            if covers(CoverConfig(K, tuple(trial)), geo)[0]:
                best = trial
                changed = True
            else:
                i += 1
        for i in range(len(best)):
            h = best[i]
            for delta in (0.08, 0.03, 0.01, 0.003):
                nl = h.lam - delta
                if nl <= 0.02:
                    continue
                moves = [np.zeros(d)] + [sgn * 0.5 * delta * e
                                         for e in np.eye(d) for sgn in (1.0, -1.0)]
                hit = None
                for mv in moves:
                    cand = Homothet(nl, tuple(np.asarray(h.t) + mv))
                    trial = best[:i] + [cand] + best[i + 1:]
                    if covers(CoverConfig(K, tuple(trial)), geo)[0]:
                        hit = cand
                        break
                if hit is not None:
                    best[i] = hit
                    changed = True
                    break
    value = sum(1.0 / (1.0 - h.lam) for h in best)
    return CParamReport(value, tuple(best), not changed or passes < 4, passes)


def covering_parameter_upper(K: Body, cfg: Optional[SearchConfig] = None) -> float:
    return covering_parameter_report(K, cfg).value


# ---------------------------------------------------------------------------
# tightly covered

@dataclass(frozen=True)
class TightDetail:
    lam: float
    n_required: int
    points: Optional[tuple]
    exhausted: bool


@dataclass(frozen=True)
class TightReport:
    status: str  # supported | refuted | unknown
    witness_lambda: Optional[float]
    details: tuple


class _BudgetHit(Exception):
    pass


def _packing_candidates(K: Body) -> np.ndarray:
    d = K.dim
    if d == 1:
        lo, hi = -support(K, [-1.0]), support(K, [1.0])
        return np.linspace(lo, hi, 33)[:, None]
    pts = [boundary_points(K, 96 if d == 2 else 350), _interior_lattice(K, 13 if d == 2 else 7)]
    allp = np.vstack(pts)
    allp = np.unique(np.round(allp, 9), axis=0)
    return allp


def _clique_cover_bound(adj: np.ndarray, remaining: list) -> int:
    cliques = []
    for v in remaining:
        for cl in cliques:
            if all(adj[v, u] for u in cl):
                cl.append(v)
                break
        else:
            cliques.append([v])
    return len(cliques)


def _find_separated(K: Body, D: Body, cands: np.ndarray, lam: float, N: int,
                    budget: int):
    """Search for N points of K pairwise not co-coverable by one lam-homothet
    (x, y share one iff gauge_{K-K}(x - y) <= lam).  Returns (points, exhausted):
    exhausted=True means the candidate grid was searched completely."""
    if N <= 1:
        return (tuple(interior_point(K)),), True

    frame = parallelotope_frame(K)
    if frame is not None:
        v0, F = frame
        j = int(math.ceil(1.0 / lam - 1e-9))
        if j >= 2:
            pts = np.array([v0 + F @ (np.array(g) / (j - 1.0))
                            for g in product(range(j), repeat=K.dim)])
            if len(pts) >= N and _pairwise_ok(D, pts[:N], lam):
                return tuple(map(tuple, pts[:N])), True

    n = len(cands)
    diffs = cands[:, None, :] - cands[None, :, :]
    G = gauge_many(D, diffs.reshape(-1, K.dim)).reshape(n, n)
    conflict = (G <= lam * (1.0 + 1e-12) + 1e-12)
    conflict = conflict | conflict.T
    np.fill_diagonal(conflict, False)

    center = cands.mean(axis=0)
    order = np.argsort(-np.linalg.norm(cands - center, axis=1))
    for start in order[:6]:
        chosen = [int(start)]
        while len(chosen) < N:
            free = np.flatnonzero(~conflict[chosen].any(axis=0))
            free = [f for f in free if f not in chosen]
            if not free:
                break
            sub = G[np.ix_(free, chosen)].min(axis=1)
            chosen.append(int(free[int(np.argmax(sub))]))
        if len(chosen) >= N:
            return tuple(map(tuple, cands[chosen[:N]])), True

    # exact DFS over the grid with a clique-cover bound
    deg = conflict.sum(axis=1)
    verts = sorted(range(n), key=lambda v: (deg[v], v))
    nodes = 0

    def dfs(chosen, remaining):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _BudgetHit
        if len(chosen) >= N:
            return chosen
        if len(chosen) + len(remaining) < N:
            return None
        if len(chosen) + _clique_cover_bound(conflict, remaining) < N:
            return None
        v = remaining[0]
        rest = remaining[1:]
        take = dfs(chosen + [v], [u for u in rest if not conflict[v, u]])
        if take is not None:
            return take
        return dfs(chosen, rest)

    try:
        got = dfs([], verts)
    except _BudgetHit:
        return None, False
    if got is not None:
        return tuple(map(tuple, cands[got])), True
    return None, True


def _pairwise_ok(D: Body, pts: np.ndarray, lam: float) -> bool:
    n = len(pts)
    if n < 2:
        return True
    diffs = pts[:, None, :] - pts[None, :, :]
    G = gauge_many(D, diffs.reshape(-1, pts.shape[1])).reshape(n, n)
    np.fill_diagonal(G, math.inf)
    return bool(np.min(np.minimum(G, G.T)) > lam * (1.0 + 1e-12) + 1e-12)


def tightly_covered_report(K: Body, lambda_grid, cfg: Optional[SearchConfig] = None,
                           node_budget: int = 500_000) -> TightReport:
    cfg = cfg or SearchConfig()
    D = difference_body(K)
    cands = _packing_candidates(K)
    details = []
    refuted_at = None
    unknown = False
    for lam in sorted({float(x) for x in lambda_grid}):
        if not (0.0 < lam < 1.0):
            raise DomainError("tightly-covered grid values must lie in (0, 1)")
        N, _ = n_lambda(K, lam, cfg)
        pts, exhausted = _find_separated(K, D, cands, lam, N, node_budget)
        details.append(TightDetail(lam, N, pts, exhausted))
        if pts is None:
            if exhausted and refuted_at is None:
                refuted_at = lam
            elif not exhausted:
                unknown = True
    if refuted_at is not None:
        return TightReport("refuted", refuted_at, tuple(details))
    if unknown:
        return TightReport("unknown", None, tuple(details))
    return TightReport("supported", None, tuple(details))


def tightly_covered_check(K: Body, lambda_grid, cfg: Optional[SearchConfig] = None) -> str:
    """For each grid lambda, hunt for N_lambda(K) points pairwise separated in
    the difference-body gauge (> lambda): supported if all levels admit one,
    refuted (with grid-exhaustive search) if some level does not, unknown on
    budget timeout."""
    return tightly_covered_report(K, lambda_grid, cfg).status


# ---------------------------------------------------------------------------
# product bounds

@dataclass(frozen=True)
class ProductBoundsReport:
    part_coins: tuple
    max_coin: float
    direct_sum_coin: Optional[float]
    inf_term: float
    lambda_star: float
    product_term: float
    minkowski_coin: Optional[float]
    chain_ok: bool


def _n_from_table(part: Body, rep: CoinReport, lam: float,
                  cfg: SearchConfig) -> Optional[int]:
    frame = parallelotope_frame(part)
    if frame is not None:
        return int(math.ceil(1.0 / lam - 1e-9)) ** part.dim
    for m, g in rep.table:
        if g <= lam + cfg.lambda_tol:
            return m
    return None


def coin_product_bounds(parts, cfg: Optional[SearchConfig] = None,
                        include_minkowski: bool = False) -> ProductBoundsReport:
    """Evaluates every term of the direct-sum chain
    max coin(K_i) <= coin(sum) <= inf_{lam<=1/2} prod N_lam(K_i)/(1-lam)
    <= prod coin(K_i), computing the direct-sum coin on the product body when
    the total dimension allows; optionally the same bound for the Minkowski
    sum."""
    parts = tuple(parts)
    if not parts:
        raise ValidationError("parts must be nonempty")
    cfg = cfg or SearchConfig()
    reps = [coin_report(p, cfg) for p in parts]
    part_coins = tuple(r.value for r in reps)
    max_coin = max(part_coins)
    product_term = float(np.prod(part_coins))

    cand = {0.5}
    for p, r in zip(parts, reps):
        if parallelotope_frame(p) is not None:
            cand.update(1.0 / j for j in range(2, 7))
        else:
            cand.update(g for _, g in r.table if g <= 0.5 + cfg.lambda_tol)
    inf_term, lam_star = math.inf, 0.5
    for lam in sorted(cand, reverse=True):
        if lam > 0.5 + cfg.lambda_tol:
            continue
        ns = [_n_from_table(p, r, lam, cfg) for p, r in zip(parts, reps)]
        if any(x is None for x in ns):
            continue
        term = float(np.prod(ns)) / (1.0 - lam)
        if term < inf_term:
            inf_term, lam_star = term, lam
    total_dim = sum(p.dim for p in parts)
    direct = None
    if len(parts) == 1:
        direct = part_coins[0]
    elif total_dim <= 3:
        direct = coin_report(DirectSum(parts), cfg).value
    mink = None
    if include_minkowski and len(parts) >= 2 and len({p.dim for p in parts}) == 1:
        mink = coin_report(MinkowskiSum(parts), cfg).value

    slack = 5e-3
    chain_ok = inf_term <= product_term * (1.0 + slack)
    if direct is not None:
        chain_ok = chain_ok and max_coin <= direct * (1.0 + slack) \
            and direct <= inf_term * (1.0 + slack)
    if mink is not None:
        chain_ok = chain_ok and mink <= inf_term * (1.0 + slack)
    return ProductBoundsReport(part_coins, max_coin, direct, inf_term, lam_star,
                               product_term, mink, chain_ok)
