"""Independent oracles used to freeze expected values.

Everything here is deliberately written against first principles (closed
forms, brute-force grids, exhaustive set cover over deduplicated masks)
rather than through the package's own solvers, so a test comparing the two
routes actually compares two derivations.
"""

import math
from itertools import combinations

import numpy as np


# ---------------------------------------------------------------------------
# segment / interval covering

def interval_cover_count(lam: float) -> int:
    """Fewest subintervals of relative length lam covering [0, 1]."""
    return int(math.ceil(1.0 / lam - 1e-12))


def segment_gamma(m: int) -> float:
    """m equal subintervals tile [0, 1], and fewer length is impossible."""
    return 1.0 / m


def segment_coin() -> float:
    best = math.inf
    for m in range(2, 40):
        lam = segment_gamma(m)
        if lam <= 0.5:
            best = min(best, m / (1.0 - lam))
    return best


# ---------------------------------------------------------------------------
# disk covering

def disk_gamma3() -> float:
    """Three congruent disks covering the unit disk: each must cover a
    120-degree boundary arc, whose chord already needs radius sin(60)."""
    return math.sqrt(3.0) / 2.0


def disk_gamma4() -> float:
    """Four disks: each covers a quarter arc, chord radius sin(45)."""
    return math.sqrt(2.0) / 2.0


def disk_cover_feasible(m: int, lam: float, n_ang: int = 720,
                        n_rad: int = 120) -> bool:
    """Sampled feasibility of the standard one-center-plus-ring cover of the
    unit disk by m disks of radius lam (ring of m-1 chord disks plus a
    central disk).  A True answer is a genuine cover up to grid density."""
    k = m - 1
    ring_r = math.cos(math.pi / k)
    ang = 2.0 * math.pi * np.arange(k) / k
    centers = np.vstack([np.stack([ring_r * np.cos(ang),
                                   ring_r * np.sin(ang)], axis=1),
                         [[0.0, 0.0]]])
    th = 2.0 * math.pi * np.arange(n_ang) / n_ang
    rr = np.linspace(0.0, 1.0, n_rad)
    pts = np.concatenate([np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
                          for r in rr])
    d2 = ((pts[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return bool(np.sqrt(d2.min(axis=1)).max() <= lam + 1e-9)


# ---------------------------------------------------------------------------
# polygon illumination / X-ray set-cover oracles

def _edge_normals(V: np.ndarray) -> np.ndarray:
    E = np.roll(V, -1, axis=0) - V
    N = np.stack([E[:, 1], -E[:, 0]], axis=1)
    return N / np.linalg.norm(N, axis=1, keepdims=True)


def _grid_dirs(n: int) -> np.ndarray:
    a = 2.0 * math.pi * np.arange(n) / n
    return np.stack([np.cos(a), np.sin(a)], axis=1)


def _illum_masks(V: np.ndarray, dirs: np.ndarray):
    """Bitmask per direction over boundary features (edges then vertices).

    A direction u illuminates an edge-interior point iff u . n < 0 for the
    edge normal n, and a vertex iff it does so for both incident edges.
    """
    N = _edge_normals(V)
    k = len(V)
    masks = []
    for u in dirs:
        dots = N @ u
        bit = 0
        for e in range(k):
            if dots[e] < -1e-12:
                bit |= 1 << e
        for v in range(k):
            if dots[v - 1] < -1e-12 and dots[v] < -1e-12:
                bit |= 1 << (k + v)
        masks.append(bit)
    return masks, (1 << (2 * k)) - 1


def _min_cover(masks, full, cap=6):
    uniq = sorted(set(masks), reverse=True)
    for size in range(1, cap + 1):
        for combo in combinations(uniq, size):
            acc = 0
            for c in combo:
                acc |= c
            if acc == full:
                return size
    return None


def illumination_oracle(V: np.ndarray, n_dirs: int = 360) -> int:
    """Exact minimum over an n_dirs angular grid of directions."""
    masks, full = _illum_masks(np.asarray(V, dtype=float), _grid_dirs(n_dirs))
    got = _min_cover(masks, full)
    if got is None:
        raise RuntimeError("oracle cap exceeded")
    return got


def _xray_masks(V: np.ndarray, dirs: np.ndarray):
    """X-ray masks: the line through a boundary point in direction u must
    meet the interior.  Edge points need u not parallel to the edge; a
    vertex needs u or -u inside its interior cone."""
    N = _edge_normals(V)
    k = len(V)
    masks = []
    for u in dirs:
        dots = N @ u
        bit = 0
        for e in range(k):
            if abs(dots[e]) > 1e-12:
                bit |= 1 << e
        for v in range(k):
            into = dots[v - 1] < -1e-12 and dots[v] < -1e-12
            outof = dots[v - 1] > 1e-12 and dots[v] > 1e-12
            if into or outof:
                bit |= 1 << (k + v)
        masks.append(bit)
    return masks, (1 << (2 * k)) - 1


def xray_oracle(V: np.ndarray, n_dirs: int = 180) -> int:
    """Exact minimum over an angular grid of projective directions."""
    a = math.pi * np.arange(n_dirs) / n_dirs
    dirs = np.stack([np.cos(a), np.sin(a)], axis=1)
    masks, full = _xray_masks(np.asarray(V, dtype=float), dirs)
    got = _min_cover(masks, full)
    if got is None:
        raise RuntimeError("oracle cap exceeded")
    return got


# ---------------------------------------------------------------------------
# point-source illumination ray trace

def illuminates_point_oracle(V: np.ndarray, p: np.ndarray, b: np.ndarray,
                             eps: float = 1e-7) -> bool:
    """p illuminates boundary point b iff the ray from p through b enters
    the interior just past b (strict polygon membership test)."""
    from shapely.geometry import Point, Polygon as SPolygon

    u = np.asarray(b, dtype=float) - np.asarray(p, dtype=float)
    nu = np.linalg.norm(u)
    if nu <= 0.0:
        return False
    q = np.asarray(b, dtype=float) + (eps / nu) * u
    poly = SPolygon(np.asarray(V, dtype=float))
    return bool(poly.buffer(-eps / 4.0).contains(Point(q)))


# ---------------------------------------------------------------------------
# miscellaneous closed forms

def triangle_difference_hexagon(V: np.ndarray) -> np.ndarray:
    """Vertices of T + (-T), the difference body of a triangle: the six
    pairwise differences of distinct vertices, in hull order."""
    V = np.asarray(V, dtype=float)
    diffs = np.array([V[i] - V[j] for i in range(3) for j in range(3)
                      if i != j])
    ang = np.arctan2(diffs[:, 1], diffs[:, 0])
    return diffs[np.argsort(ang)]


def square_disk_bm() -> float:
    """Rotating the square 45 degrees sandwiches the disk between r and
    r*sqrt(2); no affine image does better by symmetry of the extreme
    points, so the distance is exactly sqrt(2)."""
    return math.sqrt(2.0)


def hexagon_ill_lower() -> float:
    """Sum of gauge norms of any source set illuminating a symmetric
    hexagon is at least 6 (one tight source per edge pair)."""
    return 6.0


def net_bound_log10(d: int, epsilon: float, alpha: float = 1.0) -> float:
    """Log10 of floor(7d/ln eps) ** (alpha 14^d d^(2d+3) (ln eps)^-d)."""
    ln_eps = math.log(epsilon)
    base = max(1, math.floor(7 * d / ln_eps))
    exponent = alpha * (14.0 ** d) * (d ** (2 * d + 3)) / (ln_eps ** d)
    return exponent * math.log10(base)


def cap_angular_cover_ok(centers: np.ndarray, cap_angle: float,
                         n_test: int = 4000) -> bool:
    """Every direction on the sphere lies within cap_angle of a center."""
    i = np.arange(n_test)
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    z = 1.0 - 2.0 * (i + 0.5) / n_test
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    pts = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    cos = pts @ np.asarray(centers, dtype=float).T
    worst = np.arccos(np.clip(cos.max(axis=1), -1.0, 1.0)).max()
    return bool(worst <= cap_angle + 1e-6)
