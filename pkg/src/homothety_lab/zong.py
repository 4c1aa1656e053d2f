"""Net construction and covering audits over families of normalized bodies.

Pipeline: put a body in John position, cover the sphere of directions with
caps, read off the farthest body point along each cap center, quantize those
radii toward the origin, and take the convex hull.  Desk-scale nets of such
polygons are enumerated deterministically; an audit computes gamma_m for every
element and compares the worst value against a candidate constant.

The radial quantization lives on [1, d] because John position sandwiches the
body between the unit ball and d times it; rounding toward the origin keeps
the element inside the source body.  An element's inscribed radius is only
cos(angular cap radius), not 1, so the verified inner containment is the
correspondingly shrunk ball.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .bodies import Body, DomainError, Polytope, ValidationError, as_polytope
from .covering import BudgetError, CoverCertificate, gamma_m
from .geometry import fibonacci_sphere, john_sandwich, support_many
from .search import SearchConfig
from .serialization import body_hash, canonical_json, jsonable

ENUMERATION_BUDGET = 2_000_000


# ---------------------------------------------------------------------------
# spherical cap covers


@dataclass(frozen=True)
class CapCover:
    dimension: int
    directions: tuple
    angular_radius: float

    def __post_init__(self):
        dirs = tuple(tuple(float(x) for x in u) for u in self.directions)
        if any(len(u) != self.dimension for u in dirs):
            raise ValidationError("cap directions must match the dimension")
        object.__setattr__(self, "directions", dirs)
        if not 0.0 < self.angular_radius < np.pi / 2:
            raise ValidationError("cap radius must lie in (0, pi/2)")


def _covering_radius(D: np.ndarray, probes: np.ndarray) -> float:
    """max over probes of the angular distance to the nearest direction."""
    cosines = np.clip(probes @ D.T, -1.0, 1.0).max(axis=1)
    return float(np.arccos(cosines.min()))


def cap_cover(d: int, m: int) -> CapCover:
    """Covering of the direction sphere by m equal spherical caps.

    d = 2: equally spaced directions, radius pi/m (exact).  d = 3: Fibonacci
    lattice with the radius measured on a 1e5-point probe grid, bumped 2% and
    re-verified on a finer grid.
    """
    if d not in (2, 3):
        raise DomainError("cap_cover supports d in {2, 3}")
    if m < d + 1:
        raise DomainError("need at least d + 1 caps")
    if d == 2:
        ang = 2 * np.pi * np.arange(m) / m
        D = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        return CapCover(2, tuple(map(tuple, D)), np.pi / m)
    D = fibonacci_sphere(m)
    radius = 1.02 * _covering_radius(D, fibonacci_sphere(100_000))
    if radius >= np.pi / 2:
        raise DomainError(f"{m} caps cannot cover the sphere at a usable radius")
    check = _covering_radius(D, fibonacci_sphere(200_001))
    if check > radius:
        raise RuntimeError("cap radius failed verification on the finer grid")
    return CapCover(3, tuple(map(tuple, D)), radius)


# ---------------------------------------------------------------------------
# net elements


@dataclass(frozen=True)
class NetElement:
    polytope: Polytope
    epsilon: float
    cap_directions: tuple
    points_per_line: int
    source_body_hash: Optional[str] = None

    def __post_init__(self):
        if self.epsilon <= 1.0:
            raise ValidationError("epsilon must exceed 1")
        dirs = np.asarray(self.cap_directions, dtype=float)
        V = self.polytope.vertices
        d = self.polytope.dim
        # every vertex sits on a ray through some cap direction
        unit = V / np.linalg.norm(V, axis=1, keepdims=True)
        align = unit @ (dirs / np.linalg.norm(dirs, axis=1, keepdims=True)).T
        if not np.all(align.max(axis=1) >= 1.0 - 1e-9):
            raise ValidationError("element vertices must lie on cap rays")
        norms = np.linalg.norm(V, axis=1)
        if norms.max() > d + 1e-9 or norms.min() < 1.0 - 1e-9:
            raise ValidationError("element vertices must lie in the [1, d] shell")
        object.__setattr__(self, "cap_directions",
                           tuple(tuple(float(x) for x in u) for u in self.cap_directions))

    def inner_radius(self) -> float:
        N, b = self.polytope.facets
        return float(b.min())

    def to_jsonable(self) -> dict:
        return {"vertices": [list(v) for v in self.polytope.vertices],
                "epsilon": self.epsilon,
                "cap_directions": [list(u) for u in self.cap_directions],
                "points_per_line": self.points_per_line,
                "source_body_hash": self.source_body_hash}

    @staticmethod
    def from_jsonable(obj: dict) -> "NetElement":
        return NetElement(Polytope(obj["vertices"]), float(obj["epsilon"]),
                          tuple(tuple(u) for u in obj["cap_directions"]),
                          int(obj["points_per_line"]),
                          obj.get("source_body_hash"))


def _in_john_position(K: Body, tol: float = 1e-6) -> bool:
    d = K.dim
    U = fibonacci_sphere(512) if d == 3 else np.stack(
        [np.cos(t := np.linspace(0, 2 * np.pi, 720, endpoint=False)), np.sin(t)], axis=1)
    h = support_many(K, U)
    return bool(h.min() >= 1.0 - tol and h.max() <= d + tol)


def build_net_element(K: Body, caps: CapCover, points_per_line: int,
                      epsilon: float = 1.0 + 1e-9) -> NetElement:
    """Quantized radial snapshot of a John-positioned body along cap rays.

    For each cap direction the farthest body point on the ray is found via the
    gauge, then snapped toward the origin onto points_per_line equidistant
    radii in [1, d]; the convex hull of the snapped points is the element, and
    it is contained in the source body by construction.
    """
    if points_per_line < 2:
        raise DomainError("points_per_line must be at least 2")
    if K.dim != caps.dimension:
        raise DomainError("cap cover dimension mismatch")
    src = body_hash(K)
    if not _in_john_position(K):
        T, _ = john_sandwich(K)
        K = T.apply_body(K)
    d = K.dim
    D = np.asarray(caps.directions, dtype=float)
    D = D / np.linalg.norm(D, axis=1, keepdims=True)
    h = support_many(K, D)
    if np.any(~np.isfinite(h)) or np.any(h <= 0.0):
        raise RuntimeError("ray-body intersection failed")
    # farthest point of K on the ray t*u: t = 1/gauge(u), but for the support
    # points we only need the radius; John position guarantees it is in [1, d]
    from .geometry import gauge_many
    radii = 1.0 / gauge_many(K, D)
    radii = np.clip(radii, 1.0, float(d))
    grid = np.linspace(1.0, float(d), points_per_line)
    stepidx = np.floor((radii - 1.0) / (grid[1] - grid[0]) + 1e-12).astype(int)
    snapped = grid[np.clip(stepidx, 0, points_per_line - 1)]
    P = Polytope(D * snapped[:, None])
    return NetElement(P, epsilon, tuple(map(tuple, D)), points_per_line, src)


# ---------------------------------------------------------------------------
# desk-scale planar enumeration


def _dihedral_orbit_min(profile: tuple) -> tuple:
    """Lexicographic minimum of the profile over rotations and reflection;
    profiles with the same orbit describe congruent polygons."""
    m = len(profile)
    best = profile
    for flip in (False, True):
        seq = profile[::-1] if flip else profile
        for r in range(m):
            rot = seq[r:] + seq[:r]
            if rot < best:
                best = rot
    return best


def enumerate_net(d: int, epsilon: float, m: int, radial_levels: int,
                  start: int = 0) -> Iterator[tuple]:
    """Deterministic stream of planar net elements: every assignment of one of
    radial_levels equidistant radii in [1, 2] to each of m fixed directions,
    reduced to dihedral-canonical representatives.

    Yields (cursor, NetElement); resume by passing the last cursor + 1.  The
    epsilon-coverage of body space is heuristic and unreported here (certified
    nets are astronomically large); epsilon is recorded on the elements.
    """
    if d != 2:
        raise DomainError("enumerate_net is restricted to d = 2")
    if epsilon <= 1.0:
        raise DomainError("epsilon must exceed 1")
    if radial_levels < 1 or m < 3:
        raise DomainError("need at least 3 directions and 1 radial level")
    total = radial_levels ** m
    if total > ENUMERATION_BUDGET:
        raise BudgetError(f"enumeration of {total} profiles exceeds the budget "
                          f"of {ENUMERATION_BUDGET}")
    caps = cap_cover(2, m)
    D = np.asarray(caps.directions, dtype=float)
    levels = np.linspace(1.0, 2.0, radial_levels) if radial_levels > 1 else np.array([1.0])
    for cursor, profile in enumerate(itertools.product(range(radial_levels), repeat=m)):
        if cursor < start:
            continue
        if _dihedral_orbit_min(profile) != profile:
            continue
        radii = levels[list(profile)]
        P = Polytope(D * radii[:, None])
        yield cursor, NetElement(P, epsilon, tuple(map(tuple, D)), radial_levels)


# ---------------------------------------------------------------------------
# audits


@dataclass(frozen=True)
class NetAuditReport:
    element_count: int
    gamma_values: tuple
    max_gamma: Optional[float]
    candidate_constant: float
    verdict: str  # "all_below" | "violations"
    cardinality_bound: float
    violations: tuple = ()
    certificates: tuple = ()
    failures: tuple = ()  # (element index, message) pairs
    seed: int = 0

    def __post_init__(self):
        vals = tuple(float(v) for v in self.gamma_values)
        object.__setattr__(self, "gamma_values", vals)
        if vals:
            if self.max_gamma is None or abs(self.max_gamma - max(vals)) > 0.0:
                raise ValidationError("max_gamma must equal max of gamma_values")
        elif self.max_gamma is not None:
            raise ValidationError("empty audit carries no max_gamma")
        expect = "violations" if self.violations else "all_below"
        if self.verdict != expect:
            raise ValidationError("verdict inconsistent with violations list")

    def to_jsonable(self) -> dict:
        return {"element_count": self.element_count,
                "gamma_values": list(self.gamma_values),
                "max_gamma": self.max_gamma,
                "candidate_constant": self.candidate_constant,
                "verdict": self.verdict,
                "cardinality_bound": self.cardinality_bound,
                "violations": list(self.violations),
                "certificates": [c.to_jsonable() if c is not None else None
                                 for c in self.certificates],
                "failures": [list(f) for f in self.failures],
                "seed": self.seed}


def zong_audit(net: Iterable, m: int, candidate: float,
               cfg: Optional[SearchConfig] = None) -> NetAuditReport:
    """gamma_m over every net element, aggregated against a candidate bound.

    Elements whose gamma computation raises are recorded as failures and the
    audit continues.  The result is a pure function of (net, m, candidate,
    cfg), so reruns with the same seed replay bit-identically.
    """
    cfg = cfg or SearchConfig()
    values, certs, violations, failures = [], [], [], []
    count = 0
    eps, dim = None, 2
    for item in net:
        idx, elem = item if isinstance(item, tuple) else (count, item)
        count += 1
        if eps is None:
            eps, dim = elem.epsilon, elem.polytope.dim
        try:
            val, cert = gamma_m(elem.polytope, m, cfg)
        except Exception as exc:  # keep auditing, record the failure
            failures.append((idx, f"{type(exc).__name__}: {exc}"))
            continue
        values.append(float(val))
        certs.append(cert)
        if val > candidate:
            violations.append(idx)
    bound = net_cardinality_bound(dim, eps) if eps is not None and eps > 1.0 else 0.0
    return NetAuditReport(
        element_count=count,
        gamma_values=tuple(values),
        max_gamma=max(values) if values else None,
        candidate_constant=float(candidate),
        verdict="violations" if violations else "all_below",
        cardinality_bound=bound,
        violations=tuple(violations),
        certificates=tuple(certs),
        failures=tuple(failures),
        seed=cfg.seed)


def net_cardinality_bound(d: int, epsilon: float, alpha: float = 1.0) -> float:
    """log10 of the generic net-size bound base**exponent with
    base = floor(7 d / ln epsilon) and exponent
    alpha * 14**d * d**(2d+3) / (ln epsilon)**d.

    alpha is a non-normative knob (default 1); the base is clamped to at least
    1 so the large-epsilon limit degrades to bound = 1 instead of 0.
    """
    if epsilon <= 1.0:
        raise DomainError("epsilon must exceed 1")
    ln_eps = math.log(epsilon)
    base = max(1, math.floor(7 * d / ln_eps))
    exponent = alpha * (14.0 ** d) * (d ** (2 * d + 3)) / (ln_eps ** d)
    return exponent * math.log10(base)


# ---------------------------------------------------------------------------
# persistence: directory of element JSON files plus a manifest


def save_net(elements: Iterable[tuple], path: str, d: int, epsilon: float,
             m: int, radial_levels: int) -> int:
    os.makedirs(path, exist_ok=True)
    count = 0
    last_cursor = -1
    for cursor, elem in elements:
        with open(os.path.join(path, f"element-{cursor:06d}.json"), "w") as fh:
            fh.write(canonical_json(jsonable(elem.to_jsonable())))
        count += 1
        last_cursor = cursor
    manifest = {"dimension": d, "epsilon": epsilon, "m": m,
                "radial_levels": radial_levels, "cursor": last_cursor,
                "count": count}
    with open(os.path.join(path, "manifest.json"), "w") as fh:
        fh.write(canonical_json(manifest))
    return count


def load_net(path: str) -> list:
    with open(os.path.join(path, "manifest.json")) as fh:
        json.load(fh)
    out = []
    for name in sorted(os.listdir(path)):
        if not name.startswith("element-"):
            continue
        cursor = int(name.split("-")[1].split(".")[0])
        with open(os.path.join(path, name)) as fh:
            out.append((cursor, NetElement.from_jsonable(json.load(fh))))
    return out
