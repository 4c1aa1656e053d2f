"""Derivative-free local search used by the covering/illumination engines.

Everything is deterministic given a SearchConfig: restart i draws from its own
child generator of the config seed, so results do not depend on scheduling or
on how many workers execute the restarts.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize

from .bodies import ValidationError


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 64
    max_iters: int = 1500
    lambda_tol: float = 5e-4
    geo_tol: float = 1e-9
    threads: int = 1
    anneal_kicks: int = 1

    def __post_init__(self):
        if self.lambda_tol < 1e-6:
            raise ValidationError("lambda_tol must be >= 1e-6")
        if self.restarts < 1:
            raise ValidationError("restarts must be >= 1")
        if self.threads < 1:
            raise ValidationError("threads must be >= 1")

    def child_rng(self, *tags: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=tags))

    def with_(self, **kw) -> "SearchConfig":
        return replace(self, **kw)


def pattern_search(f, x0, step: float, min_step: float = 1e-6,
                   max_evals: int = 4000, shrink: float = 0.5):
    """Coordinate pattern search; returns (x, fx, evals)."""
    x = np.asarray(x0, dtype=float).copy()
    fx = f(x)
    evals = 1
    n = x.size
    while step > min_step and evals < max_evals:
        improved = False
        for k in range(n):
            for sgn in (1.0, -1.0):
                if evals >= max_evals:
                    break
                y = x.copy()
                y[k] += sgn * step
                fy = f(y)
                evals += 1
                if fy < fx - 1e-15:
                    x, fx = y, fy
                    improved = True
                    break
        if not improved:
            step *= shrink
    return x, fx, evals


def polish_nm(f, x0, max_iters: int, fatol: float = 1e-11, xatol: float = 1e-9):
    res = minimize(f, np.asarray(x0, dtype=float), method="Nelder-Mead",
                   options={"maxiter": max_iters, "fatol": fatol, "xatol": xatol,
                            "adaptive": len(np.atleast_1d(x0)) > 6})
    return np.asarray(res.x, dtype=float), float(res.fun)


def local_descend(f, x0, rng: np.random.Generator, cfg: SearchConfig,
                  step: float = 0.25, kick_scale: float = 0.15):
    """Pattern search, Nelder-Mead polish, then annealing-style kicks from the
    incumbent when the descent stalls above it."""
    x, fx, _ = pattern_search(f, x0, step=step, min_step=1e-5,
                              max_evals=cfg.max_iters)
    x, fx = _nm_best(f, x, fx, cfg)
    for k in range(cfg.anneal_kicks):
        temp = kick_scale / (1.0 + k)
        y0 = x + rng.normal(scale=temp, size=x.size)
        y, fy, _ = pattern_search(f, y0, step=max(temp, 0.02), min_step=1e-5,
                                  max_evals=cfg.max_iters // 2)
        y, fy = _nm_best(f, y, fy, cfg)
        if fy < fx:
            x, fx = y, fy
    return x, fx


def _nm_best(f, x, fx, cfg: SearchConfig):
    y, fy = polish_nm(f, x, cfg.max_iters)
    return (y, fy) if fy < fx else (x, fx)


def multistart_top(f, starts, cfg: SearchConfig, rng_tag: int = 0,
                   step: float = 0.25, top: int = 1):
    """Minimize f from each start (plus rng-indexed kicks); returns the best
    `top` results as (x, fx, i) triples, deterministically ordered by rounded
    value then start index so last-bit noise cannot reshuffle them."""
    results = []
    for i, x0 in enumerate(starts):
        rng = cfg.child_rng(rng_tag, i)
        x, fx = local_descend(f, np.asarray(x0, dtype=float), rng, cfg, step=step)
        results.append((round(float(fx), 12), i, x, float(fx)))
    results.sort(key=lambda t: (t[0], t[1]))
    return [(x, fx, i) for _, i, x, fx in results[:max(1, top)]]


def multistart(f, starts, cfg: SearchConfig, rng_tag: int = 0,
               step: float = 0.25):
    """Minimize f from each start; deterministic reduction by (value, index)."""
    (x, fx, i), = multistart_top(f, starts, cfg, rng_tag=rng_tag, step=step, top=1)
    return x, fx, i
