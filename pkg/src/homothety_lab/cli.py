"""Command-line surface: one subcommand per engine entry point.

Every run emits a single RunRecord as canonical JSON, printed to stdout or
appended to the --out JSONL file.  Records carry the body hash, the
normalized parameters and the seed, so replaying the same command line
reproduces the result bit-exactly.

Exit codes: 0 success, 2 domain/schema error, 3 result emitted but flagged
(upper bound only, not converged, or unknown status), 64 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from .bodies import Ball, DirectSum, DomainError, ValidationError, as_polytope
from .covering import (
    BudgetError,
    CoverConfig,
    Homothet,
    coin_report,
    covering_parameter_report,
    coin_product_bounds,
    gamma_m,
    n_lambda,
    tightly_covered_report,
    weak_coin,
)
from .bmdist import bm_distance_upper
from .illumination import (
    IlluminationConfig,
    XrayConfig,
    illumination_number_polygon,
    illumination_number_upper,
    illumination_parameter,
    verify_illumination,
    xray_number_polygon,
)
from .render import render_svg
from .search import SearchConfig
from .serialization import RunRecord, body_hash, jsonable, parse_body
from .zong import enumerate_net, load_net, net_cardinality_bound, save_net, zong_audit

USAGE_EXIT = 64
FLAGGED_STATUSES = {"upper_bound_only", "not_converged", "unknown"}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the contract here reserves 2 for domain
    errors, so usage problems exit 64 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _build_parser() -> _Parser:
    p = _Parser(prog="homothety-lab",
                description="Covering and illumination calculations for convex bodies.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, help_, body=True):
        sp = sub.add_parser(name, help=help_)
        if body:
            sp.add_argument("--body", required=True, metavar="FILE",
                            help="body spec JSON file")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--restarts", type=int, default=None)
        sp.add_argument("--tol", type=float, default=None,
                        help="covering ratio tolerance")
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--out", metavar="FILE", default=None,
                        help="append the run record to this JSONL file")
        return sp

    sp = cmd("gamma", "least ratio covering the body with m homothets")
    sp.add_argument("--m", type=int, required=True)
    sp = cmd("nlambda", "fewest homothets of a given ratio that cover")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    cmd("coin", "covering index (ratio capped at 1/2)")
    cmd("wcoin", "covering index with the ratio cap relaxed")
    cmd("cparam", "covering parameter upper bound")
    cmd("illum", "illumination number (exact in the plane, bound in space)")
    cmd("illum-param", "illumination parameter for o-symmetric planar bodies")
    cmd("xray", "X-ray number of a polygon")
    sp = cmd("bm-dist", "Banach-Mazur distance upper bound")
    sp.add_argument("--other", required=True, metavar="FILE",
                    help="second body spec JSON file")
    sp = cmd("tight-check", "search for separated point sets at each ratio")
    sp.add_argument("--grid", required=True,
                    help="comma-separated covering ratios in (0, 1)")
    cmd("prod-bounds", "covering index bounds for a direct sum")
    sp = cmd("zong-net", "enumerate net elements and store them", body=False)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--levels", type=int, required=True)
    sp.add_argument("--net", required=True, metavar="DIR",
                    help="directory receiving the element files")
    sp = cmd("zong-audit", "gamma_m sweep over a stored net", body=False)
    sp.add_argument("--net", required=True, metavar="DIR")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--candidate", type=float, required=True)
    sp = cmd("net-bound", "log10 cardinality bound for the epsilon-net", body=False)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--epsilon", type=float, required=True)
    sp = cmd("render", "SVG drawing of a planar body with optional overlay")
    sp.add_argument("--overlay", metavar="FILE", default=None,
                    help="overlay JSON (cover, illumination or xray)")
    return p


def _search_config(args) -> SearchConfig:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("HOMOTHETY_LAB_SEED", "0"))
    kw = {"seed": seed}
    if args.restarts is not None:
        kw["restarts"] = args.restarts
    if args.tol is not None:
        kw["lambda_tol"] = args.tol
    if args.threads is not None:
        kw["threads"] = args.threads
    return SearchConfig(**kw)


def _load_body(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_body(fh.read())


def _parse_overlay(obj: dict):
    kind = obj.get("type")
    if kind == "cover":
        if "homothets" in obj:
            hs = tuple(Homothet(float(h["lam"]), tuple(h["t"])) for h in obj["homothets"])
        else:
            lam = float(obj["lambda"])
            hs = tuple(Homothet(lam, tuple(t)) for t in obj["translations"])
        return hs
    if kind == "illumination":
        return IlluminationConfig.from_jsonable(obj)
    if kind == "xray":
        return XrayConfig.from_jsonable(obj)
    raise ValidationError(f"/type: unknown overlay type {kind!r}")


def _illum_result(K, cfg: SearchConfig) -> dict:
    P = as_polytope(K)
    if K.dim == 2 and P is not None:
        n, cert = illumination_number_polygon(P)
        return {"value": n, "certificate": cert.to_jsonable()}
    if K.dim == 2 and isinstance(K, Ball):
        ang = 2.0 * np.pi / 3.0
        dirs = tuple((float(np.cos(k * ang)), float(np.sin(k * ang))) for k in range(3))
        ok, cert = verify_illumination(K, IlluminationConfig("directions", directions=dirs))
        if not ok:
            raise RuntimeError("three spread directions failed to illuminate a disk")
        return {"value": 3, "certificate": cert.to_jsonable()}
    if K.dim == 3:
        n = illumination_number_upper(K, cfg)
        if isinstance(K, Ball):
            return {"value": n}
        return {"value": n, "status": "upper_bound_only"}
    raise DomainError("illumination number needs a planar polygon or disk, "
                      "or a 3D body")


def _run(args):
    """Returns (body_hash, params, result) for the parsed command."""
    cfg = _search_config(args)
    cmd = args.command
    params: dict = {"restarts": cfg.restarts, "tol": cfg.lambda_tol}

    if cmd == "net-bound":
        params = {"d": args.d, "epsilon": args.epsilon}
        return "", params, {"log10_bound": net_cardinality_bound(args.d, args.epsilon)}

    if cmd == "zong-net":
        params = {"d": args.d, "epsilon": args.epsilon, "m": args.m,
                  "levels": args.levels, "net": args.net}
        stream = list(enumerate_net(args.d, args.epsilon, args.m, args.levels))
        save_net(stream, args.net, args.d, args.epsilon, args.m, args.levels)
        return "", params, {"element_count": len(stream),
                            "last_cursor": stream[-1][0] if stream else None}

    if cmd == "zong-audit":
        params = {"net": args.net, "m": args.m, "candidate": args.candidate,
                  "restarts": cfg.restarts, "tol": cfg.lambda_tol}
        net = load_net(args.net)
        rep = zong_audit(net, args.m, args.candidate, cfg)
        return "", params, rep.to_jsonable()

    K = _load_body(args.body)
    h = body_hash(K)

    if cmd == "gamma":
        params["m"] = args.m
        val, cert = gamma_m(K, args.m, cfg)
        return h, params, {"value": val, "certificate": cert.to_jsonable()}
    if cmd == "nlambda":
        params["lambda"] = args.lam
        n, cert = n_lambda(K, args.lam, cfg)
        return h, params, {"value": n, "certificate": cert.to_jsonable()}
    if cmd == "coin":
        rep = coin_report(K, cfg)
        return h, params, {"value": rep.value, "m": rep.m, "lambda": rep.lam,
                           "table": [list(r) for r in rep.table]}
    if cmd == "wcoin":
        return h, params, {"value": weak_coin(K, cfg)}
    if cmd == "cparam":
        rep = covering_parameter_report(K, cfg)
        out = {"value": rep.value, "passes": rep.passes,
               "homothets": [[hm.lam, list(hm.t)] for hm in rep.homothets]}
        if not rep.converged:
            out["status"] = "not_converged"
        return h, params, out
    if cmd == "illum":
        return h, params, _illum_result(K, cfg)
    if cmd == "illum-param":
        return h, params, {"value": illumination_parameter(K, cfg)}
    if cmd == "xray":
        P = as_polytope(K)
        if K.dim != 2 or P is None:
            raise DomainError("X-ray number is implemented for polygons")
        n, xcfg = xray_number_polygon(P)
        return h, params, {"value": n, "lines": xcfg.to_jsonable()["lines"]}
    if cmd == "bm-dist":
        L = _load_body(args.other)
        params["other_hash"] = body_hash(L)
        return h, params, {"value": bm_distance_upper(K, L, cfg)}
    if cmd == "tight-check":
        grid = tuple(float(s) for s in args.grid.split(","))
        params["grid"] = list(grid)
        rep = tightly_covered_report(K, grid, cfg)
        return h, params, {"status": rep.status, "refuted_at": rep.refuted_at,
                           "levels": [[d.lam, d.n, d.exhausted] for d in rep.details]}
    if cmd == "prod-bounds":
        parts = K.parts if isinstance(K, DirectSum) else (K,)
        rep = coin_product_bounds(parts, cfg)
        return h, params, {
            "part_coins": list(rep.part_coins), "max_coin": rep.max_coin,
            "direct_sum_coin": rep.direct_sum_coin, "inf_term": rep.inf_term,
            "lambda_star": rep.lambda_star, "product_term": rep.product_term,
            "chain_ok": rep.chain_ok}
    if cmd == "render":
        overlay = None
        if args.overlay is not None:
            with open(args.overlay, "r", encoding="utf-8") as fh:
                spec = json.load(fh)
            overlay = _parse_overlay(spec)
            if isinstance(overlay, tuple):
                overlay = CoverConfig(K, overlay)
        svg = render_svg(K, overlay)
        params["overlay"] = args.overlay
        return h, params, {"svg": svg,
                           "svg_sha256": hashlib.sha256(svg.encode()).hexdigest()}
    raise RuntimeError(f"unhandled command {cmd}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    t0 = time.monotonic()
    try:
        h, params, result = _run(args)
    except (DomainError, ValidationError, BudgetError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    runtime_ms = int(round(1000.0 * (time.monotonic() - t0)))
    seed = args.seed if args.seed is not None else int(os.environ.get("HOMOTHETY_LAB_SEED", "0"))
    rec = RunRecord(body_hash=h, command=args.command, params=jsonable(params),
                    result=jsonable(result), seed=seed, runtime_ms=runtime_ms)
    line = rec.to_json()
    if getattr(args, "out", None):
        with open(args.out, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
    else:
        print(line)
    status = result.get("status") if isinstance(result, dict) else None
    return 3 if status in FLAGGED_STATUSES else 0


if __name__ == "__main__":
    raise SystemExit(main())
