"""Command line front end.

Every subcommand writes either CSV (leading ``# key=value`` comment lines,
then a header, floats at 17 significant digits) or a JSON document shaped
as {"version", "command", "run_config", "payload"}. Outputs are pure
functions of the full flag set; ``--threads`` splits work but never
changes a single bit of the result.

Exit codes: 0 success, 2 bad usage or unparseable input, 3 a numerical
guard tripped (non-convergence, failed cross-check, resource cap).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .backend import backend_name
from .degree_model import DegreeDistribution
from .errors import (CapExceeded, ChildrenCapExceeded, Degenerate,
                     DegreeExceedsN, DomainError, InvalidPmf, NoConvergence,
                     NumericalError, ParseError, PoolNotConverged, ZeroMean)
from . import graph_lab, limit_theory, tree_recursion

log = logging.getLogger("ugwspectra")

_USAGE_ERRORS = (ParseError, InvalidPmf, DomainError, ZeroMean, Degenerate,
                 DegreeExceedsN)
_NUMERIC_ERRORS = (NoConvergence, NumericalError, PoolNotConverged,
                   ChildrenCapExceeded, CapExceeded)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(header: str, rows, config: dict, out: str | None) -> None:
    lines = [f"# {k}={v}" for k, v in config.items()]
    lines.append(header)
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    _emit("\n".join(lines) + "\n", out)


def _emit_json(command: str, run_config: dict, payload: dict, out: str | None) -> None:
    doc = {
        "version": __version__,
        "command": command,
        "run_config": run_config,
        "payload": payload,
    }
    _emit(json.dumps(doc, indent=2) + "\n", out)


def _parse_floats(text: str, flag: str) -> list:
    vals = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            vals.append(float(tok))
        except ValueError:
            raise ParseError(f"{flag}: cannot parse {tok!r} as a number")
    if not vals:
        raise ParseError(f"{flag}: no values given")
    return vals


def _parse_model(text: str):
    """Graph-model string: er:<c> or a degree-law string.

    A Poisson law is routed to the independent-edge sampler, whose degree
    law it is in the large-n limit; anything else becomes a stub-pairing
    sample of the given degree sequence.
    """
    if text.startswith("er:"):
        try:
            c = float(text[3:])
        except ValueError:
            raise ParseError(f"cannot parse {text[3:]!r} as a mean degree")
        return "er", c
    dist = DegreeDistribution.parse(text)
    if dist.kind == "poisson":
        return "er", float(dist.param)
    return "config", dist


def _sample_graph(model, n: int, seed: int, erased: bool) -> graph_lab.SparseGraph:
    kind, arg = model
    if kind == "er":
        return graph_lab.sample_er(n, arg, seed)
    return graph_lab.sample_config_model(n, arg, seed, erased=erased)


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> int:
    dist = DegreeDistribution.parse(args.dist)
    report = limit_theory.classify(dist)
    _emit_json("classify", {"dist": args.dist}, report.to_json_dict(), args.out)
    return 0


def cmd_locus(args) -> int:
    if args.c is not None:
        cs = [args.c]
    else:
        if args.c_max < args.c_min:
            raise DomainError("--c-max must be at least --c-min")
        cs = list(np.linspace(args.c_min, args.c_max, args.steps))
    rows = []
    for c in cs:
        for q in limit_theory.bg_locus(c):
            rows.append((float(c), float(q)))
    cfg = {"c": args.c} if args.c is not None else {
        "c_min": args.c_min, "c_max": args.c_max, "steps": args.steps}
    _emit_csv("c,q", rows, cfg, args.out)
    return 0


def cmd_mcurve(args) -> int:
    dist = DegreeDistribution.parse(args.dist)
    zs = np.linspace(0.0, 1.0, args.grid_n)
    rows = [
        (float(z), limit_theory.M(dist, float(z)),
         limit_theory.M_prime(dist, float(z)),
         limit_theory.M_second(dist, float(z)))
        for z in zs
    ]
    _emit_csv("z,M,Mprime,Msecond", rows, {"dist": args.dist, "grid_n": args.grid_n},
              args.out)
    return 0


def cmd_sweep(args) -> int:
    dist = DegreeDistribution.parse(args.dist)
    t_grid = _parse_floats(args.t_grid, "--t-grid")
    result = tree_recursion.s_star_sweep(
        dist, t_grid, pool_size=args.pool, iters=args.iters,
        seed=args.seed, threads=args.threads)
    rows = [
        (r.t, r.mean_s_root, r.stderr_root, r.t_times_mean, r.s_star_mean,
         result.trend)
        for r in result.rows
    ]
    cfg = {"dist": args.dist, "t_grid": args.t_grid, "pool": args.pool,
           "iters": args.iters, "seed": args.seed}
    _emit_csv("t,E_root,stderr_root,t_times_E,s_star,trend", rows, cfg, args.out)
    return 0


def cmd_alphabeta(args) -> int:
    dist = DegreeDistribution.parse(args.dist)
    run = tree_recursion.evolve_alphabeta(
        dist, pool_size=args.pool, iters=args.iters,
        seed=args.seed, threads=args.threads)
    even = tree_recursion.category_frequencies(run.pool_even)
    odd = tree_recursion.category_frequencies(run.pool_odd)
    payload = {
        "combined": dict(zip(("f_plus", "f_minus", "f_star"), run.combined)),
        "phase_even": dict(zip(("f_plus", "f_minus", "f_star"), even)),
        "phase_odd": dict(zip(("f_plus", "f_minus", "f_star"), odd)),
        "converged": run.converged,
    }
    bs = tree_recursion.beta_star_estimate(dist, run.pool_even, seed=args.seed,
                                           ref_pool=run.pool_mid)
    payload["beta_star"] = {
        "estimate": bs.estimate, "diverging": bs.diverging,
        "tail_index": bs.tail_index, "quantiles": bs.quantiles,
    }
    try:
        ci = tree_recursion.conditional_inverse_alpha(run.pool_even, dist)
        payload["conditional_inverse_alpha"] = {
            "estimate": ci.estimate, "diverging": ci.diverging, "n_plus": ci.n_plus}
    except PoolNotConverged as exc:
        payload["conditional_inverse_alpha"] = {"error": str(exc)}
    try:
        cat = limit_theory.category_probabilities(dist)
        payload["theory"] = {
            "under_root_law": list(cat.under_root_law),
            "under_offspring_law": list(cat.under_offspring_law),
            "z_hat": cat.z_hat,
        }
    except (NoConvergence, Degenerate):
        payload["theory"] = None
    cfg = {"dist": args.dist, "pool": args.pool, "iters": args.iters,
           "seed": args.seed}
    _emit_json("alphabeta", cfg, payload, args.out)
    return 0


def cmd_spectrum(args) -> int:
    model = _parse_model(args.dist)
    graph = _sample_graph(model, args.n, args.seed, args.erased)
    spec = graph_lab.eigenvalues(graph)
    cfg = {"dist": args.dist, "n": args.n, "seed": args.seed,
           "erased": args.erased, "edge_count": graph.edge_count,
           "simple": graph.simple,
           "solver_residual": _fmt(spec.solver_residual)}
    _emit_csv("lambda", [(float(x),) for x in spec.eigenvalues], cfg, args.out)
    return 0


def cmd_nullity(args) -> int:
    model = _parse_model(args.dist)
    per_seed = []
    for k in range(args.seeds):
        graph = _sample_graph(model, args.n, args.seed + k, args.erased)
        res = graph_lab.nullity(graph, method=args.method, seed=args.seed + k)
        per_seed.append({"seed": args.seed + k, "nullity": res.nullity,
                         "method": res.method})
        log.info("seed %d: nullity %d / %d", args.seed + k, res.nullity, args.n)
    fracs = np.array([r["nullity"] for r in per_seed]) / args.n
    payload = {
        "n": args.n,
        "dist": args.dist,
        "seeds": [r["seed"] for r in per_seed],
        "per_seed": per_seed,
        "nullity_mean": float(fracs.mean()),
        "nullity_se": float(fracs.std(ddof=1) / math.sqrt(len(fracs)))
        if len(fracs) > 1 else 0.0,
    }
    cfg = {"dist": args.dist, "n": args.n, "seeds": args.seeds,
           "seed": args.seed, "method": args.method}
    _emit_json("nullity", cfg, payload, args.out)
    return 0


def cmd_kmcurve(args) -> int:
    edge = 2.0 * math.sqrt(args.d - 1.0)
    lam = np.linspace(-edge, edge, args.grid_n)
    rho = np.atleast_1d(graph_lab.kesten_mckay_density(args.d, lam))
    cdf = np.atleast_1d(graph_lab.kesten_mckay_cdf(args.d, lam))
    rows = list(zip(map(float, lam), map(float, rho), map(float, cdf)))
    _emit_csv("lambda,density,cdf", rows, {"d": args.d, "grid_n": args.grid_n},
              args.out)
    return 0


def cmd_report(args) -> int:
    model = _parse_model(args.dist)
    # er:<c> graphs have Poisson(c) as their limiting local degree law
    if model[0] == "er":
        dist = DegreeDistribution.parse(f"poisson:{model[1]:.17g}")
    else:
        dist = model[1]
    report = limit_theory.classify(dist)
    eps_list = _parse_floats(args.eps, "--eps") if args.eps else []

    fracs = []
    masses = {eps: [] for eps in eps_list}
    seeds = list(range(args.seed, args.seed + args.seeds))
    for s in seeds:
        graph = _sample_graph(model, args.n, s, erased=True)
        res = graph_lab.nullity(graph, method="rank_mod_prime", seed=s)
        fracs.append(res.nullity / args.n)
        if eps_list:
            eigs = graph_lab.eigenvalues(graph).eigenvalues
            for eps in eps_list:
                masses[eps].append(
                    graph_lab.window_mass(eigs, res.nullity, args.n, eps))
        log.info("seed %d: nullity fraction %.4f", s, fracs[-1])
    fr = np.array(fracs)
    payload = {
        "theory": report.to_json_dict(),
        "ensemble": {
            "n": args.n,
            "c_or_dist": args.dist,
            "seeds": seeds,
            "nullity_mean": float(fr.mean()),
            "nullity_se": float(fr.std(ddof=1) / math.sqrt(len(fr)))
            if len(fr) > 1 else 0.0,
            "window_mass": {repr(float(eps)): float(np.mean(masses[eps]))
                            for eps in eps_list},
        },
    }
    cfg = {"dist": args.dist, "n": args.n, "seeds": args.seeds,
           "seed": args.seed, "eps": args.eps}
    _emit_json("report", cfg, payload, args.out)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="ugwspectra",
        description="Spectra of sparse random graphs and their limiting trees.")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, pool=False, graph=False):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if pool:
            p.add_argument("--pool", type=int, default=100_000)
            p.add_argument("--iters", type=int, default=300)
        if graph:
            p.add_argument("--n", type=int, default=1000)
            p.add_argument("--erased", action="store_true",
                           help="drop loops and repeated edges after pairing")

    p = sub.add_parser("classify", help="limit verdict for a degree law")
    p.add_argument("--dist", required=True)
    common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("locus", help="self-consistency branches q(c)")
    p.add_argument("--c", type=float, default=None)
    p.add_argument("--c-min", type=float, default=1.0)
    p.add_argument("--c-max", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=61)
    common(p)
    p.set_defaults(fn=cmd_locus)

    p = sub.add_parser("mcurve", help="variational curve M and derivatives")
    p.add_argument("--dist", required=True)
    p.add_argument("--grid-n", type=int, default=2001)
    common(p)
    p.set_defaults(fn=cmd_mcurve)

    p = sub.add_parser("sweep", help="atom-subtracted transform along a t grid")
    p.add_argument("--dist", required=True)
    p.add_argument("--t-grid", required=True,
                   help="comma-separated, strictly decreasing, min 1e-5")
    common(p, pool=True)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("alphabeta", help="t = 0 category dynamics and tails")
    p.add_argument("--dist", required=True)
    common(p, pool=True)
    p.set_defaults(fn=cmd_alphabeta, iters=400)

    p = sub.add_parser("spectrum", help="adjacency eigenvalues of one sample")
    p.add_argument("--dist", required=True,
                   help="er:<c>, poisson:<c> (independent edges) or a degree law")
    common(p, graph=True)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("nullity", help="kernel dimension over an ensemble")
    p.add_argument("--dist", required=True)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--method", choices=("rank_mod_prime", "svd"),
                   default="rank_mod_prime")
    common(p, graph=True)
    p.set_defaults(fn=cmd_nullity)

    p = sub.add_parser("kmcurve", help="regular-tree density and CDF table")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--grid-n", type=int, default=1024)
    common(p)
    p.set_defaults(fn=cmd_kmcurve)

    p = sub.add_parser("report", help="theory verdict next to ensemble measurements")
    p.add_argument("--dist", required=True)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--eps", default="",
                   help="comma-separated window half-widths (empty: skip spectra)")
    common(p, graph=True)
    p.set_defaults(fn=cmd_report)

    return top


def main(argv=None) -> int:
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(
        level=levels.get(os.environ.get("SPECTRA_LOG", "error").lower(),
                         logging.ERROR),
        format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    log.info("backend: %s", backend_name)
    try:
        return args.fn(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
