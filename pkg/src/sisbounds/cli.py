"""Command-line front end.

Graphs are specified as generator:args (star:2000, er:100:0.05:7),
as bare shorthand for the simple families (star6, path3), or as
file:PATH pointing at an edge list. Human-readable output rounds to
6 significant digits; JSON output keeps full precision with sorted
keys so identical runs are byte-identical.
"""

import argparse
import json
import re
import sys

import numpy as np

from . import graph as graph_mod
from . import chain as chain_mod
from . import montecarlo as mc_mod
from . import analysis
from .bounds import EpidemicParams, M, M_PRIME, M_DOUBLE_PRIME

DEFAULT_SEED = 12345

_SHORT = re.compile(r"(star|cycle|path|clique)(\d+)$")

_FAMILIES = {
    "star": graph_mod.star,
    "cycle": graph_mod.cycle,
    "path": graph_mod.path,
    "clique": graph_mod.clique,
}


def parse_graph(spec):
    """Build a graph from a command-line graph description string."""
    if spec.startswith("file:"):
        return graph_mod.read_edge_list(spec[5:])
    m = _SHORT.match(spec)
    if m:
        return _FAMILIES[m.group(1)](int(m.group(2)))
    parts = spec.split(":")
    name, args = parts[0], parts[1:]
    try:
        if name in _FAMILIES and len(args) == 1:
            return _FAMILIES[name](int(args[0]))
        if name == "spider" and len(args) == 2:
            return graph_mod.spider(int(args[0]), int(args[1]))
        if name == "er" and len(args) in (2, 3):
            seed = int(args[2]) if len(args) == 3 else DEFAULT_SEED
            return graph_mod.erdos_renyi(int(args[0]), float(args[1]), seed)
        if name == "ws" and len(args) in (3, 4):
            seed = int(args[3]) if len(args) == 4 else DEFAULT_SEED
            return graph_mod.watts_strogatz(int(args[0]), int(args[1]),
                                            float(args[2]), seed)
    except ValueError as exc:
        raise ValueError("bad graph spec %r: %s" % (spec, exc))
    raise ValueError("unknown graph spec %r" % spec)


def _open_out(path):
    return open(path, "w") if path else sys.stdout


def _emit(path, text):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _row_dict(row):
    return {
        "label": row.label,
        "n": row.n,
        "beta": row.beta,
        "delta": row.delta,
        "rho_m": row.rho_m,
        "rho_m_prime": row.rho_m_prime,
        "rho_m_double_prime": row.rho_m_double_prime,
        "mpp_nonnegative": bool(row.mpp_nonnegative),
        "sign_status": row.sign_status,
        "first_failure": row.first_failure,
        "certified": bool(row.certified),
    }


def _cmd_gen(args):
    if args.generator in _FAMILIES:
        g = _FAMILIES[args.generator](args.n)
    elif args.generator == "spider":
        g = graph_mod.spider(args.arms, args.arm_length)
    elif args.generator == "er":
        g = graph_mod.erdos_renyi(args.n, args.p, args.seed)
    elif args.generator == "ws":
        g = graph_mod.watts_strogatz(args.n, args.k, args.rewire, args.seed)
    else:
        raise ValueError("unknown generator %r" % args.generator)
    fh = _open_out(args.out)
    try:
        graph_mod.write_edge_list(g, fh)
    finally:
        if args.out:
            fh.close()
    return 0


def _cmd_analyze(args):
    g = parse_graph(args.graph)
    params = EpidemicParams(args.beta, args.delta)
    row = analysis.table_row(g, params, horizon=args.horizon)
    if args.format == "json":
        _emit(args.out, _json_dumps(_row_dict(row)))
    else:
        lines = ["n=%d beta=%.6g delta=%.6g" % (row.n, row.beta, row.delta),
                 "rho_m=%.6g" % row.rho_m,
                 "rho_m_prime=%.6g" % row.rho_m_prime,
                 "rho_m_double_prime=%.6g" % row.rho_m_double_prime,
                 "sign_status=%s" % row.sign_status]
        if row.first_failure is not None:
            lines.append("first_failure=%d" % row.first_failure)
        _emit(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_exact(args):
    g = parse_graph(args.graph)
    params = EpidemicParams(args.beta, args.delta)
    t_mix = chain_mod.mixing_time(g, params, args.eps, t_max=args.horizon)
    if args.out:
        dist = chain_mod.all_infected_dist(g.n)
        steps = t_mix if t_mix is not None else args.horizon
        for _ in range(steps):
            dist = chain_mod.transition_apply(g, params, dist)
        chain_mod.dist_to_csv(dist, args.out)
    if t_mix is None:
        sys.stdout.write("t_mix=none (horizon %d exhausted)\n" % args.horizon)
        return 1
    sys.stdout.write("t_mix=%d\n" % t_mix)
    return 0


def _cmd_mc(args):
    g = parse_graph(args.graph)
    params = EpidemicParams(args.beta, args.delta)
    init = args.init
    if re.fullmatch(r"\d+", init or ""):
        init = int(init)
    cfg = mc_mod.McConfig(args.traj, args.horizon, args.seed, init)
    est = mc_mod.estimate(g, params, cfg)
    fh = _open_out(args.out)
    try:
        mc_mod.estimate_to_csv(est, fh)
    finally:
        if args.out:
            fh.close()
    last = est.mean_infected_fraction[-1]
    sys.stderr.write("final mean infected fraction %.6g (%d alive of %d)\n"
                     % (last, est.n_alive_trajectories[-1], est.n_traj))
    return 0


def _cmd_verify(args):
    g = parse_graph(args.graph)
    params = EpidemicParams(args.beta, args.delta)
    rep = analysis.dominance_check(g, params, args.T)
    for name in sorted(rep.violations):
        v = rep.violations[name]
        sys.stdout.write("%s %s\n" % (name, "n/a" if v is None else "%.6g" % v))
    sys.stdout.write("max_violation %.6g\n" % rep.max_violation)
    return 0 if rep.max_violation <= args.tol else 1


def _cmd_scan(args):
    g = parse_graph(args.graph)
    betas = [float(b) for b in args.betas.split(",")]
    scan = analysis.threshold_scan(g, args.delta, betas, horizon=args.horizon)
    if args.out:
        analysis.scan_to_csv(scan, args.out)
    for b, row in zip(scan.betas, scan.rows):
        sys.stdout.write(
            "beta=%.6g rho_m=%.6g rho_mp=%.6g rho_mpp=%.6g cond=%s\n"
            % (b, row.rho_m, row.rho_m_prime, row.rho_m_double_prime,
               row.sign_status))
    for kind in (M, M_PRIME, M_DOUBLE_PRIME):
        for c in scan.crossings[kind]:
            sys.stdout.write("crossing %s %.6g\n" % (kind, c))
    if args.refine:
        for kind in (M, M_PRIME, M_DOUBLE_PRIME):
            for c in scan.crossings[kind]:
                lo = max(betas[0], c - (betas[-1] - betas[0]))
                hi = min(betas[-1], c + (betas[-1] - betas[0]))
                try:
                    r = analysis.refine_crossing(g, args.delta, kind, lo, hi,
                                                 tol=args.refine)
                except ValueError:
                    continue
                sys.stdout.write("refined %s %.10g\n" % (kind, r))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="sisbounds",
        description="Spectral bounds and exact references for "
                    "contact-process extinction on graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated graph as an edge list")
    g.add_argument("generator",
                   choices=["star", "cycle", "path", "clique", "spider",
                            "er", "ws"])
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--p", type=float, default=0.1)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--rewire", type=float, default=0.0)
    g.add_argument("--arms", type=int, default=3)
    g.add_argument("--arm-length", type=int, default=1)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--out", default=None)
    g.set_defaults(func=_cmd_gen)

    a = sub.add_parser("analyze", help="radii and sign status for one instance")
    a.add_argument("--graph", required=True)
    a.add_argument("--beta", type=float, required=True)
    a.add_argument("--delta", type=float, required=True)
    a.add_argument("--horizon", type=int, default=1000)
    a.add_argument("--format", choices=["json", "text"], default="json")
    a.add_argument("--out", default=None)
    a.set_defaults(func=_cmd_analyze)

    e = sub.add_parser("exact", help="exact mixing time on the full chain")
    e.add_argument("--graph", required=True)
    e.add_argument("--beta", type=float, required=True)
    e.add_argument("--delta", type=float, required=True)
    e.add_argument("--eps", type=float, default=0.01)
    e.add_argument("--horizon", type=int, default=100000)
    e.add_argument("--out", default=None,
                   help="write the distribution at the stopping time as CSV")
    e.set_defaults(func=_cmd_exact)

    m = sub.add_parser("mc", help="Monte Carlo infection curve")
    m.add_argument("--graph", required=True)
    m.add_argument("--beta", type=float, required=True)
    m.add_argument("--delta", type=float, required=True)
    m.add_argument("--seed", type=int, default=DEFAULT_SEED)
    m.add_argument("--traj", type=int, default=200)
    m.add_argument("--horizon", type=int, default=500)
    m.add_argument("--init", default="all")
    m.add_argument("--out", default=None)
    m.set_defaults(func=_cmd_mc)

    v = sub.add_parser("verify", help="dominance checks against the exact chain")
    v.add_argument("--graph", required=True)
    v.add_argument("--beta", type=float, required=True)
    v.add_argument("--delta", type=float, required=True)
    v.add_argument("--T", type=int, default=30)
    v.add_argument("--tol", type=float, default=1e-10)
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("scan", help="radii across a beta grid with crossings")
    s.add_argument("--graph", required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--betas", required=True,
                   help="comma-separated ascending list")
    s.add_argument("--horizon", type=int, default=1000)
    s.add_argument("--out", default=None)
    s.add_argument("--refine", type=float, default=None,
                   help="bisection tolerance for crossing refinement")
    s.set_defaults(func=_cmd_scan)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "gen" and args.n is None:
        if args.generator == "spider":
            args.n = 0
        else:
            ap.error("gen %s requires --n" % args.generator)
    try:
        return args.func(args)
    except (ValueError, RuntimeError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
