"""Command-line interface.

Subcommands: count, survive, density, survival, simulate, rmt,
verify-identities, verify.  Output is deterministic for fixed flags and
seed (byte-identical JSON/CSV), with a versioned JSON schema.
"""

import argparse
import json
import math
import sys

import numpy as np

SCHEMA_VERSION = 1


def _positions(text):
    return tuple(int(v) for v in text.split(","))


def _floats(text):
    return tuple(float(v) for v in text.split(","))


def _emit(args, payload, csv_rows=None, csv_header=None):
    """Write the result as JSON (default) or CSV, to --out or stdout."""
    if args.format == "csv":
        if csv_rows is None:
            raise SystemExit("this subcommand has no CSV form")
        lines = [",".join(csv_header)]
        for row in csv_rows:
            lines.append(",".join(repr(v) if isinstance(v, float) else str(v) for v in row))
        text = "\n".join(lines) + "\n"
    else:
        payload = {"schema_version": SCHEMA_VERSION, **payload}
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_count(args):
    from .combinatorics import LatticeConfig, count_paths, walk_probability

    u = LatticeConfig(args.start, wall=args.wall)
    m = int(args.time)
    c = count_paths(m, u, args.end)
    prob = walk_probability(m, u, args.end)
    _emit(args, {
        "count": str(c.value),
        "steps": m,
        "n_walkers": c.n_walkers,
        "probability": {"num": str(prob.numerator), "den": str(prob.denominator),
                        "float": float(prob)},
    })
    return 0


def _cmd_survive(args):
    from .combinatorics import LatticeConfig, survival_probability

    u = LatticeConfig(args.start, wall=args.wall)
    m = int(args.time)
    prob = survival_probability(m, u)
    _emit(args, {
        "steps": m,
        "probability": {"num": str(prob.numerator), "den": str(prob.denominator),
                        "float": float(prob)},
    })
    return 0


def _cmd_density(args):
    from .densities import ModelSpec, g_density, p_density

    y = np.asarray(args.at, dtype=float)
    spec = ModelSpec(len(y), horizon=args.horizon, wall=args.wall)
    family = "p" if math.isinf(args.horizon) else "g"
    f = p_density if family == "p" else g_density
    val = f(spec, 0.0, None, args.time, y)
    _emit(args, {"family": family, "time": args.time, "point": list(y),
                 "wall": args.wall, "density": float(val)})
    return 0


def _cmd_survival(args):
    from .densities import survival

    x = np.asarray(args.at, dtype=float)
    val = survival(args.time, x, wall=args.wall)
    _emit(args, {"time": args.time, "point": list(x), "wall": args.wall,
                 "probability": val})
    return 0


def _cmd_simulate(args):
    from .combinatorics import LatticeConfig
    from .densities import ModelSpec
    from .montecarlo import SimConfig, simulate_sde, simulate_walkers

    n = args.n
    if args.model == "walker":
        spec = ModelSpec(n, horizon=args.horizon, wall=args.wall)
        start = LatticeConfig(args.start if args.start else tuple(range(0, 2 * n, 2)),
                              wall=args.wall)
        cfg = SimConfig("walker", spec, start=start, scale=args.scale,
                        samples=args.samples, seed=args.seed, streams=args.streams)
        ens = simulate_walkers(cfg)
    else:
        horizon = args.horizon if args.model == "sde-g" else math.inf
        spec = ModelSpec(n, horizon=horizon, wall=args.wall)
        start = np.asarray(args.at, dtype=float) if args.at else None
        cfg = SimConfig(args.model, spec, start=start, step=args.step,
                        t_end=args.time, samples=args.samples, seed=args.seed,
                        streams=args.streams)
        ens = simulate_sde(cfg)

    summary = {
        "model": args.model,
        "samples": int(ens.paths.shape[0]),
        "accepted": ens.accepted,
        "proposed": ens.proposed,
        "acceptance": ens.accepted / ens.proposed,
        "time_grid": [float(t) for t in ens.time_grid],
        "config_digest": ens.config_digest,
    }
    rows = []
    if args.format == "csv":
        for sid in range(ens.paths.shape[0]):
            for k, t in enumerate(ens.time_grid):
                rows.append([sid, float(t)] + [float(v) for v in ens.paths[sid, :, k]])
    header = ["sample_id", "t"] + ["x_%d" % (i + 1) for i in range(n)]
    _emit(args, summary, csv_rows=rows, csv_header=header)
    return 0


def _cmd_rmt(args):
    from .rmt import sample_ensemble

    sample = sample_ensemble(args.ensemble, args.n, variance=args.variance,
                             alpha=args.alpha, samples=args.samples, seed=args.seed)
    summary = {
        "ensemble": args.ensemble,
        "n": args.n,
        "variance": args.variance,
        "alpha": args.alpha,
        "samples": args.samples,
        "mean_top": float(sample.eigenvalues[:, -1].mean()),
        "second_moment": float((sample.eigenvalues ** 2).mean()),
    }
    rows = [[i] + [float(v) for v in row] for i, row in enumerate(sample.eigenvalues)] \
        if args.format == "csv" else None
    header = ["draw_id"] + ["lambda_%d" % (i + 1) for i in range(args.n)]
    _emit(args, summary, csv_rows=rows, csv_header=header)
    return 0


def _run_suites(args, suite):
    from .harness import verify_suite

    reports = verify_suite(suite, samples=args.samples, seed=args.seed)
    payload = {
        "suite": suite,
        "reports": [r.as_dict() for r in reports],
        "n_pass": sum(r.verdict == "pass" for r in reports),
        "n_fail": sum(r.verdict == "fail" for r in reports),
    }
    rows = [[r.test_name, r.statistic, r.critical_value, r.n_samples, r.verdict]
            for r in reports] if args.format == "csv" else None
    _emit(args, payload, csv_rows=rows,
          csv_header=["test_name", "statistic", "critical_value", "n_samples", "verdict"])
    return 0 if payload["n_fail"] == 0 else 1


def _cmd_verify_identities(args):
    return _run_suites(args, "identities")


def _cmd_verify(args):
    return _run_suites(args, args.suite)


def build_parser():
    p = argparse.ArgumentParser(prog="viciouskit",
                                description="nonintersecting walkers: exact counts, "
                                            "densities, simulations, verification")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", type=int, default=2, help="number of walkers")
        sp.add_argument("--wall", action="store_true", help="reflecting-wall variant")
        sp.add_argument("--horizon", type=float, default=math.inf,
                        help="nonintersection horizon T (inf for the h-transform family)")
        sp.add_argument("--time", type=float, default=1.0,
                        help="evaluation/end time (lattice steps for count/survive)")
        sp.add_argument("--scale", type=int, default=8, help="lattice scale L")
        sp.add_argument("--samples", type=int, default=1000)
        sp.add_argument("--step", type=float, default=1e-3, help="SDE time step")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--streams", type=int, default=1)
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("count", help="exact nonintersecting path count")
    common(sp)
    sp.add_argument("--start", type=_positions, required=True, help="even positions, e.g. 0,2")
    sp.add_argument("--end", type=_positions, required=True)
    sp.set_defaults(fn=_cmd_count)

    sp = sub.add_parser("survive", help="exact lattice survival probability")
    common(sp)
    sp.add_argument("--start", type=_positions, required=True)
    sp.set_defaults(fn=_cmd_survive)

    sp = sub.add_parser("density", help="origin-start transition density at a point")
    common(sp)
    sp.add_argument("--at", type=_floats, required=True, help="ordered reals, e.g. 0.1,0.9")
    sp.set_defaults(fn=_cmd_density)

    sp = sub.add_parser("survival", help="Brownian non-collision probability (Pfaffian)")
    common(sp)
    sp.add_argument("--at", type=_floats, required=True)
    sp.set_defaults(fn=_cmd_survival)

    sp = sub.add_parser("simulate", help="walker or SDE path ensembles")
    common(sp)
    sp.add_argument("--model", choices=("walker", "sde-g", "sde-p"), default="walker")
    sp.add_argument("--start", type=_positions, default=None, help="walker lattice start")
    sp.add_argument("--at", type=_floats, default=None, help="SDE interior start")
    # SDE end time defaults to the guarded horizon (sde-g) or 1.0 (sde-p)
    sp.set_defaults(fn=_cmd_simulate, time=None, horizon=1.0)

    sp = sub.add_parser("rmt", help="random-matrix spectra")
    common(sp)
    sp.add_argument("--ensemble", choices=("GOE", "GUE", "PM"), default="GOE")
    sp.add_argument("--variance", type=float, default=1.0)
    sp.add_argument("--alpha", type=float, default=None)
    sp.set_defaults(fn=_cmd_rmt)

    sp = sub.add_parser("verify-identities", help="run the identity battery")
    common(sp)
    sp.set_defaults(fn=_cmd_verify_identities)

    sp = sub.add_parser("verify", help="run a named verification suite")
    common(sp)
    sp.add_argument("--suite", choices=("identities", "combinatorics", "montecarlo",
                                        "rmt", "all"), default="all")
    sp.set_defaults(fn=_cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
