"""Command-line entry point: ``chui-lab <command> [flags]``.

Every run emits its full configuration (seed included) next to the result.
Exit status: 0 when all checks pass, 2 when a check fails (the report is
still written), 1 on usage or numerical errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ChuiLabError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


class UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageExit(f"{self.prog}: error: {message}")


def _jsonable(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _clean(obj):
    """Replace non-finite floats by strings so the JSON stays standard."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def emit(args, result: dict, passed: bool, rows=None, columns=None):
    config = {k: v for k, v in vars(args).items() if k not in ("func", "json", "csv")}
    doc = {
        "schema": f"chui-lab/{args.command}/v{SCHEMA_VERSION}",
        "version": __version__,
        "config": config,
        "passed": bool(passed),
        "result": result,
    }
    if args.csv is not None:
        if rows is None:
            raise UsageExit(f"{args.command} has no tabular output; use --json")
        fh, close = _open_out(args.csv)
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([repr(float(row[c])) if isinstance(row[c], float) else row[c] for c in columns])
        finally:
            if close:
                fh.close()
    if args.json is not None or args.csv is None:
        text = json.dumps(_clean(json.loads(json.dumps(doc, default=_jsonable))), indent=2)
        fh, close = _open_out(args.json)
        try:
            fh.write(text + "\n")
        finally:
            if close:
                fh.close()
    return EXIT_OK if passed else EXIT_FAILED


# --------------------------------------------------------------------------
# argument helpers
# --------------------------------------------------------------------------

def _weight(text):
    from .weights import parse_weight
    return parse_weight(text)


def _poles(args):
    from .fractions import PoleConfiguration
    if args.equispaced is not None:
        return PoleConfiguration.equispaced(args.equispaced)
    if args.poles is not None:
        return PoleConfiguration.load(args.poles)
    raise UsageExit("give --poles <file.json> or --equispaced N")


def _function(text):
    from .thompson import parse_function
    return parse_function(text)


def _Ns(text):
    from .asymptotics import parse_Ns
    return parse_Ns(text)


def _note_seed(args):
    print(f"seed: {args.seed}", file=sys.stderr)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_norm(args):
    from .norms import norm_sq, psi_norm_sq
    g = _weight(args.weight)
    if args.method == "radial":
        if args.equispaced is None:
            raise UsageExit("--method radial needs --equispaced N")
        res = psi_norm_sq(args.equispaced, g)
    else:
        res = norm_sq(_poles(args), g, args.method)
    return emit(args, res.to_dict(), True)


def cmd_minimize(args):
    from .norms import psi_norm_sq
    from .optimize import minimize_norm
    _note_seed(args)
    g = _weight(args.weight)
    res = minimize_norm(args.N, g, starts=args.starts, seed=args.seed, tol=args.tol, max_iter=args.max_iter,
                        threads=args.threads)
    out = res.to_dict(with_trace=args.trace)
    ref = psi_norm_sq(args.N, g).value_sq
    out["psi_norm_sq"] = ref
    out["minimality_hypotheses"] = g.satisfies_minimality_hypotheses
    passed = True
    if g.satisfies_minimality_hypotheses:
        # the equispaced configuration is the proven minimizer for these weights
        passed = res.best_norm_sq >= ref - 1e-8 and res.gauge_distance_to_equispaced < 1e-3
    rows = [{"start": i, "value": v, "gauge_distance": d, "converged": c}
            for i, (v, d, c) in enumerate(zip(res.start_values, res.start_gauge_distances, res.start_converged))]
    return emit(args, out, passed, rows, ["start", "value", "gauge_distance", "converged"])


def cmd_distance(args):
    from .optimize import distance_to_SFN
    _note_seed(args)
    f = _function(args.target)
    g = _weight(args.weight)
    res = distance_to_SFN(f, args.N, g, starts=args.starts, seed=args.seed, tol=args.tol,
                          max_iter=args.max_iter, threads=args.threads)
    out = res.to_dict(with_trace=args.trace)
    out["distance"] = math.sqrt(max(res.best_norm_sq, 0.0))
    out["target"] = f.label
    return emit(args, out, True)


def cmd_setdist(args):
    from .optimize import set_distance_experiment
    _note_seed(args)
    res = set_distance_experiment(args.n, args.k, _weight(args.weight), starts=args.starts, seed=args.seed,
                                  tol=args.tol, max_iter=args.max_iter, threads=args.threads)
    return emit(args, res.to_dict(), res.passed)


def cmd_asymptotics(args):
    from .asymptotics import scaled_norm_sequence
    if args.Ns:
        Ns = _Ns(args.Ns)
    else:
        Ns = _Ns(f"1:{args.N_max}" if args.N_max <= 2000 else f"1:{args.N_max}:log")
    rep = scaled_norm_sequence(args.alpha, Ns)
    rows = [{"N": n, "scaled_norm_sq": v, "ratio": r} for n, v, r in zip(rep.Ns, rep.values, rep.ratios)]
    return emit(args, rep.to_dict(), rep.passed, rows, ["N", "scaled_norm_sq", "ratio"])


def cmd_rates(args):
    from .asymptotics import bracket_sweep, rate_regimes
    from .weights import ExpPower, LogPower, PowerAlpha
    case = args.case.upper()
    if args.weight:
        g = _weight(args.weight)
    elif case == "C":
        g = LogPower(args.q if args.q is not None else 2.0)
    elif case == "D":
        g = ExpPower(args.q if args.q is not None else 1.0)
    elif case == "B":
        g = PowerAlpha(args.alpha if args.alpha is not None else 2.0)
    else:
        g = PowerAlpha(args.alpha if args.alpha is not None else 1.0)
    Ns = _Ns(args.Ns)
    rep = bracket_sweep(g, Ns) if case == "BRACKET" else rate_regimes(case, g, Ns)
    rows = [{"N": n, "value": v, "ratio": r} for n, v, r in zip(rep.Ns, rep.values, rep.ratios)]
    return emit(args, rep.to_dict(), rep.passed, rows, ["N", "value", "ratio"])


def cmd_thompson(args):
    from .thompson import (CALIBRATED_C0, check_integral_bound, check_pointwise_bound, construct_poles,
                           disk_samples, sup_error, thompson_approximant)
    _note_seed(args)
    f = _function(args.f)
    C0 = CALIBRATED_C0 if args.C0 is None else args.C0
    poles = construct_poles(f, args.N)
    h = thompson_approximant(f, args.N)
    x = poles.angles / (2 * math.pi)
    out = {
        "f": f.label, "M": f.sup_bound_M, "N": args.N, "K_radius": args.K_radius,
        "sup_error": sup_error(f, h, args.K_radius),
        "min_node_spacing": float(np.min(np.diff(np.append(x, 1.0)))),
        "poles": [float(a) for a in poles.angles] if args.with_poles else None,
    }
    passed = True
    if args.check_bounds:
        z = disk_samples(np.random.default_rng([args.seed, args.N]), args.samples, h.poles)
        pw = check_pointwise_bound(h, f.sup_bound_M, C0, z)
        radii = (0.5, 0.9, 0.99, 0.999, 1.0 - 1.0 / args.N)
        cm = check_integral_bound(f, args.N, 2.0, 1.0, C0, sorted(set(radii)))
        out["pointwise"] = pw.to_dict()
        out["circle_mean"] = cm.to_dict()
        passed = pw.passed and cm.passed
    return emit(args, out, passed)


def cmd_moments(args):
    from .moments import random_trials
    _note_seed(args)
    res = random_trials(args.N, args.trials, args.seed)
    return emit(args, res.to_dict(), res.moment_all_pass and res.fejer_all_pass and res.adversarial_pass)


def cmd_annulus(args):
    from .moments import annulus_energy
    res = annulus_energy(_poles(args))
    return emit(args, res.to_dict(), True)


def cmd_closure(args):
    from .experiments import closure_density_demo, closure_lower_bound_check
    _note_seed(args)
    f = _function(args.f)
    if args.branch == "lower":
        if args.weight not in (None, "alpha:1", "alpha:1.0"):
            raise UsageExit("the lower branch runs in alpha:1 only")
        Ns = _Ns(args.Ns or "2:64:geom")
        rep = closure_lower_bound_check(f, Ns, starts=args.starts, seed=args.seed, slack=args.slack,
                                        threads=args.threads)
    else:
        Ns = _Ns(args.Ns or "32:512:geom")
        rep = closure_density_demo(f, _weight(args.weight or "alpha:2"), Ns)
    cols = ["N", "distance_sq", "distance"]
    return emit(args, rep.to_dict(), rep.passed, rep.series, cols)


def cmd_distlimit(args):
    from .experiments import distance_limit_experiment
    _note_seed(args)
    f = _function(args.f)
    Ns = _Ns(args.Ns) if args.Ns else _Ns(f"64:{args.N_max}:geom")
    rep = distance_limit_experiment(f, Ns, starts=args.starts, seed=args.seed, slack=args.slack,
                                    threads=args.threads)
    return emit(args, rep.to_dict(), rep.passed, rep.series, ["N", "constructive", "optimized"])


def cmd_selftest(args):
    from .acceptance import run_all
    _note_seed(args)
    only = [int(k) for k in args.only.split(",")] if args.only else None
    echo = (lambda line: print(line, file=sys.stderr)) if args.json is not None else print
    results = run_all(only, seed=args.seed, echo=echo)
    passed = all(r.passed for r in results)
    if args.json is None:
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
        return EXIT_OK if passed else EXIT_FAILED
    return emit(args, {"criteria": [r.to_dict() for r in results]}, passed)


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chui-lab", description="Simplest fractions in weighted Bergman spaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, seeded=False, threaded=False):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--json", nargs="?", const="-", default=None, metavar="PATH",
                        help="write the JSON report (default: standard output)")
        sp.add_argument("--csv", default=None, metavar="PATH", help="write tabular data as CSV ('-' for stdout)")
        if seeded:
            sp.add_argument("--seed", type=int, default=0)
        if threaded:
            sp.add_argument("--threads", type=int, default=None,
                            help="worker cap (falls back to CHUI_LAB_THREADS)")
        return sp

    def poles_args(sp):
        grp = sp.add_mutually_exclusive_group()
        grp.add_argument("--poles", type=Path, help="JSON array of angles in radians")
        grp.add_argument("--equispaced", type=int, metavar="N")

    def opt_args(sp, starts=20):
        sp.add_argument("--starts", type=int, default=starts)
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--max-iter", type=int, default=5000)
        sp.add_argument("--trace", action="store_true", help="include the best start's objective trace")

    sp = add("norm", cmd_norm, "squared norm of a simplest fraction")
    poles_args(sp)
    sp.add_argument("--weight", default="alpha:1")
    sp.add_argument("--method", choices=("gram", "quad", "taylor", "radial"), default="gram")

    sp = add("minimize", cmd_minimize, "multistart minimization of the norm over N poles", True, True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--weight", default="alpha:1")
    opt_args(sp)

    sp = add("distance", cmd_distance, "distance from a bounded function to N-pole simplest fractions", True, True)
    sp.add_argument("--target", "--f", dest="target", default="zero")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--weight", default="alpha:1")
    opt_args(sp)

    sp = add("setdist", cmd_setdist, "distance between SF_n and SF_(n+k)", True, True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--weight", default="alpha:1")
    opt_args(sp)

    sp = add("asymptotics", cmd_asymptotics, "N^(alpha-1) ||Psi_N||^2 against its limit")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--N-max", type=int, default=1000)
    sp.add_argument("--Ns", default=None, help="a:b, a:b:log, a:b:geom or a comma list")

    sp = add("rates", cmd_rates, "normalized ||Psi_N|| sequences for the rate regimes")
    sp.add_argument("--case", required=True, type=str.upper, choices=("A", "B", "C", "D", "BRACKET"))
    sp.add_argument("--weight", default=None)
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--Ns", default="10:10000:log")

    sp = add("thompson", cmd_thompson, "Thompson-type approximant of a bounded function", True)
    sp.add_argument("--f", default="const:0.5")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--K-radius", type=float, default=0.4)
    sp.add_argument("--check-bounds", action="store_true")
    sp.add_argument("--C0", type=float, default=None)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--with-poles", action="store_true")

    sp = add("moments", cmd_moments, "power-sum lower bounds on random unimodular families", True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--trials", type=int, default=1000)

    sp = add("annulus", cmd_annulus, "energy of a simplest fraction on 1/N < 1-|z|^2 < 2/N")
    poles_args(sp)

    sp = add("closure", cmd_closure, "closure experiments: distance floor or density", True, True)
    sp.add_argument("--branch", choices=("lower", "density"), required=True)
    sp.add_argument("--f", default="const:0.5")
    sp.add_argument("--weight", default=None)
    sp.add_argument("--Ns", default=None)
    sp.add_argument("--starts", type=int, default=20)
    sp.add_argument("--slack", type=float, default=0.5)

    sp = add("distlimit", cmd_distlimit, "constructive and optimized distances against pi/sqrt(3)", True, True)
    sp.add_argument("--f", default="const:0.5")
    sp.add_argument("--N-max", type=int, default=512)
    sp.add_argument("--Ns", default=None)
    sp.add_argument("--starts", type=int, default=4)
    sp.add_argument("--slack", type=float, default=0.3)

    sp = add("selftest", cmd_selftest, "run the acceptance criteria", True)
    sp.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", None) is not None and args.threads < 1:
            raise UsageExit("--threads must be >= 1")
        return args.func(args)
    except UsageExit as exc:
        print(exc, file=sys.stderr)
        return EXIT_ERROR
    except (ChuiLabError, ValueError, OSError) as exc:
        print(f"chui-lab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
