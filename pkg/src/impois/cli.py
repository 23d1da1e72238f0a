"""Command-line interface.

Every subcommand writes CSV to standard output, or to ``--out``.  Exit status
is 0 on success, 2 on a usage or domain error and 3 when the recursive
ordering stops.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import experiments as ex
from .baselines import equal_tail_pvalue, normal_approx_pvalue
from .constrained import lambda_interval
from .im_core import Assertion, one_sided
from .ordering import DEFAULT_EPSILON, OrderingStopped, build_ranking, diagnostics
from .two_sided import plausibility_curve, plausibility_interval, point_plausibility

EXIT_USAGE = 2
EXIT_STOPPED = 3


def _csv(columns, rows):
    lines = [",".join(columns)]
    lines += [",".join(ex.format_value(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _workers(args):
    if args.workers is not None:
        return args.workers
    env = os.environ.get("IMPOIS_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"IMPOIS_WORKERS must be an integer, got {env!r}")
    return 1


def cmd_pl_point(args):
    pl = point_plausibility(args.x, args.theta0, args.eps)
    return _csv(("x", "theta0", "pl", "bel"), [(args.x, args.theta0, pl, 1.0 - pl)])


def cmd_pl_curve(args):
    grid = np.linspace(args.theta_min, args.theta_max, args.n)
    curve = plausibility_curve(args.x, grid, args.eps, workers=_workers(args))
    if not args.baselines:
        return _csv(("theta", "pl"), zip(curve.theta_grid, curve.values))
    rows = [
        (t, pl, normal_approx_pvalue(args.x, t), equal_tail_pvalue(args.x, t, capped=True))
        for t, pl in zip(curve.theta_grid, curve.values)
    ]
    return _csv(("theta", "pl", "normal", "equal_tail"), rows)


def cmd_interval(args):
    iv = plausibility_interval(args.x, args.alpha, args.eps)
    return _csv(("x", "alpha", "lower", "upper", "contiguous"), [(iv.x, iv.alpha, iv.lower, iv.upper, iv.contiguous)])


def cmd_one_sided(args):
    pair = one_sided(args.x, Assertion(args.side, args.theta0))
    return _csv(("x", "theta0", "side", "bel", "pl"), [(args.x, args.theta0, args.side, pair.belief, pair.plausibility)])


def cmd_ordering(args):
    ranking = build_ranking(args.theta0, args.eps)
    diag = diagnostics(ranking)
    rows = []
    for r, x in enumerate(ranking.support, start=1):
        t = x - args.theta0
        rows.append((r, x, t, t * t - args.theta0, diag.T[r - 1], diag.V[r - 1]))
    return _csv(("rank", "x", "t", "v", "T_r", "V_r"), rows)


def cmd_lambda_interval(args):
    iv = lambda_interval(args.x, args.beta, args.alpha, args.eps)
    cols = ("x", "beta", "alpha", "lambda_lower", "lambda_upper", "conflict_mass")
    return _csv(cols, [(iv.x, args.beta, iv.alpha, iv.lower, iv.upper, iv.conflict_mass)])


def _alpha_grid(args):
    if args.alpha_grid:
        return tuple(float(a) for a in args.alpha_grid.split(","))
    return ex.default_alpha_grid()


def cmd_sim_plcdf(args):
    config = ex.SimConfig(args.theta0, tuple(args.theta), args.n, args.seed, _alpha_grid(args), args.eps)
    report = ex.pl_cdf_simulation(config, workers=_workers(args))
    if args.theta0 in config.theta_true_list:
        verdict = ex.validity_report(config, workers=_workers(args)).metadata["verdict"]
        for method, passed in verdict.items():
            print(f"validity {method}: {'pass' if passed else 'fail'}", file=sys.stderr)
    return report.to_csv()


def cmd_sim_coverage(args):
    lambdas = np.round(np.arange(args.lambda_min, args.lambda_max + 0.5 * args.lambda_step, args.lambda_step), 10)
    report = ex.coverage_simulation(args.beta, lambdas, args.alpha, args.n, args.seed, args.eps, _workers(args))
    return report.to_csv()


def cmd_sim_width(args):
    report = ex.width_table(args.beta, range(args.x_min, args.x_max + 1), args.alpha, args.eps, _workers(args))
    return report.to_csv()


def cmd_validity(args):
    config = ex.SimConfig(args.theta0, (args.theta0,), args.n, args.seed, _alpha_grid(args), args.eps)
    return ex.validity_report(config, workers=_workers(args)).to_csv()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="impois", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_, *, sim=False):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--eps", type=float, default=DEFAULT_EPSILON, help="truncation tolerance")
        p.add_argument("--out", help="write CSV here instead of stdout")
        if sim:
            p.add_argument("--n", type=int, default=100_000, help="Monte Carlo samples")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--workers", type=int, default=None, help="worker processes (env IMPOIS_WORKERS)")
        p.set_defaults(func=func)
        return p

    p = add("pl-point", cmd_pl_point, "plausibility of {theta0} given x")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--theta0", type=float, required=True)

    p = add("pl-curve", cmd_pl_curve, "plausibility as a function of theta")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--theta-min", type=float, default=0.05)
    p.add_argument("--theta-max", type=float, default=20.0)
    p.add_argument("--n", type=int, default=400, help="grid points")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--baselines", action="store_true", help="add normal and equal-tail columns")

    p = add("interval", cmd_interval, "plausibility interval for theta")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.1)

    p = add("one-sided", cmd_one_sided, "optimal one-sided belief and plausibility")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--theta0", type=float, required=True)
    p.add_argument("--side", choices=("greater", "less-equal"), default="greater")

    p = add("ordering", cmd_ordering, "recursive ranking with T(r), V(r) diagnostics")
    p.add_argument("--theta0", type=float, required=True)

    p = add("lambda-interval", cmd_lambda_interval, "constrained interval for the signal rate")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.1)

    p = add("sim-plcdf", cmd_sim_plcdf, "empirical CDF of the plausibility at theta0", sim=True)
    p.add_argument("--theta0", type=float, required=True)
    p.add_argument("--theta", type=float, nargs="+", required=True, help="true means to simulate")
    p.add_argument("--alpha-grid", help="comma-separated levels (default 0.01..0.99)")

    p = add("sim-coverage", cmd_sim_coverage, "coverage of signal-rate intervals", sim=True)
    p.add_argument("--beta", type=float, default=3.0, help="background mean; 0 for the plain mean")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--lambda-min", type=float, default=0.0)
    p.add_argument("--lambda-max", type=float, default=4.0)
    p.add_argument("--lambda-step", type=float, default=0.1)

    p = add("sim-width", cmd_sim_width, "interval widths as a function of x", sim=True)
    p.add_argument("--beta", type=float, default=3.0)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--x-min", type=int, default=0)
    p.add_argument("--x-max", type=int, default=15)

    p = add("validity", cmd_validity, "validity check of each method at the null", sim=True)
    p.add_argument("--theta0", type=float, required=True)
    p.add_argument("--alpha-grid", help="comma-separated levels (default 0.01..0.99)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except OrderingStopped as exc:
        print(f"impois: {exc}", file=sys.stderr)
        return EXIT_STOPPED
    except ValueError as exc:
        print(f"impois: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
