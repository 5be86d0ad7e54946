"""Command-line interface: ``wnoise <subcommand> ...``."""

import argparse
import json
import sys
import warnings

from . import __version__
from .arma import ArmaParams, arma_residuals, css_fit_arma
from .dgp import DgpSpec, gmc_coupling_estimate, simulate
from .errors import ConvergenceError, DegenerateSeries, ExperimentInvalid, InvalidArgument
from .farima import MEAN_MODES, FarimaParams, farima_residuals
from .kernels import KERNEL_NAMES
from .mc import run_grid
from .series import format_acf, format_series, parse_series, sample_acf
from .whittle import whittle_fit
from .wntest import MODES, box_pierce_test, hong_test


def _read_input(path):
    if path == "-":
        return parse_series(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_series(fh.read())


def _json_arg(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON: {exc}") from None


def _emit_json(obj, out):
    out.write(json.dumps(obj) + "\n")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wnoise", description="Kernel portmanteau tests for white noise under unknown dependence.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test a series for white noise")
    p.add_argument("file", help="series file (one value per line), '-' for stdin")
    p.add_argument("--kernel", default="bartlett", choices=KERNEL_NAMES)
    p.add_argument("--m", type=int, default=None, help="bandwidth (default ceil(3 n^(1/3)))")
    p.add_argument("--mode", default="finite_sample", choices=MODES)
    p.add_argument("--bp", action="store_true", help="Box-Pierce chi-square test instead")
    p.add_argument("--df-adjust", type=int, default=0, help="degrees of freedom removed (Box-Pierce only)")
    p.add_argument("--no-demean", action="store_true")

    p = sub.add_parser("simulate", help="simulate a data-generating process")
    p.add_argument("--dgp", type=_json_arg, required=True, help='e.g. \'{"kind":"bilinear","b":0.5}\'')
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write to file instead of stdout")

    p = sub.add_parser("acf", help="sample autocorrelations as TSV")
    p.add_argument("file")
    p.add_argument("--max-lag", type=int, required=True)
    p.add_argument("--no-demean", action="store_true")

    p = sub.add_parser("fit-arma", help="conditional-sum-of-squares ARMA fit")
    p.add_argument("file")
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--delta", type=float, default=0.01)

    p = sub.add_parser("fit-farima", help="Whittle FARIMA fit")
    p.add_argument("file")
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--mean-mode", default="known_zero", choices=MEAN_MODES)

    p = sub.add_parser("residuals", help="model residuals of a series")
    p.add_argument("file")
    p.add_argument("--model", type=_json_arg, required=True,
                   help='ARMA {"alpha":[..],"beta":[..]} or FARIMA {"d":..,"alpha":[..],"beta":[..]}')
    p.add_argument("--mean-mode", default="known_zero", choices=MEAN_MODES)

    p = sub.add_parser("gmc-check", help="empirical geometric-moment contraction diagnostic")
    p.add_argument("--dgp", type=_json_arg, required=True)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--max-n", type=int, default=30)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("mc", help="run a Monte Carlo experiment grid")
    p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--out", default=None, help="append TSV rows here (default stdout)")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _mean_mode_warning(d, mean_mode):
    if mean_mode == "subtract_sample_mean" and d >= 0.25:
        print(json.dumps({"warning": f"mean adjustment with d = {d:.4f} >= 0.25 is not covered by the theory"}),
              file=sys.stderr)


def _dispatch(args, out):
    cmd = args.command
    if cmd == "test":
        x = _read_input(args.file)
        demean = not args.no_demean
        if args.bp:
            res = box_pierce_test(x, args.m, args.df_adjust, demean)
        else:
            res = hong_test(x, args.kernel, args.m, args.mode, demean)
        _emit_json(res.to_json(), out)
    elif cmd == "simulate":
        x = simulate(DgpSpec.from_dict(args.dgp), args.n, args.seed)
        text = format_series(x)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            out.write(text)
    elif cmd == "acf":
        x = _read_input(args.file)
        out.write(format_acf(sample_acf(x, args.max_lag, demean=not args.no_demean)))
    elif cmd == "fit-arma":
        fit = css_fit_arma(_read_input(args.file), args.p, args.q, args.delta)
        _emit_json(fit.to_json(), out)
    elif cmd == "fit-farima":
        fit = whittle_fit(_read_input(args.file), args.p, args.q)
        _mean_mode_warning(fit.params.d, args.mean_mode)
        _emit_json(fit.to_json(), out)
    elif cmd == "residuals":
        x = _read_input(args.file)
        model = args.model
        if "d" in model:
            theta = FarimaParams.from_dict(model)
            _mean_mode_warning(theta.d, args.mean_mode)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                u = farima_residuals(x, theta, args.mean_mode)
        else:
            u = arma_residuals(x, ArmaParams.from_dict(model))
        out.write(format_series(u))
    elif cmd == "gmc-check":
        rep = gmc_coupling_estimate(DgpSpec.from_dict(args.dgp), args.alpha, args.max_n, args.reps, args.seed)
        _emit_json(rep.to_json(), out)
    elif cmd == "mc":
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
        lines = run_grid(cfg, args.out, args.workers)
        if args.out is None:
            out.write("\n".join(lines) + "\n")


def main(argv=None, out=None):
    """Run the CLI; returns the process exit code."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        _dispatch(args, out)
    except (InvalidArgument, DegenerateSeries, ConvergenceError, ExperimentInvalid,
            OSError, KeyError, TypeError, ValueError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return 1
    return 0


run_cli = main


if __name__ == "__main__":
    sys.exit(main())
