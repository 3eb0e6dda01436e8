"""Command-line entry point.

Exit status: 0 success, 1 validation failure, 2 numerical error, 3 usage error.

Examples::

    bogoliubov validate --potential gaussian:width=1
    bogoliubov bounds --potential gaussian:width=1 --rho 100
    bogoliubov minimize --potential gaussian:width=1 --rho 1e4 --out min.json
    bogoliubov sweep --potential bessel4:mu=1 --rho-grid 1e6:1e12:7 --out report.csv
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .asymptotics import log_grid_spec, sweep
from .bounds import lower_bound, m_exponent, residual, select_exponents, trial_for, upper_bound
from .errors import BogoliubovError, InfeasibleDensityError, ParameterError
from .functional import eval_cube, eval_radial
from .minimize import MinimizeConfig, minimize
from .potentials import FAMILIES, parse_potential, validate
from .states import CubeTrialState, RadialState

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _emit(obj, out=None):
    text = _dumps(obj)
    if out:
        Path(out).write_text(text)
    sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--potential", required=True,
                        help=f"family:key=value, families: {', '.join(sorted(FAMILIES))}")
    common.add_argument("--out", help="output path (JSON, or CSV for sweep)")

    parser = _Parser(prog="bogoliubov", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check the potential assumptions")
    p.add_argument("--samples", type=int, default=64)

    p = sub.add_parser("eval", parents=[common], help="evaluate the functional on a state")
    p.add_argument("--rho", type=float, help="density for a cube trial state")
    p.add_argument("--lam", type=float, help="cube height lambda (default: trial scaling)")
    p.add_argument("--L", type=float, help="cube side (default: trial scaling)")
    p.add_argument("--state", help="radial state CSV; header JSON next to it (.json)")

    p = sub.add_parser("bounds", parents=[common], help="lower and trial upper bounds")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--dim", type=int, default=3)

    p = sub.add_parser("minimize", parents=[common], help="minimize over radial pure states")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--grid-n", type=int, default=128)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sweep", parents=[common], help="density sweep and exponent fit")
    p.add_argument("--rho-grid", required=True, help="start:end:count, log-spaced")
    p.add_argument("--minimize", action="store_true", help="also minimize at every density")
    p.add_argument("--grid-n", type=int, default=128)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    return parser


def _cmd_validate(args, spec):
    report = validate(spec, args.samples)
    _emit(report.to_dict(), args.out)
    return EXIT_OK if report.ok else EXIT_INVALID


def _cmd_eval(args, spec):
    if args.state:
        header = Path(args.state).with_suffix(".json")
        state = RadialState.load(args.state, header)
        bd = eval_radial(spec, state)
        _emit({"state": str(args.state), "breakdown": bd.to_dict()}, args.out)
        return EXIT_OK
    if args.rho is None:
        raise UsageError("eval needs --rho (cube trial) or --state")
    if args.lam is None and args.L is None:
        trial, _ = trial_for(spec, args.rho)
    elif args.lam is not None and args.L is not None:
        trial = CubeTrialState(args.lam, args.L, args.rho)
    else:
        raise UsageError("give both --lam and --L, or neither")
    bd = eval_cube(spec, trial)
    _emit({"trial": trial.to_dict(), "breakdown": bd.to_dict()}, args.out)
    return EXIT_OK


def _cmd_bounds(args, spec):
    sel = select_exponents(spec.decay, args.dim)
    out = {"potential": spec.label, "rho": args.rho,
           "lower_bound": lower_bound(spec, args.rho), "selection": sel.to_dict()}
    if sel.s is not None:
        out["m_exponent"] = m_exponent(sel.r, sel.s, args.dim)
    if args.dim == 3:
        ub = upper_bound(spec, args.rho)
        out.update(upper_bound=ub.value, residual=residual(spec, ub.breakdown, args.rho),
                   trial=ub.trial.to_dict(), breakdown=ub.breakdown.to_dict())
    _emit(out, args.out)
    return EXIT_OK


def _cmd_minimize(args, spec):
    cfg = MinimizeConfig(n=args.grid_n, max_iters=args.max_iters, seed=args.seed)
    res = minimize(spec, args.rho, cfg)
    out = {"potential": spec.label, "lower_bound": lower_bound(spec, args.rho), **res.to_dict()}
    _emit(out, args.out)
    if args.out:
        stem = Path(args.out).with_suffix("")
        res.state.save(f"{stem}.state.csv", f"{stem}.state.json")
    return EXIT_OK


def _cmd_sweep(args, spec):
    rhos = log_grid_spec(args.rho_grid)
    cfg = MinimizeConfig(n=args.grid_n, seed=args.seed)
    report = sweep(spec, rhos, include_minimizer=args.minimize, cfg=cfg, jobs=args.jobs)
    side = report.sidecar()
    if args.out:
        Path(args.out).write_text(report.to_csv())
        Path(args.out).with_suffix(".json").write_text(_dumps(side))
    else:
        sys.stdout.write(report.to_csv())
    sys.stderr.write(_dumps(side))
    return EXIT_OK


COMMANDS = {"validate": _cmd_validate, "eval": _cmd_eval, "bounds": _cmd_bounds,
            "minimize": _cmd_minimize, "sweep": _cmd_sweep}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        spec = parse_potential(args.potential)
        return COMMANDS[args.command](args, spec)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ParameterError as exc:
        # infeasible densities are numerical failures, bad names are usage errors
        code = EXIT_NUMERICAL if isinstance(exc, InfeasibleDensityError) else EXIT_USAGE
        sys.stderr.write(f"error: {exc}\n")
        return code
    except BogoliubovError as exc:
        sys.stderr.write(f"numerical error: {exc}\n")
        return EXIT_NUMERICAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
