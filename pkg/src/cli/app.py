"""
Command-line front end.

    ttsa plan   --mode state|quadratic|time ...
    ttsa run    CONFIG [--seed N] [--threads N] [--out DIR]
    ttsa fit    SUMMARY [--kind loglog|semilog] [--k-min K] [--k-max K]
    ttsa verify --problem sgd-pr|sbo [--box B]

Exit codes: 0 success, 1 usage or configuration error, 2 infeasible plan,
failed check or failed run.
"""
import argparse
import logging
import sys
from typing import List, Optional

from src.cli import commands
from src.utils.errors import ConfigurationError, LabError
from src.utils.log import configure_logging, get_logger

logger = get_logger("CLI")


class LabArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors surface as ConfigurationError (exit 1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigurationError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", metavar="DIR", help="directory for output files")


def build_parser() -> argparse.ArgumentParser:
    parser = LabArgumentParser(prog="ttsa", description="Two-time-scale stochastic approximation laboratory")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    # ------------------------------------------------------------------ plan
    plan = sub.add_parser("plan", help="evaluate rate formulas and feasibility constants")
    plan.add_argument("--mode", choices=("state", "quadratic", "time"), required=True)
    plan.add_argument("--problem", default="sgd-pr", help="problem supplying the assumption constants")
    for name in ("L-lambda", "L-f", "mu-f", "L-g", "mu-g"):
        plan.add_argument(f"--{name}", type=float, help=f"override {name.replace('-', '_')}")
    plan.add_argument("--delta", type=float, nargs="+", metavar="D", help="delta (1 value or d11 d12 d21 d22)")
    plan.add_argument("--gamma", type=float, nargs="+", metavar="G", help="Gamma (1 value or G11 G12 G21 G22)")
    plan.add_argument("--gamma1", type=float)
    plan.add_argument("--gamma2", type=float)
    plan.add_argument("--gamma-prime", type=float, nargs="+", metavar="G", help="Gamma' (1 value or G'11 G'22)")
    plan.add_argument("--alpha", type=float)
    plan.add_argument("--beta", type=float)
    plan.add_argument("--k0", type=float)
    plan.add_argument("--V0", type=float, help="initial Lyapunov value (default: from x0 = y0 = 1)")
    plan.add_argument("--practical", action="store_true", help="take k0 as given and only report violations")
    plan.add_argument("--omega", type=float, help="step ratio alpha/beta for constant steps")
    plan.add_argument("--beta-cap", type=float, default=1.0)
    plan.add_argument("--bound-csv", metavar="FILE", help="write the bound curve at default checkpoints")
    plan.add_argument("--iterations", type=int, default=10 ** 6, help="horizon of --bound-csv")
    _add_common(plan)
    plan.set_defaults(handler=commands.cmd_plan)

    # ------------------------------------------------------------------ run
    run = sub.add_parser("run", help="run a Monte-Carlo ensemble from a JSON config")
    run.add_argument("config", help="experiment config (JSON)")
    run.add_argument("--seed", type=int, help="master seed override")
    run.add_argument("--replicates", type=int)
    run.add_argument("--iterations", type=int)
    run.add_argument("--threads", type=int, help="worker threads (default: $TTSA_THREADS or all cores)")
    run.add_argument("--name", help="output file stem (default: config name)")
    _add_common(run)
    run.set_defaults(handler=commands.cmd_run)

    # ------------------------------------------------------------------ fit
    fit = sub.add_parser("fit", help="fit the decay rate of a summary")
    fit.add_argument("summary", help="summary JSON or CSV")
    fit.add_argument("--kind", choices=("loglog", "semilog"), default="loglog")
    fit.add_argument("--k-min", type=float, default=1e5)
    fit.add_argument("--k-max", type=float)
    _add_common(fit)
    fit.set_defaults(handler=commands.cmd_fit)

    # ------------------------------------------------------------------ verify
    verify = sub.add_parser("verify", help="check assumption constants and analytic derivatives")
    verify.add_argument("--problem", required=True)
    verify.add_argument("--dim", type=int, help="dimension for sgd-pr")
    verify.add_argument("--box", type=float, help="half-width of the sampling box")
    verify.add_argument("--n", type=int, default=10_000, help="random pairs for the constant checks")
    verify.add_argument("--points", type=int, default=1000, help="random points for the gradient checks")
    verify.add_argument("--h", type=float, default=1e-5, help="finite-difference step")
    verify.add_argument("--grad-tol", type=float, default=1e-5, help="max relative gradient error")
    verify.add_argument("--slack", type=float, default=1e-9, help="relative slack of the constant checks")
    verify.add_argument("--seed", type=int, default=0)
    _add_common(verify)
    verify.set_defaults(handler=commands.cmd_verify)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    configure_logging(level)
    try:
        return args.handler(args)
    except LabError as exc:
        logger.error(str(exc))
        return exc.exit_code
