"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(including a failed oracle check).
"""

import argparse
import sys
from contextlib import contextmanager

from . import experiments
from .config import load_config
from .errors import ConfigError, NumericalError, SC3Error

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _grid(text):
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NxM, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sc3loop",
        description="Task-oriented uplink/downlink allocation for sensing-communication-computing-control loops.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="config file (default: bundled paper.cfg)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="optimal allocation at the configured budget")
    sweep = sub.add_parser("sweep", parents=[common], help="LQR cost versus total bandwidth (CSV)")
    sweep.add_argument("--scheme", default="all", choices=("all",) + experiments.SCHEMES)
    sweep.add_argument("--points", type=int, help="number of bandwidth points")
    sub.add_parser("balance", parents=[common], help="per-scheme UL/DL task information (CSV)")
    contour = sub.add_parser("contour", parents=[common], help="LQR over bandwidth x CPU frequency (CSV)")
    contour.add_argument("--grid", type=_grid, help="bandwidth x frequency points, e.g. 41x41")
    check = sub.add_parser("oracle-check", parents=[common], help="closed form vs brute-force grid (CSV)")
    check.add_argument("--grid", type=_grid, help="bandwidth x time grid, e.g. 2000x2000")
    check.add_argument("--points", type=int, help="number of random instances")
    check.add_argument("--seed", type=int, default=0, help="RNG seed for the instances")
    return parser


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def run(args):
    config = load_config(args.config)
    if args.command == "oracle-check":
        grid = None
        if args.grid:
            from .oracle import GridSpec
            grid = GridSpec(*args.grid)
        header, rows = experiments.run_oracle_check(config, instances=args.points, grid=grid, seed=args.seed)
        with _output(args.out) as fh:
            experiments.write_csv(header, rows, fh)
        failed = [r[0] for r in rows if r[-1] != "true"]
        if failed:
            print(f"oracle check failed on instances {', '.join(failed)}", file=sys.stderr)
            return EXIT_NUMERICAL
        return EXIT_OK

    if args.command == "solve":
        text = experiments.run_solve(config).text()
        with _output(args.out) as fh:
            fh.write(text)
        return EXIT_OK

    try:
        if args.command == "sweep":
            header, rows = experiments.run_bandwidth_sweep(config, args.scheme, args.points, jobs=args.jobs)
        elif args.command == "balance":
            header, rows = experiments.run_balance_report(config)
        else:
            header, rows = experiments.run_contour(config, args.grid, jobs=args.jobs)
    except ValueError as exc:
        if isinstance(exc, SC3Error):
            raise
        raise ConfigError(str(exc)) from None
    with _output(args.out) as fh:
        experiments.write_csv(header, rows, fh)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SC3Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
