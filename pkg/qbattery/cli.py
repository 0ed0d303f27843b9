# qbattery/cli.py

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import List, Optional

from qbattery import __version__, create_runner
from qbattery.core.config import configure_logging
from qbattery.core.errors import EXIT_OK, EXIT_SOLVER, QBatteryError, VerificationError
from qbattery.models import KernelMode, SolutionMode
from qbattery.services.figures import FIGURES

logger = logging.getLogger(__name__)


def _add_mode_flags(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--mode",
        choices=[m.value for m in SolutionMode],
        default=None,
        help="override solution_mode from the config",
    )
    parser.add_argument(
        "--kernel",
        choices=[k.value for k in KernelMode],
        default=None,
        help="override kernel_mode from the config",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbattery",
        description="Charging dynamics of an open two-qubit quantum battery.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="closed-form run of one config to CSV")
    solve.add_argument("--config", required=True, type=Path)
    solve.add_argument("--out", required=True, type=Path, help="CSV output path")
    _add_mode_flags(solve)

    sweep = sub.add_parser("sweep", help="one CSV per sweep point plus index.csv")
    sweep.add_argument("--config", required=True, type=Path, help="sweep JSON")
    sweep.add_argument("--out", required=True, type=Path, help="output directory")
    _add_mode_flags(sweep)

    verify = sub.add_parser("verify", help="closed form against the reference solvers")
    verify.add_argument("--config", required=True, type=Path)
    verify.add_argument("--out", type=Path, default=None, help="report JSON (default stdout)")
    _add_mode_flags(verify)

    figure = sub.add_parser("figure", help="datasets and SVG of one figure")
    figure.add_argument("figure_id", choices=sorted(FIGURES))
    figure.add_argument("--out", required=True, type=Path, help="output directory")
    figure.add_argument(
        "--delta-fig2-caption",
        action="store_true",
        help="use Delta = 0.3 lambda for fig2a/fig2b",
    )
    figure.add_argument("--t-max", type=float, default=None, help="time window in lambda*t")
    _add_mode_flags(figure)

    return parser


def _dispatch(args: argparse.Namespace) -> int:
    runner = create_runner()
    mode = SolutionMode(args.mode) if args.mode else None
    kernel = KernelMode(args.kernel) if args.kernel else None

    if args.command == "solve":
        runner.run_single(args.config, args.out, mode, kernel)
    elif args.command == "sweep":
        asyncio.run(runner.run_sweep(args.config, args.out, mode, kernel))
    elif args.command == "verify":
        try:
            report = runner.run_verify(args.config, args.out, mode, kernel)
        except VerificationError as e:
            if args.out is None and e.report is not None:
                sys.stdout.buffer.write(e.report.to_bytes())
            raise
        if args.out is None:
            sys.stdout.buffer.write(report.to_bytes())
    elif args.command == "figure":
        asyncio.run(
            runner.run_figure(
                args.figure_id,
                args.out,
                delta_fig2_caption=args.delta_fig2_caption,
                t_max=args.t_max,
                solution_mode=mode,
                kernel_mode=kernel,
            )
        )
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level)
        return _dispatch(args)
    except QBatteryError as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        return e.exit_code
    except Exception as e:
        logger.exception(f"Unexpected failure: {e}")
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
