import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from modsymm.config import settings
from modsymm.core.exceptions import ModSymmError, SolverFailure
from modsymm.core.logging import logger
from modsymm.core.paths import OUTPUT_DIR
from modsymm.schemas.experiment_schema import FarFieldRecord, RunRecord, SelfTestResult
from modsymm.services.config_service import load_experiment_config
from modsymm.services.experiment_service import (
    run_convergence,
    run_errgrid,
    run_farfield,
    run_solve,
    write_table,
)
from modsymm.services.selftest_service import run_selftest

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2

# Flags shared by every sweep subcommand, mapped onto configuration keys
SWEEP_FLAGS = {
    "curve": "curve",
    "params": "params",
    "method": "method",
    "n": "n",
    "delta": "delta",
    "density": "density",
    "rhs_degree": "rhs_degree",
    "convention": "convention",
    "out": "out",
}


def _float_pair(text: str) -> tuple[float, float]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got '{text}'")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _add_sweep_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=Path, help="key=value configuration file.")
    parser.add_argument("--curve", help="Curve name: circle, ellipse, expblob.")
    parser.add_argument("--params", help="Comma separated curve parameters, e.g. 1,2.")
    parser.add_argument("--method", help="Comma separated methods: LS,DLS,BG,GC.")
    parser.add_argument("--n", help="Comma separated ascending degrees, e.g. 2,4,8.")
    parser.add_argument("--delta", help="Comma separated noise levels.")
    parser.add_argument("--density", help="Exact density name (default exp-sin).")
    parser.add_argument(
        "--rhs-degree",
        dest="rhs_degree",
        type=int,
        help="Forward map degree for the data; 0 = max(4n, 32), 10 uses a coarse degree-10 forward map.",
    )
    parser.add_argument("--convention", choices=["classic", "doubled"])
    parser.add_argument("--out", help="Output CSV path (default: stdout).")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modsymm",
        description="Modified Symm boundary integral solver for the exterior Laplace Dirichlet problem.",
    )
    parser.add_argument("--version", action="version", version=settings.APP_VERSION)
    commands = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("solve", "Solve and report; a singular system exits with code 2."),
        ("convergence", "Error table over methods, degrees and noise levels."),
        ("errgrid", "Field error on the 20x20 grid against a degree-32 reference."),
    ):
        _add_sweep_arguments(commands.add_parser(name, help=help_text))

    farfield = commands.add_parser("farfield", help="Field values approaching u_inf.")
    _add_sweep_arguments(farfield)
    farfield.add_argument(
        "--direction",
        type=_float_pair,
        action="append",
        help="Direction 'x,y'; may be repeated (default 1,0).",
    )
    farfield.add_argument(
        "--radii", type=_float_list, help="Comma separated ascending radii."
    )

    selftest = commands.add_parser("selftest", help="Run the built-in acceptance checks.")
    selftest.add_argument(
        "--out",
        type=Path,
        default=OUTPUT_DIR / "selftest.csv",
        help="Where to write the check table.",
    )
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    return {key: getattr(args, attr, None) for attr, key in SWEEP_FLAGS.items()}


def _run_sweep(args: argparse.Namespace) -> int:
    config = load_experiment_config(args.config, _overrides(args))
    if args.command == "farfield":
        records = run_farfield(config, args.direction, args.radii)
        header = FarFieldRecord.HEADER
    else:
        runner = {"solve": run_solve, "convergence": run_convergence, "errgrid": run_errgrid}
        records = runner[args.command](config)
        header = RunRecord.HEADER
    write_table(header, records, config.output)
    return EXIT_OK


def _run_selftest(args: argparse.Namespace) -> int:
    results = run_selftest()
    write_table(SelfTestResult.HEADER, results)
    write_table(SelfTestResult.HEADER, results, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_SOLVER


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            return _run_selftest(args)
        return _run_sweep(args)
    except SolverFailure as e:
        logger.error(f"{e.message} (condition {e.condition:.3e})")
        return EXIT_SOLVER
    except ModSymmError as e:
        logger.error(e.message)
        return e.exit_code
    except Exception:
        logger.exception("Unhandled exception")
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
