"""This file contains the command-line entry point"""

# External imports
import argparse
import logging
import sys
from typing import List, Optional

# Internal Imports
from src.cli import commands
from src.cli.reproduce import ALL, TARGETS
from src.errors import ConfigurationError, SimulateCSDError
from src.harness.busywork import MODES, SPIN
from src.harness.coordinator import DEFAULT_TIMEOUT
from src.workload.factories.builtin import BuiltinProfileFactory


logger = logging.getLogger(__name__)


class UsageExitParser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; here 2 means an invalid configuration"""
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(commands.EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_scenario_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--scenario", help="Scenario JSON file")
    parser.add_argument("--profile", help="Builtin workload profile name")
    parser.add_argument("--profile-file", help="Workload profile JSON file")
    parser.add_argument("--cluster", help="Cluster JSON file")
    parser.add_argument("--batch", type=int, help="CSD batch size (B)")
    parser.add_argument("--ratio", type=float, help="Host over CSD batch size (R)")
    parser.add_argument("--poll-ms", type=float, help="Scheduler poll interval in milliseconds")
    parser.add_argument("--host-overhead", type=float, help="Seconds the host loses per assignment")
    parser.add_argument("--items", type=int, help="Only the first ITEMS items of the workload")
    parser.add_argument("--out", help="CSV output path")


def _add_harness_arguments(parser: argparse.ArgumentParser, workdir_required: bool = False):
    parser.add_argument("--profile", required=True, choices=BuiltinProfileFactory().available_profiles())
    parser.add_argument("--batch", type=int, required=True, help="CSD batch size (B)")
    parser.add_argument("--ratio", type=float, default=1.0, help="Host over CSD batch size (R)")
    parser.add_argument("--poll-ms", type=float, default=200.0, help="Scheduler poll interval in milliseconds")
    parser.add_argument("--scale", type=float, default=1.0, help="Divide every rate by SCALE")
    parser.add_argument("--workdir", required=workdir_required, help="Shared directory for index files")
    parser.add_argument("--mode", choices=MODES, default=SPIN, help="Synthetic work mode")


def build_parser() -> argparse.ArgumentParser:
    parser = UsageExitParser(prog="simulatecsd", description="Host + computational storage cluster simulator")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=UsageExitParser)

    simulate = subparsers.add_parser("simulate", help="Run one scenario")
    _add_scenario_arguments(simulate)
    simulate.add_argument("--csds", type=int, help="Number of CSDs")
    simulate.add_argument("--ledger", help="Assignment ledger CSV output path")
    simulate.set_defaults(handler=commands.cmd_simulate)

    sweep = subparsers.add_parser("sweep", help="Sweep batch sizes and CSD counts")
    _add_scenario_arguments(sweep)
    sweep.add_argument("--batches", help="Comma separated CSD batch sizes")
    sweep.add_argument("--csd-counts", help="Comma separated CSD counts")
    sweep.add_argument("--processes", type=int, default=1, help="Worker processes")
    sweep.set_defaults(handler=commands.cmd_sweep)

    calibrate = subparsers.add_parser("calibrate", help="Batch ratio from host and CSD rates")
    calibrate.add_argument("--host-rate", type=float, required=True)
    calibrate.add_argument("--csd-rate", type=float, required=True)
    calibrate.add_argument("--policy", choices=("round", "ceil", "floor"), default="round")
    calibrate.set_defaults(handler=commands.cmd_calibrate)

    reproduce = subparsers.add_parser("reproduce", help="Reproduce a published figure or table")
    reproduce.add_argument("target", choices=TARGETS + (ALL,))
    reproduce.add_argument("--out", default="results", help="Output directory")
    reproduce.add_argument("--gnuplot", action="store_true", help="Also write a gnuplot script")
    reproduce.set_defaults(handler=commands.cmd_reproduce)

    coordinator = subparsers.add_parser("harness-coordinator", help="Schedule live workers")
    _add_harness_arguments(coordinator)
    coordinator.add_argument("--listen", help="unix:<path> or host:port (default: socket in workdir)")
    coordinator.add_argument("--workers", type=int, required=True, help="Number of CSD workers")
    coordinator.add_argument("--items", type=int, help="Only the first ITEMS items of the workload")
    coordinator.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT, help="Seconds of worker silence")
    coordinator.add_argument("--spawn", action="store_true", help="Start the host and CSD workers locally")
    coordinator.add_argument("--ledger", help="Assignment ledger CSV output path")
    coordinator.set_defaults(handler=commands.cmd_harness_coordinator)

    worker = subparsers.add_parser("harness-worker", help="Run one live worker")
    # A standalone worker cannot discover the coordinator's temp dir
    _add_harness_arguments(worker, workdir_required=True)
    worker.add_argument("--connect", required=True, help="Coordinator address")
    worker.add_argument("--node-id", required=True)
    worker.add_argument("--kind", default="csd", help="host or csd")
    worker.set_defaults(handler=commands.cmd_harness_worker)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else commands.EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        return args.handler(args)
    except commands.CommandUsageError as err:
        print(f"simulatecsd: error: {err}", file=sys.stderr)
        return commands.EXIT_USAGE
    except (ConfigurationError, OSError) as err:
        print(f"simulatecsd: invalid configuration: {err}", file=sys.stderr)
        return commands.EXIT_CONFIG
    except SimulateCSDError as err:
        logger.error("%s", err)
        return commands.EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
