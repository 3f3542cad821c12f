"""This file contains the subcommand implementations behind the command-line entry point"""

# External imports
import argparse
import logging
import sys
from dataclasses import replace
from typing import Optional, TextIO

# Internal Imports
from src.cli import reproduce as reproduction
from src.cli.scenario import Scenario, load_scenario
from src.errors import SimulateCSDError
from src.harness.coordinator import HarnessReport, coordinate
from src.harness.worker import worker_loop
from src.scheduler.config import SchedulerConfig
from src.scheduler.scheduler import calibrate_ratio, write_ledger_csv
from src.simulator.engine import run
from src.simulator.report import SimReport
from src.simulator.sweep import sweep, sweep_frame, write_sweep_csv
from src.topology.cluster import DEFAULT_CSD_CEILING, NodeSpec
from src.topology.factories.standard import StandardClusterFactory
from src.topology.loader import load_cluster
from src.topology.node_enums import NodeKind
from src.workload.factories.builtin import builtin_profile
from src.workload.serialization import load_profile


logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3
EXIT_HARNESS_ABORTED = 4


class CommandUsageError(SimulateCSDError):
    """Arguments that parse but make no sense together"""


def _int_list(text: Optional[str]):
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise CommandUsageError(f"Expected a comma separated list of integers, got '{text}'") from None


def build_scenario(args: argparse.Namespace) -> Scenario:
    """
    Scenario from --scenario, with any explicit flag taking precedence,
    or from the flags alone (36 CSDs unless --csds or --cluster says otherwise).

    Raises:
        CommandUsageError: If no profile or no batch size is given anywhere
    """
    scenario = load_scenario(args.scenario) if args.scenario else None

    if args.profile_file:
        profile = load_profile(args.profile_file)
    elif args.profile:
        profile = builtin_profile(args.profile)
    elif scenario is not None:
        profile = scenario.profile
    else:
        raise CommandUsageError("Give --scenario, --profile or --profile-file")
    if args.items is not None:
        profile = profile.with_total_items(args.items)

    if args.cluster:
        cluster = load_cluster(args.cluster)
    elif scenario is not None:
        cluster = scenario.cluster
    else:
        cluster = StandardClusterFactory().create_cluster(DEFAULT_CSD_CEILING)
    if getattr(args, "csds", None) is not None:
        cluster = cluster.with_csd_count(args.csds)

    if scenario is None and args.batch is None:
        raise CommandUsageError("Give --batch or a scenario with a scheduler section")
    scheduler = scenario.scheduler if scenario is not None else SchedulerConfig(csd_batch_size=args.batch)
    overrides = {}
    if args.batch is not None:
        overrides["csd_batch_size"] = args.batch
    if args.ratio is not None:
        overrides["batch_ratio"] = args.ratio
    if args.poll_ms is not None:
        overrides["poll_interval"] = args.poll_ms / 1000
    if args.host_overhead is not None:
        overrides["host_assign_overhead"] = args.host_overhead
    scheduler = replace(scheduler, **overrides)

    if scenario is None:
        return Scenario(profile=profile, cluster=cluster, scheduler=scheduler)
    return replace(scenario, profile=profile, cluster=cluster, scheduler=scheduler)


def summary_text(report: SimReport) -> str:
    rows = [
        ("workload", report.workload),
        ("csd_count", str(report.csd_count)),
        ("batch_size", str(report.batch_size)),
        ("batch_ratio", f"{report.batch_ratio:g}"),
        ("total_items", str(report.total_items)),
        ("makespan_s", f"{report.makespan:.6f}"),
        ("throughput_items_per_s", f"{report.throughput:.6f}"),
        ("speedup", f"{report.speedup:.6f}"),
        ("csd_fraction_ledger", f"{report.csd_fraction:.6f}"),
        ("csd_fraction_paper", f"{report.csd_fraction_paper:.6f}"),
        ("mean_latency_s", f"{report.latency_stats.mean:.6f}"),
        ("p95_latency_s", f"{report.latency_stats.p95:.6f}"),
        ("bytes_retained_in_csd", f"{report.transfer.bytes_retained_in_csd:.0f}"),
        ("io_reduction_ratio", f"{report.transfer.io_reduction_ratio:.6f}"),
        *((f"util_{path}", f"{load:.6f}") for path, load in report.bandwidth.utilisation.items()),
        ("saturated_paths", ", ".join(report.bandwidth.saturated_paths) or "none"),
        ("wall_power_w", f"{report.energy.wall_power_w:.6f}"),
        ("energy_mj_per_item", f"{report.energy.energy_per_item_mj:.6f}"),
        ("energy_savings_percent", f"{report.energy.savings_percent:.6f}"),
    ]
    if report.energy.extrapolated:
        rows.append(("power", "interpolated between measured readings"))
    return "".join(f"{name:<24}{value}\n" for name, value in rows)


def cmd_simulate(args: argparse.Namespace, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    scenario = build_scenario(args)
    report = run(scenario.cluster, scenario.profile, scenario.scheduler)
    out.write(summary_text(report))

    output = args.out or scenario.output
    if output:
        write_sweep_csv([report], output)
    if args.ledger:
        write_ledger_csv(report.ledger, args.ledger)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    scenario = build_scenario(args)
    batch_sizes = _int_list(args.batches)
    csd_counts = _int_list(args.csd_counts)
    scenario = replace(
        scenario,
        batch_sizes=batch_sizes if batch_sizes is not None else scenario.batch_sizes,
        csd_counts=csd_counts if csd_counts is not None else scenario.csd_counts,
    )
    scenario.require_axes()

    reports = sweep(scenario.cluster.with_csd_count(0), scenario.profile, scenario.batch_sizes,
                    scenario.csd_counts, base_cfg=scenario.scheduler, processes=args.processes)

    output = args.out or scenario.output
    if output:
        write_sweep_csv(reports, output)
    else:
        out.write(sweep_frame(reports).write_csv(float_precision=6))
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    if not (args.host_rate > 0 and args.csd_rate > 0):
        raise CommandUsageError("Both rates must be positive")
    ratio, raw = calibrate_ratio(args.host_rate, args.csd_rate, args.policy)
    out.write(f"batch_ratio {ratio}\nraw_ratio {raw:.6f}\n")
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    targets = reproduction.TARGETS if args.target == reproduction.ALL else (args.target,)
    passed = True
    for target in targets:
        result = reproduction.reproduce(target)
        paths = reproduction.write_result(result, args.out, gnuplot=args.gnuplot)
        out.write(reproduction.comparison_text(result))
        for kind in sorted(paths):
            logger.info("Wrote %s %s", kind, paths[kind])
        passed = passed and result.passed
    return EXIT_OK if passed else EXIT_TOLERANCE


def _harness_inputs(args: argparse.Namespace):
    profile = builtin_profile(args.profile).scaled(args.scale)
    cfg = SchedulerConfig(
        csd_batch_size=args.batch,
        batch_ratio=args.ratio,
        poll_interval=args.poll_ms / 1000,
    )
    return profile, cfg


def harness_text(report: HarnessReport, predicted: Optional[SimReport]) -> str:
    lines = [f"{'valid':<24}{report.valid}"]
    if report.reason:
        lines.append(f"{'reason':<24}{report.reason}")
    lines.extend([
        f"{'total_items':<24}{report.total_items}",
        f"{'makespan_s':<24}{report.makespan:.6f}",
        f"{'throughput_items_per_s':<24}{report.throughput:.6f}",
    ])
    for node_id in sorted(report.per_node_items):
        lines.append(f"{'items ' + node_id:<24}{report.per_node_items[node_id]}")
    if predicted is not None and report.valid and predicted.throughput > 0:
        deviation = report.throughput / predicted.throughput - 1
        lines.append(f"{'simulated_items_per_s':<24}{predicted.throughput:.6f}")
        lines.append(f"{'deviation':<24}{deviation:+.4f}")
    return "\n".join(lines) + "\n"


def cmd_harness_coordinator(args: argparse.Namespace, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    profile, cfg = _harness_inputs(args)
    cluster = StandardClusterFactory().create_cluster(args.workers)

    report = coordinate(args.listen, cluster, profile, cfg, workdir=args.workdir, timeout=args.timeout,
                        total_items=args.items, spawn=args.spawn, mode=args.mode)
    predicted = None
    if report.valid and report.total_items > 0:
        predicted = run(cluster, profile.with_total_items(report.total_items), cfg)
    out.write(harness_text(report, predicted))
    if args.ledger:
        write_ledger_csv(report.ledger, args.ledger)
    return EXIT_OK if report.valid else EXIT_HARNESS_ABORTED


def cmd_harness_worker(args: argparse.Namespace, out: Optional[TextIO] = None) -> int:
    """Exit status is the worker's own: 0 drained, 1 connection lost, 2 protocol error"""
    profile, cfg = _harness_inputs(args)
    try:
        kind = NodeKind.parse(args.kind)
    except ValueError as err:
        raise CommandUsageError(str(err)) from None
    return worker_loop(args.connect, NodeSpec(args.node_id, kind), profile, cfg, args.workdir, mode=args.mode)

