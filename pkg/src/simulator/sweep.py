"""This file contains the parameter sweep over batch sizes and CSD counts"""

# External imports
import logging
import multiprocessing
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple
import polars as pl

# Internal Imports
from src.scheduler.config import SchedulerConfig
from src.simulator.engine import host_only_run, run
from src.simulator.report import SimReport
from src.topology.cluster import ClusterConfig
from src.workload.workload import WorkloadProfile


logger = logging.getLogger(__name__)


SWEEP_COLUMNS = [
    "workload", "csd_count", "batch_size", "batch_ratio",
    "throughput_items_per_s", "makespan_s", "csd_fraction_ledger",
    "csd_fraction_paper", "mean_latency_s", "p95_latency_s",
    "bytes_to_host", "energy_mj_per_item",
]

SWEEP_SCHEMA = {
    "workload": pl.Utf8,
    "csd_count": pl.Int64,
    "batch_size": pl.Int64,
    "batch_ratio": pl.Float64,
    "throughput_items_per_s": pl.Float64,
    "makespan_s": pl.Float64,
    "csd_fraction_ledger": pl.Float64,
    "csd_fraction_paper": pl.Float64,
    "mean_latency_s": pl.Float64,
    "p95_latency_s": pl.Float64,
    "bytes_to_host": pl.Float64,
    "energy_mj_per_item": pl.Float64,
}

Cell = Tuple[ClusterConfig, int, WorkloadProfile, SchedulerConfig, Optional[float]]


def _run_cell(cell: Cell) -> SimReport:
    template, csd_count, profile, cfg, host_only_throughput = cell
    try:
        if csd_count == 0:
            return host_only_run(profile, template, cfg)
        return run(template.with_csd_count(csd_count), profile, cfg, host_only_throughput=host_only_throughput)
    except ValueError as err:
        raise type(err)(
            f"batch_size={cfg.csd_batch_size}, csd_count={csd_count}: {err}"
        ) from err


def sweep(
        cluster: ClusterConfig,
        profile: WorkloadProfile,
        batch_sizes: Sequence[int],
        csd_counts: Sequence[int],
        base_cfg: Optional[SchedulerConfig] = None,
        host_only_throughput: Optional[float] = None,
        processes: int = 1
) -> List[SimReport]:
    """
    Run every (batch size, CSD count) pair.

    Args:
        cluster: Template cluster; its CSD inventory is rebuilt per cell
        profile: Workload
        batch_sizes: CSD batch sizes (B)
        csd_counts: CSD counts (N); N = 0 cells are the host-only baseline run
        base_cfg: Scheduler parameters other than B (ratio, poll, overhead)
        host_only_throughput: Reference rate passed to every run
        processes: Worker processes; cells are independent

    Returns:
        List[SimReport] in batch-major order, identical for any processes

    Raises:
        ValueError: If an axis is empty, or a run fails (message names the cell)
    """
    if not batch_sizes or not csd_counts:
        raise ValueError("Sweep axes must not be empty")

    base_cfg = base_cfg or SchedulerConfig(csd_batch_size=1)
    cells = [
        (cluster, count, profile, replace(base_cfg, csd_batch_size=batch), host_only_throughput)
        for batch in batch_sizes
        for count in csd_counts
    ]
    logger.info("Sweeping %s over %d cells", profile.name, len(cells))

    if processes > 1:
        with multiprocessing.get_context("spawn").Pool(processes) as pool:
            return pool.map(_run_cell, cells)
    return [_run_cell(cell) for cell in cells]


def sweep_frame(reports: Sequence[SimReport]) -> pl.DataFrame:
    """Sweep table with the fixed CSV header"""
    rows = [report.row() for report in reports]
    return pl.DataFrame(
        {column: [row[column] for row in rows] for column in SWEEP_COLUMNS},
        schema=SWEEP_SCHEMA,
    )


def write_sweep_csv(reports: Sequence[SimReport], output_path: str):
    sweep_frame(reports).write_csv(output_path, float_precision=6)
