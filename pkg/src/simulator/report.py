"""This file contains the simulation report objects"""

# External imports
from dataclasses import dataclass, field
from typing import Dict, List, Optional
import numpy as np

# Internal Imports
from src.energy.accounting import EnergyReport
from src.scheduler.state import BatchAssignment
from src.transfer.accounting import BandwidthCheck, TransferReport


@dataclass(frozen=True)
class LatencyStats:
    """Per-item latency summary, in seconds"""
    mean: float
    p50: float
    p95: float
    max: float

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "LatencyStats":
        if samples.size == 0:
            return cls(mean=0.0, p50=0.0, p95=0.0, max=0.0)
        p50, p95 = np.percentile(samples, [50, 95])
        return cls(
            mean=float(samples.mean()),
            p50=float(p50),
            p95=float(p95),
            max=float(samples.max()),
        )


@dataclass(frozen=True)
class SimReport:
    """
    Outcome of one simulated run.

    Attributes:
        workload: Profile name
        csd_count: CSDs in the cluster
        batch_size: CSD batch size (B)
        batch_ratio: Batch ratio (R)
        makespan: Seconds from the first assignment to the last completion
        throughput: total_items / makespan
        per_node_items: Items processed per node id
        csd_fraction: Share of items processed on CSDs, from the ledger
        csd_fraction_paper: (T_with - T_host_only) / T_with
        host_only_throughput: Reference rate of the host running alone
        latency_stats: Per-item latency summary
        transfer: Data movement accounting
        bandwidth: Post-hoc data path utilisation, saturated paths flagged
        energy: Energy accounting
        ledger: Every batch issued
        completion_times: Batch id -> completion time
    """
    workload: str
    csd_count: int
    batch_size: int
    batch_ratio: float
    makespan: float
    throughput: float
    per_node_items: Dict[str, int]
    csd_fraction: float
    csd_fraction_paper: float
    host_only_throughput: float
    latency_stats: LatencyStats
    transfer: TransferReport
    bandwidth: BandwidthCheck
    energy: EnergyReport
    ledger: List[BatchAssignment] = field(default_factory=list, repr=False)
    completion_times: Dict[int, float] = field(default_factory=dict, repr=False)

    @property
    def total_items(self) -> int:
        return sum(self.per_node_items.values())

    @property
    def speedup(self) -> float:
        return self.throughput / self.host_only_throughput

    def row(self) -> Dict[str, Optional[float]]:
        """One sweep-table row, in CSV column order"""
        return {
            "workload": self.workload,
            "csd_count": self.csd_count,
            "batch_size": self.batch_size,
            "batch_ratio": self.batch_ratio,
            "throughput_items_per_s": self.throughput,
            "makespan_s": self.makespan,
            "csd_fraction_ledger": self.csd_fraction,
            "csd_fraction_paper": self.csd_fraction_paper,
            "mean_latency_s": self.latency_stats.mean,
            "p95_latency_s": self.latency_stats.p95,
            "bytes_to_host": self.transfer.bytes_input_to_host + self.transfer.bytes_output_to_host,
            "energy_mj_per_item": self.energy.energy_per_item_mj,
        }
