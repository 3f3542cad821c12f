"""
Data movement accounting: which bytes crossed which path, and which never
left the drive.
"""

# External imports
from dataclasses import dataclass, field
from typing import Dict, List, Mapping

# Internal Imports
from src.errors import AccountingError, ThroughputError
from src.topology.cluster import DataPathSpec
from src.workload.workload import WorkloadProfile


@dataclass(frozen=True)
class TransferReport:
    """
    Bytes moved per data path.

    Attributes:
        bytes_input_to_host: Inputs read by the host over NVMe
        bytes_retained_in_csd: Inputs processed in-storage, never sent out
        bytes_output_to_host: CSD results sent over the tunnel
        bytes_output_total: Results produced by every node
        io_reduction_ratio: bytes_retained_in_csd / dataset_input_bytes
    """
    bytes_input_to_host: float
    bytes_retained_in_csd: float
    bytes_output_to_host: float
    bytes_output_total: float
    io_reduction_ratio: float


@dataclass(frozen=True)
class BandwidthCheck:
    """Post-hoc path utilisation over a run: busy seconds and average load"""
    seconds: Dict[str, float]
    utilisation: Dict[str, float]
    saturated_paths: List[str] = field(default_factory=list)


def account(profile: WorkloadProfile, per_node_items: Mapping[str, int], host_id: str = "host") -> TransferReport:
    """
    Account data movement from the items each node processed. Every node
    other than host_id is a CSD.

    Host items read their inputs over NVMe and keep their outputs in host
    memory. CSD items read flash internally and send only their outputs
    over the tunnel.

    Raises:
        AccountingError: If the counts do not add up to total_items
    """
    total = sum(per_node_items.values())
    if total != profile.total_items:
        raise AccountingError(
            f"Per-node items sum to {total}, workload '{profile.name}' has {profile.total_items}"
        )
    if any(count < 0 for count in per_node_items.values()):
        raise AccountingError("Per-node item counts cannot be negative")

    host_items = per_node_items.get(host_id, 0)
    csd_items = total - host_items

    bytes_retained = csd_items * profile.avg_input_bytes_per_item
    return TransferReport(
        bytes_input_to_host=host_items * profile.avg_input_bytes_per_item,
        bytes_retained_in_csd=bytes_retained,
        bytes_output_to_host=csd_items * profile.avg_output_bytes_per_item,
        bytes_output_total=total * profile.avg_output_bytes_per_item,
        io_reduction_ratio=(bytes_retained / profile.dataset_input_bytes
                            if profile.dataset_input_bytes > 0 else 0.0),
    )


def csd_fraction_paper(throughput_with: float, throughput_host_only: float) -> float:
    """
    Share of the work done in storage, from throughputs alone:
    (T_with - T_host) / T_with.

    Raises:
        ThroughputError: Unless throughput_with >= throughput_host_only > 0
    """
    if not throughput_host_only > 0:
        raise ThroughputError(f"Host-only throughput must be positive, got {throughput_host_only}")
    if throughput_with < throughput_host_only:
        raise ThroughputError(
            f"Throughput with CSDs ({throughput_with}) is below host-only ({throughput_host_only})"
        )
    return (throughput_with - throughput_host_only) / throughput_with


def check_bandwidth(
        report: TransferReport,
        paths: DataPathSpec,
        makespan: float,
        csd_count: int
) -> BandwidthCheck:
    """
    Compare the bytes each path carried over the run against its bandwidth.
    The internal flash path is per drive, so it is scaled by csd_count.
    A path is saturated when its busy time exceeds the makespan.
    """
    seconds = {
        "nvme_host": report.bytes_input_to_host / paths.nvme_host_bandwidth,
        "tunnel": report.bytes_output_to_host / paths.tunnel_bandwidth,
        "isp_internal": (report.bytes_retained_in_csd / (paths.isp_internal_bandwidth * csd_count)
                         if csd_count > 0 else 0.0),
    }
    utilisation = {
        path: (busy / makespan if makespan > 0 else 0.0) for path, busy in seconds.items()
    }
    saturated = [path for path, load in utilisation.items() if load > 1.0]
    return BandwidthCheck(seconds=seconds, utilisation=utilisation, saturated_paths=saturated)
