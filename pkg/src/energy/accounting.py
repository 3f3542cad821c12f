"""
Whole-server energy accounting: energy per item from wall power and
throughput, and savings against the host-only setup.
"""

# External imports
from dataclasses import dataclass
from typing import Dict, Mapping

# Internal Imports
from src.errors import ConfigurationError, ThroughputError
from src.topology.cluster import PowerModel


@dataclass(frozen=True)
class EnergyReport:
    """
    Attributes:
        wall_power_w: Average wall power during the run
        energy_per_item_mj: wall_power_w / throughput * 1000
        normalized_to_host_only: energy_per_item / host-only energy_per_item
        savings_percent: (1 - normalized) * 100
        total_energy_j: wall_power_w * makespan
        extrapolated: Power for an engine count other than 0 or the reference
    """
    wall_power_w: float
    energy_per_item_mj: float
    normalized_to_host_only: float
    savings_percent: float
    total_energy_j: float = 0.0
    extrapolated: bool = False


def wall_power(power: PowerModel, active_isp_count: int) -> float:
    """
    Wall power with active_isp_count engines enabled.

    Raises:
        ConfigurationError: If the count is outside [0, num_csds_reference]
    """
    if not 0 <= active_isp_count <= power.num_csds_reference:
        raise ConfigurationError(
            f"Active engine count must be between 0 and {power.num_csds_reference}, "
            f"got {active_isp_count}"
        )
    return power.active_total(active_isp_count)


def is_extrapolated(power: PowerModel, active_isp_count: int) -> bool:
    """Only the storage-only and all-engines readings were measured"""
    return active_isp_count not in (0, power.num_csds_reference)


def energy_per_item(power_w: float, throughput: float) -> float:
    """
    Millijoules per item.

    Raises:
        ThroughputError: If throughput is not positive
    """
    if not throughput > 0:
        raise ThroughputError(f"Throughput must be positive to compute energy per item, got {throughput}")
    return power_w / throughput * 1000


def savings(host_only_mj: float, with_csd_mj: float) -> float:
    """Percent energy saved per item against the host-only setup"""
    if not (host_only_mj > 0 and with_csd_mj > 0):
        raise ThroughputError("Energy per item values must be positive")
    return (1 - with_csd_mj / host_only_mj) * 100


def total_energy_j(power_w: float, makespan: float) -> float:
    return power_w * makespan


def energy_report(
        power: PowerModel,
        active_isp_count: int,
        throughput: float,
        host_only_throughput: float,
        makespan: float = 0.0
) -> EnergyReport:
    """
    Energy accounting of one run against the host-only reference, which
    runs with every engine disabled.
    """
    power_w = wall_power(power, active_isp_count)
    per_item = energy_per_item(power_w, throughput)
    host_only = energy_per_item(wall_power(power, 0), host_only_throughput)
    normalized = per_item / host_only
    return EnergyReport(
        wall_power_w=power_w,
        energy_per_item_mj=per_item,
        normalized_to_host_only=normalized,
        savings_percent=(1 - normalized) * 100,
        total_energy_j=total_energy_j(power_w, makespan),
        extrapolated=is_extrapolated(power, active_isp_count),
    )


def normalized_series(energy_by_csd_count: Mapping[int, float]) -> Dict[int, float]:
    """
    Energy per item normalized to the zero-CSD entry.

    Raises:
        ConfigurationError: If there is no zero-CSD entry
    """
    if 0 not in energy_by_csd_count:
        raise ConfigurationError("Normalization needs the host-only (0 CSD) entry")
    base = energy_by_csd_count[0]
    return {count: value / base for count, value in sorted(energy_by_csd_count.items())}
