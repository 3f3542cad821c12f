"""This file contains the code for the cluster description objects"""

# External imports
from dataclasses import dataclass, field, replace
from typing import List

# Internal Imports
from src.errors import ConfigurationError, ReferenceCountError
from src.topology.node_enums import NodeKind


DEFAULT_CSD_CEILING = 36


@dataclass(frozen=True)
class NodeSpec:
    """A processing node: the host or one CSD's in-storage engine"""
    id: str
    kind: NodeKind

    def __post_init__(self):
        if not self.id or any(ch.isspace() for ch in self.id):
            raise ConfigurationError(f"Node id must be a non-empty word, got '{self.id}'")
        if not isinstance(self.kind, NodeKind):
            raise ConfigurationError(f"Node kind must be a NodeKind enum, got {type(self.kind)}")

    @property
    def rate_table_ref(self) -> str:
        """Name of the profile rate table that applies to this node"""
        return "host_rates" if self.kind is NodeKind.HOST else "csd_rates"


@dataclass(frozen=True)
class DataPathSpec:
    """
    Bandwidths of the three data paths, in bytes/sec.

    nvme_host_bandwidth: flash to host over NVMe
    tunnel_bandwidth: in-storage engine to host over the TCP/IP tunnel
    isp_internal_bandwidth: flash to the in-storage engine, per drive
    """
    nvme_host_bandwidth: float = 3.2e9
    tunnel_bandwidth: float = 100e6
    isp_internal_bandwidth: float = 3.2e9

    def __post_init__(self):
        for name in ("nvme_host_bandwidth", "tunnel_bandwidth", "isp_internal_bandwidth"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"paths.{name} must be > 0")


@dataclass(frozen=True)
class PowerModel:
    """
    Whole-server power, as measured at the wall.

    Attributes:
        idle_base_w: Idle server without drives
        idle_per_csd_w: Idle increment per installed CSD
        active_total_no_isp_w: Benchmark running, drives acting as storage only
        active_per_isp_w: Increment per enabled in-storage engine
        num_csds_reference: Drive count the measurements were taken with
    """
    idle_base_w: float = 167.0
    idle_per_csd_w: float = (405.0 - 167.0) / 36
    active_total_no_isp_w: float = 482.0
    active_per_isp_w: float = (492.0 - 482.0) / 36
    num_csds_reference: int = 36

    def __post_init__(self):
        for name in ("idle_base_w", "idle_per_csd_w", "active_total_no_isp_w",
                     "active_per_isp_w", "num_csds_reference"):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"power.{name} cannot be negative")
        if not self.active_total_no_isp_w > self.idle_base_w:
            raise ConfigurationError(
                "power.active_total_no_isp_w must be greater than power.idle_base_w"
            )

    def idle_total(self, csd_count: int) -> float:
        """Idle wall power with csd_count drives installed"""
        return self.idle_base_w + csd_count * self.idle_per_csd_w

    def active_total(self, isp_count: int) -> float:
        """Wall power while running with isp_count engines enabled"""
        return self.active_total_no_isp_w + isp_count * self.active_per_isp_w


def derive_per_csd_idle(power: PowerModel) -> float:
    """
    Idle power attributed to one drive: the idle increase over the bare
    server, spread over the reference drive count.

    Raises:
        ReferenceCountError: If num_csds_reference is zero
    """
    if power.num_csds_reference <= 0:
        raise ReferenceCountError("Reference CSD count must be positive to derive per-drive power")
    idle_with_drives = power.idle_total(power.num_csds_reference)
    return (idle_with_drives - power.idle_base_w) / power.num_csds_reference


def derive_per_isp_active(power: PowerModel) -> float:
    """
    Active power attributed to one in-storage engine: the increase over the
    storage-only run, spread over the reference drive count.

    Raises:
        ReferenceCountError: If num_csds_reference is zero
    """
    if power.num_csds_reference <= 0:
        raise ReferenceCountError("Reference CSD count must be positive to derive per-engine power")
    active_with_isp = power.active_total(power.num_csds_reference)
    return (active_with_isp - power.active_total_no_isp_w) / power.num_csds_reference


def power_model_from_measurements(
        idle_base_w: float,
        idle_with_drives_w: float,
        active_no_isp_w: float,
        active_with_isp_w: float,
        num_csds_reference: int
) -> PowerModel:
    """
    Build a PowerModel from the four wall-meter readings.

    Raises:
        ReferenceCountError: If num_csds_reference is zero
    """
    if num_csds_reference <= 0:
        raise ReferenceCountError("Reference CSD count must be positive to derive per-drive power")
    return PowerModel(
        idle_base_w=idle_base_w,
        idle_per_csd_w=(idle_with_drives_w - idle_base_w) / num_csds_reference,
        active_total_no_isp_w=active_no_isp_w,
        active_per_isp_w=(active_with_isp_w - active_no_isp_w) / num_csds_reference,
        num_csds_reference=num_csds_reference,
    )


@dataclass(frozen=True)
class ClusterConfig:
    """
    A host and its CSDs, with data paths and the power model.

    Attributes:
        nodes: Node inventory, host first by convention
        paths: Data path bandwidths
        power: Wall power model
        csd_ceiling: Largest allowed CSD count (drive bays)
    """
    nodes: List[NodeSpec]
    paths: DataPathSpec = field(default_factory=DataPathSpec)
    power: PowerModel = field(default_factory=PowerModel)
    csd_ceiling: int = DEFAULT_CSD_CEILING

    def __post_init__(self):
        object.__setattr__(self, "nodes", list(self.nodes))

        ids = [node.id for node in self.nodes]
        duplicates = sorted({node_id for node_id in ids if ids.count(node_id) > 1})
        if duplicates:
            raise ConfigurationError(f"Duplicate node ids: {', '.join(duplicates)}")

        host_count = sum(1 for node in self.nodes if node.kind is NodeKind.HOST)
        if host_count != 1:
            raise ConfigurationError(f"Cluster must have exactly one host node, got {host_count}")

        if not 0 <= self.csd_count <= self.csd_ceiling:
            raise ConfigurationError(
                f"CSD count must be between 0 and {self.csd_ceiling}, got {self.csd_count}"
            )

    @property
    def host(self) -> NodeSpec:
        return next(node for node in self.nodes if node.kind is NodeKind.HOST)

    @property
    def csds(self) -> List[NodeSpec]:
        return [node for node in self.nodes if node.kind is NodeKind.CSD]

    @property
    def csd_count(self) -> int:
        return len(self.csds)

    def node(self, node_id: str) -> NodeSpec:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise KeyError(f"No node with id '{node_id}'")

    def seeding_order(self) -> List[str]:
        """Host first, then CSDs in inventory order"""
        return [self.host.id] + [node.id for node in self.csds]

    def with_csd_count(self, csd_count: int) -> "ClusterConfig":
        """Copy with csd1..csdN replacing the current CSD inventory"""
        nodes = [self.host] + [
            NodeSpec(id=f"csd{i + 1}", kind=NodeKind.CSD) for i in range(csd_count)
        ]
        return replace(self, nodes=nodes)
