"""This file contains the scheduler configuration object"""

# External imports
import math
from dataclasses import dataclass
from typing import Optional

# Internal Imports
from src.errors import ConfigurationError
from src.topology.node_enums import NodeKind


DEFAULT_POLL_INTERVAL = 0.2


@dataclass(frozen=True)
class SchedulerConfig:
    """
    Parameters of the pull scheduler.

    Attributes:
        csd_batch_size: Items per CSD batch (B)
        batch_ratio: Host batch size over CSD batch size (R)
        poll_interval: Seconds between scheduler wake-ups
        host_assign_overhead: Seconds the host loses per assignment
        host_batch_size: Explicit host batch size, overriding round(R * B)
    """
    csd_batch_size: int
    batch_ratio: float = 1.0
    poll_interval: float = DEFAULT_POLL_INTERVAL
    host_assign_overhead: float = 0.0
    host_batch_size: Optional[int] = None

    def __post_init__(self):
        if self.csd_batch_size < 1:
            raise ConfigurationError("CSD batch size must be at least 1")
        if self.batch_ratio < 1:
            raise ConfigurationError("Batch ratio must be at least 1")
        if not self.poll_interval > 0:
            raise ConfigurationError("Poll interval must be positive")
        if self.host_assign_overhead < 0:
            raise ConfigurationError("Host assignment overhead cannot be negative")
        if self.host_batch_size is not None and self.host_batch_size < 1:
            raise ConfigurationError("Host batch size override must be at least 1")


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def batch_size_for(node_kind: NodeKind, cfg: SchedulerConfig) -> int:
    """
    Nominal batch size for a node kind.

    Csd -> B. Host -> round(R * B), at least 1, unless the config carries
    an explicit host batch size.
    """
    if node_kind is NodeKind.CSD:
        return cfg.csd_batch_size
    if cfg.host_batch_size is not None:
        return cfg.host_batch_size
    return max(1, round_half_up(cfg.batch_ratio * cfg.csd_batch_size))
