"""This file contains the code for the WorkloadProfile and RateTable objects"""

# External imports
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple
import numpy as np

# Internal Imports
from src.errors import ConfigurationError
from src.topology.node_enums import NodeKind


RATE_TABLE_FIELDS = ("host_rates", "csd_rates")


@dataclass(frozen=True)
class RateTable:
    """
    Processing rate of one node class as a function of batch size.

    Entries are (batch_size, items/sec) pairs with strictly increasing
    batch sizes. A single entry describes a node whose rate does not depend
    on the batch size.
    """
    entries: Tuple[Tuple[int, float], ...]

    def __post_init__(self):
        # Accept any sequence of pairs, store an immutable tuple
        entries = tuple((int(batch), float(rate)) for batch, rate in self.entries)
        object.__setattr__(self, "entries", entries)

        if not entries:
            raise ConfigurationError("Rate table must have at least one entry")

        batch_sizes = [batch for batch, _ in entries]
        if any(batch < 1 for batch in batch_sizes):
            raise ConfigurationError("Rate table batch sizes must be at least 1")
        if any(b2 <= b1 for b1, b2 in zip(batch_sizes, batch_sizes[1:])):
            raise ConfigurationError("Rate table batch sizes must be strictly increasing")
        if not all(rate > 0 and math.isfinite(rate) for _, rate in entries):
            raise ConfigurationError("Rate table rates must be positive")

    @classmethod
    def flat(cls, rate: float) -> "RateTable":
        """Single-entry table: the same rate for every batch size"""
        return cls(entries=((1, rate),))

    @property
    def max_rate(self) -> float:
        return max(rate for _, rate in self.entries)

    def scaled(self, factor: float) -> "RateTable":
        """Divide every rate by a common factor"""
        return RateTable(entries=tuple((batch, rate / factor) for batch, rate in self.entries))

    def to_list(self) -> list:
        return [[batch, rate] for batch, rate in self.entries]


def rate_lookup(table: RateTable, batch_size: int) -> float:
    """
    Look up the processing rate for a batch size.

    Between two entries the rate is interpolated linearly against
    log(batch_size); outside the table the nearest entry's rate is used.
    An exact knot returns that knot's rate unchanged.

    Args:
        table: Rate table of one node class
        batch_size: Items per batch, at least 1

    Returns:
        float: items/sec
    """
    if batch_size < 1:
        raise ConfigurationError(f"Batch size must be at least 1, got {batch_size}")

    if len(table.entries) == 1:
        return table.entries[0][1]

    batch_sizes = np.log(np.array([batch for batch, _ in table.entries], dtype=float))
    rates = np.array([rate for _, rate in table.entries], dtype=float)

    return float(np.interp(math.log(batch_size), batch_sizes, rates))


@dataclass(frozen=True)
class WorkloadProfile:
    """
    A benchmark workload: how many items, how many bytes, and how fast each
    node class processes them.

    Attributes:
        name: Identifier of the benchmark
        total_items: Number of items (words, queries) in the closed workload
        dataset_input_bytes: Input data resident on flash
        avg_output_bytes_per_item: Result bytes produced per item
        host_rates: Rate table for the host
        csd_rates: Rate table for a single CSD
        host_end_to_end_rate: Host-only end-to-end rate, when it was measured
            separately from the micro-benchmark tables
    """
    name: str
    total_items: int
    dataset_input_bytes: float
    avg_output_bytes_per_item: float
    host_rates: RateTable
    csd_rates: RateTable
    host_end_to_end_rate: Optional[float] = None

    def __post_init__(self):
        if not self.name:
            raise ConfigurationError("Workload name must not be empty")

        if self.total_items <= 0:
            raise ConfigurationError("Total items must be a positive integer")

        if self.dataset_input_bytes < 0 or self.avg_output_bytes_per_item < 0:
            raise ConfigurationError("Byte sizes cannot be negative")

        if not isinstance(self.host_rates, RateTable) or not isinstance(self.csd_rates, RateTable):
            raise ConfigurationError("Host and CSD rates must be RateTable objects")

        if self.host_end_to_end_rate is not None and self.host_end_to_end_rate <= 0:
            raise ConfigurationError("Host end-to-end rate must be positive")

    @property
    def avg_input_bytes_per_item(self) -> float:
        return self.dataset_input_bytes / self.total_items

    @property
    def output_bytes_total(self) -> float:
        return self.avg_output_bytes_per_item * self.total_items

    def rates_for(self, kind: NodeKind) -> RateTable:
        """Rate table that applies to a node kind"""
        return self.host_rates if kind is NodeKind.HOST else self.csd_rates

    def rate_table(self, ref: str) -> RateTable:
        """
        Rate table by field name, as a NodeSpec refers to it.

        Raises:
            ConfigurationError: If ref names no rate table
        """
        if ref not in RATE_TABLE_FIELDS:
            raise ConfigurationError(
                f"Unknown rate table '{ref}', expected one of {', '.join(RATE_TABLE_FIELDS)}"
            )
        return getattr(self, ref)

    def host_only_rate(self, host_batch_size: int) -> float:
        """
        Rate of the host running alone. The measured end-to-end rate wins
        over the micro-benchmark table when the profile has one.
        """
        if self.host_end_to_end_rate is not None:
            return self.host_end_to_end_rate
        return rate_lookup(self.host_rates, host_batch_size)

    def scaled(self, factor: float) -> "WorkloadProfile":
        """
        Copy with every rate divided by a common factor, keeping the ratios
        between node classes.
        """
        if factor <= 0:
            raise ConfigurationError(f"Scale factor must be positive, got {factor}")
        end_to_end = self.host_end_to_end_rate
        return replace(
            self,
            host_rates=self.host_rates.scaled(factor),
            csd_rates=self.csd_rates.scaled(factor),
            host_end_to_end_rate=None if end_to_end is None else end_to_end / factor,
        )

    def with_total_items(self, total_items: int) -> "WorkloadProfile":
        """Copy covering only the first total_items items, same per-item sizes"""
        return replace(
            self,
            total_items=total_items,
            dataset_input_bytes=self.avg_input_bytes_per_item * total_items,
        )

    def host_only(self, host_batch_size: int) -> "WorkloadProfile":
        """Copy whose host table is flat at the host-only rate"""
        return replace(
            self,
            host_rates=RateTable.flat(self.host_only_rate(host_batch_size)),
        )


def rate_table_from_pairs(pairs: Sequence[Sequence[float]]) -> RateTable:
    """Build a RateTable from [[batch, rate], ...] as found in JSON documents"""
    try:
        return RateTable(entries=tuple((int(batch), float(rate)) for batch, rate in pairs))
    except (TypeError, ValueError) as err:
        if isinstance(err, ConfigurationError):
            raise
        raise ConfigurationError(f"Rate table must be a list of [batch, rate] pairs: {err}") from None
