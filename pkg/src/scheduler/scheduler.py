"""
This file contains the pull scheduler: ack-driven batch assignment on a
periodic wake-up, with no batch migration.
"""

# External imports
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple
import polars as pl

# Internal Imports
from src.errors import ConfigurationError, ProtocolViolationError
from src.scheduler.config import SchedulerConfig, batch_size_for, round_half_up
from src.scheduler.state import BatchAssignment, SchedulerState
from src.topology.cluster import ClusterConfig


LEDGER_COLUMNS = ["batch_id", "node_id", "start_index", "count", "assign_time"]


class PullScheduler:
    """
    The scheduler as a state machine. Every method is a synchronous
    transition on a SchedulerState passed in by the caller; the scheduler
    itself only holds the cluster and the configuration.
    """
    def __init__(self, cluster: ClusterConfig, cfg: SchedulerConfig):
        self.cluster = cluster
        self.cfg = cfg
        self._kinds = {node.id: node.kind for node in cluster.nodes}

    def new_state(self, total_items: int) -> SchedulerState:
        return SchedulerState(total_items=total_items)

    def batch_size(self, node_id: str) -> int:
        return batch_size_for(self._kinds[node_id], self.cfg)

    def seed(self, state: SchedulerState, time: float = 0.0) -> List[BatchAssignment]:
        """
        Initial assignment: every node counts as having just acked, host
        first then CSDs in inventory order. Not tied to a poll tick.
        """
        for node_id in self.cluster.seeding_order():
            self.on_ack(state, node_id, time)
        return self._drain(state, time)

    def on_ack(
            self,
            state: SchedulerState,
            node_id: str,
            time: float,
            batch_id: Optional[int] = None
    ) -> SchedulerState:
        """
        A node finished its batch (batch_id) or is asking for its first one
        (batch_id None) and waits for the next wake-up.

        Raises:
            ProtocolViolationError: Unknown node, node already queued, or
                node still holding a batch other than batch_id
        """
        if node_id not in self._kinds:
            raise ProtocolViolationError(f"Ack from unknown node '{node_id}'")

        held = state.outstanding.get(node_id)
        if held is not None and held != batch_id:
            raise ProtocolViolationError(
                f"Ack from node '{node_id}' at t={time:.3f} while batch {held} is in flight"
            )
        if held is None and batch_id is not None:
            raise ProtocolViolationError(
                f"Node '{node_id}' acked batch {batch_id} it does not hold"
            )
        if node_id in state.pending_acks:
            raise ProtocolViolationError(f"Node '{node_id}' is already waiting for a batch")

        state.outstanding.pop(node_id, None)
        state.pending_acks.append(node_id)
        return state

    def on_poll_tick(self, state: SchedulerState, time: float) -> Tuple[SchedulerState, List[BatchAssignment]]:
        """
        Wake-up: serve the waiting nodes in ack order.

        Returns:
            The state and the batches issued at this tick

        Raises:
            ProtocolViolationError: If time is not a multiple of the poll interval
        """
        poll = self.cfg.poll_interval
        if abs(time - round(time / poll) * poll) > 1e-9 * max(1.0, abs(time)):
            raise ProtocolViolationError(f"Poll tick at t={time} is off the {poll} s grid")
        return state, self._drain(state, time)

    def _drain(self, state: SchedulerState, time: float) -> List[BatchAssignment]:
        issued = []
        while state.pending_acks:
            node_id = state.pending_acks.popleft()
            if state.remaining <= 0:
                # Nodes acking after exhaustion get nothing
                state.exhausted = True
                continue

            count = min(self.batch_size(node_id), state.remaining)
            assignment = BatchAssignment(
                node_id=node_id,
                batch_id=len(state.assignments),
                start_index=state.next_index,
                count=count,
                assign_time=time,
            )
            state.assignments.append(assignment)
            state.outstanding[node_id] = assignment.batch_id
            state.next_index += count
            issued.append(assignment)

            if state.remaining == 0:
                state.exhausted = True
        return issued


def next_tick_time(time: float, poll_interval: float) -> float:
    """
    Earliest poll tick at or after time. Ticks are k * poll_interval for
    integer k, so an ack landing exactly on a tick is served by it.
    """
    k = math.ceil(time / poll_interval)
    while k > 0 and (k - 1) * poll_interval >= time:
        k -= 1
    while k * poll_interval < time:
        k += 1
    return k * poll_interval


def calibrate_ratio(host_rate: float, csd_rate: float, policy: str = "round") -> Tuple[int, float]:
    """
    Batch ratio from the two single-node rates.

    Args:
        host_rate: Host items/sec
        csd_rate: CSD items/sec
        policy: 'round', 'ceil' or 'floor'

    Returns:
        (quantized ratio, at least 1; raw ratio)

    Raises:
        ConfigurationError: If a rate is not positive or the policy is unknown
    """
    if host_rate <= 0 or csd_rate <= 0:
        raise ConfigurationError("Both rates must be positive to calibrate the batch ratio")

    raw = host_rate / csd_rate
    if policy == "round":
        ratio = round_half_up(raw)
    elif policy == "ceil":
        ratio = math.ceil(raw)
    elif policy == "floor":
        ratio = math.floor(raw)
    else:
        raise ConfigurationError(f"Unknown rounding policy '{policy}', expected round, ceil or floor")
    return max(1, int(ratio)), raw


@dataclass(frozen=True)
class LedgerEvent:
    """
    One transition in a recorded scheduler run.

    kind is 'seed', 'ack' or 'tick'; node_id and batch_id are set for acks.
    """
    kind: str
    time: float
    node_id: Optional[str] = None
    batch_id: Optional[int] = None


def replay(
        cluster: ClusterConfig,
        cfg: SchedulerConfig,
        total_items: int,
        events: Iterable[LedgerEvent]
) -> List[BatchAssignment]:
    """
    Feed a recorded seed/ack/tick sequence through a fresh state and
    return the resulting ledger.
    """
    scheduler = PullScheduler(cluster, cfg)
    state = scheduler.new_state(total_items)
    for event in events:
        if event.kind == "seed":
            scheduler.seed(state, event.time)
        elif event.kind == "ack":
            scheduler.on_ack(state, event.node_id, event.time, event.batch_id)
        elif event.kind == "tick":
            scheduler.on_poll_tick(state, event.time)
        else:
            raise ValueError(f"Unknown ledger event kind '{event.kind}'")
    return state.assignments


def ledger_frame(assignments: List[BatchAssignment]) -> pl.DataFrame:
    """Assignment ledger as a DataFrame with the CSV column order"""
    return pl.DataFrame(
        {
            "batch_id": [a.batch_id for a in assignments],
            "node_id": [a.node_id for a in assignments],
            "start_index": [a.start_index for a in assignments],
            "count": [a.count for a in assignments],
            "assign_time": [a.assign_time for a in assignments],
        },
        schema={
            "batch_id": pl.Int64,
            "node_id": pl.Utf8,
            "start_index": pl.Int64,
            "count": pl.Int64,
            "assign_time": pl.Float64,
        },
    )


def write_ledger_csv(assignments: List[BatchAssignment], output_path: str):
    ledger_frame(assignments).write_csv(output_path, float_precision=6)
