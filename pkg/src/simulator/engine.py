"""
This file contains the discrete-event engine that runs the pull scheduler
over a cluster and a closed workload.
"""

# External imports
import logging
from dataclasses import replace
from typing import Dict, List, Optional
import numpy as np

# Internal Imports
from src.energy.accounting import energy_report
from src.errors import ConfigurationError
from src.scheduler.config import SchedulerConfig, batch_size_for
from src.scheduler.scheduler import PullScheduler, next_tick_time
from src.scheduler.state import BatchAssignment
from src.simulator.events import EventKind, EventQueue
from src.simulator.report import LatencyStats, SimReport
from src.topology.cluster import ClusterConfig
from src.topology.node_enums import NodeKind
from src.transfer.accounting import account, check_bandwidth, csd_fraction_paper
from src.workload.workload import WorkloadProfile, rate_lookup


logger = logging.getLogger(__name__)


def item_latency(
        assignment: BatchAssignment,
        item_index_within_batch: int,
        rate: float,
        overhead: float = 0.0
) -> float:
    """
    Latency of one item under the closed-backlog model: every item arrives
    at t = 0, waits for its batch to be assigned, then for the items ahead
    of it in the same batch.
    """
    if not 0 <= item_index_within_batch < assignment.count:
        raise ValueError(
            f"Item index {item_index_within_batch} outside batch of {assignment.count}"
        )
    if not rate > 0:
        raise ValueError(f"Rate must be positive, got {rate}")
    return (item_index_within_batch + 1) / rate + (assignment.assign_time + overhead)


class Simulation:
    """
    One deterministic run. Batches start at their assign time, item j of a
    batch of n completes at t + overhead + (j + 1) / r and the batch at
    t + overhead + n / r, where r is the node's rate at its nominal batch
    size. A completion is an ack; acks are served at the next poll tick.
    """
    def __init__(
            self,
            cluster: ClusterConfig,
            profile: WorkloadProfile,
            cfg: SchedulerConfig,
            host_only_throughput: Optional[float] = None,
            self_referenced: bool = False
    ):
        self.cluster = cluster
        self.profile = profile
        self.cfg = cfg
        self.scheduler = PullScheduler(cluster, cfg)
        self.rates = self._node_rates()
        self.overheads = {
            node.id: (cfg.host_assign_overhead if node.kind is NodeKind.HOST else 0.0)
            for node in cluster.nodes
        }
        self.host_only_throughput = host_only_throughput
        self.self_referenced = self_referenced

    def _node_rates(self) -> Dict[str, float]:
        """
        Rate of every node at its nominal batch size.

        Raises:
            ConfigurationError: If a rate is not positive
        """
        rates = {}
        for node in self.cluster.nodes:
            rate = rate_lookup(self.profile.rate_table(node.rate_table_ref), batch_size_for(node.kind, self.cfg))
            if not rate > 0:
                raise ConfigurationError(f"Node '{node.id}' has non-positive rate {rate}")
            rates[node.id] = rate
        return rates

    def run(self) -> SimReport:
        scheduler = self.scheduler
        state = scheduler.new_state(self.profile.total_items)
        queue = EventQueue()
        completion_times: Dict[int, float] = {}

        def start(assignments: List[BatchAssignment]):
            for assignment in assignments:
                node_id = assignment.node_id
                done = (assignment.assign_time + self.overheads[node_id]
                        + assignment.count / self.rates[node_id])
                completion_times[assignment.batch_id] = done
                queue.push(done, EventKind.BATCH_COMPLETE, node_id=node_id, batch_id=assignment.batch_id)

        start(scheduler.seed(state, 0.0))

        # Ticks are only scheduled while someone is waiting; empty ticks are no-ops
        tick_pending = False
        while not queue.is_empty():
            event = queue.pop()
            if event.kind is EventKind.BATCH_COMPLETE:
                scheduler.on_ack(state, event.node_id, event.time, event.batch_id)
                if not tick_pending:
                    queue.push(next_tick_time(event.time, self.cfg.poll_interval), EventKind.POLL_TICK)
                    tick_pending = True
            else:
                tick_pending = False
                _, issued = scheduler.on_poll_tick(state, event.time)
                start(issued)

        return self._report(state.assignments, completion_times)

    def _latencies(self, ledger: List[BatchAssignment]) -> np.ndarray:
        counts = np.array([a.count for a in ledger], dtype=np.int64)
        offsets = np.array([a.assign_time + self.overheads[a.node_id] for a in ledger])
        rates = np.array([self.rates[a.node_id] for a in ledger])

        starts = np.cumsum(counts) - counts
        within = np.arange(counts.sum()) - np.repeat(starts, counts)
        return (within + 1) / np.repeat(rates, counts) + np.repeat(offsets, counts)

    def _report(self, ledger: List[BatchAssignment], completion_times: Dict[int, float]) -> SimReport:
        profile = self.profile
        cluster = self.cluster

        per_node_items = {node.id: 0 for node in cluster.nodes}
        for assignment in ledger:
            per_node_items[assignment.node_id] += assignment.count

        makespan = max(completion_times.values())
        throughput = profile.total_items / makespan

        # A cluster without CSDs is its own host-only reference
        if self.self_referenced or (self.host_only_throughput is None and cluster.csd_count == 0):
            host_only = throughput
        elif self.host_only_throughput is not None:
            host_only = self.host_only_throughput
        else:
            host_only = profile.host_only_rate(batch_size_for(NodeKind.HOST, self.cfg))

        csd_items = profile.total_items - per_node_items[cluster.host.id]
        transfer = account(profile, per_node_items, host_id=cluster.host.id)
        bandwidth = check_bandwidth(transfer, cluster.paths, makespan, cluster.csd_count)
        if bandwidth.saturated_paths:
            logger.warning(
                "%s with %d CSDs would saturate %s", profile.name, cluster.csd_count,
                ", ".join(bandwidth.saturated_paths),
            )
        fraction_paper = csd_fraction_paper(throughput, host_only) if throughput >= host_only else 0.0

        logger.debug(
            "%s: %d CSDs, B=%d, R=%s -> %.3f items/s over %.3f s",
            profile.name, cluster.csd_count, self.cfg.csd_batch_size,
            self.cfg.batch_ratio, throughput, makespan,
        )

        return SimReport(
            workload=profile.name,
            csd_count=cluster.csd_count,
            batch_size=self.cfg.csd_batch_size,
            batch_ratio=self.cfg.batch_ratio,
            makespan=makespan,
            throughput=throughput,
            per_node_items=per_node_items,
            csd_fraction=csd_items / profile.total_items,
            csd_fraction_paper=fraction_paper,
            host_only_throughput=host_only,
            latency_stats=LatencyStats.from_samples(self._latencies(ledger)),
            transfer=transfer,
            bandwidth=bandwidth,
            energy=energy_report(cluster.power, cluster.csd_count, throughput, host_only, makespan),
            ledger=list(ledger),
            completion_times=dict(completion_times),
        )


def run(
        cluster: ClusterConfig,
        profile: WorkloadProfile,
        cfg: SchedulerConfig,
        host_only_throughput: Optional[float] = None
) -> SimReport:
    """
    Simulate the scheduler over a cluster and workload.

    Args:
        cluster: Host and CSDs
        profile: Closed workload, all items present at t = 0
        cfg: Scheduler parameters
        host_only_throughput: Reference for the throughput-derived CSD fraction and
            energy normalization; defaults to the profile's host-only rate, or
            to the run itself when the cluster has no CSDs

    Returns:
        SimReport

    Raises:
        ConfigurationError: If a node rate is not positive
    """
    return Simulation(cluster, profile, cfg, host_only_throughput=host_only_throughput).run()


def host_only_run(
        profile: WorkloadProfile,
        cluster: ClusterConfig,
        cfg: Optional[SchedulerConfig] = None
) -> SimReport:
    """
    The baseline setup: the host alone, one batch covering the whole
    workload, at the host-only rate (the end-to-end rate when the profile
    has one). Normalizes to itself.
    """
    poll_interval = cfg.poll_interval if cfg is not None else SchedulerConfig(csd_batch_size=1).poll_interval
    nominal_host_batch = (batch_size_for(NodeKind.HOST, cfg) if cfg is not None
                          else profile.total_items)

    baseline_cfg = SchedulerConfig(
        csd_batch_size=1,
        poll_interval=poll_interval,
        host_batch_size=profile.total_items,
    )
    baseline_profile = profile.host_only(nominal_host_batch)
    baseline_cluster = cluster.with_csd_count(0)

    report = Simulation(baseline_cluster, baseline_profile, baseline_cfg, self_referenced=True).run()
    # Report the scenario's batch parameters, not the single-batch ones
    if cfg is not None:
        report = replace(report, batch_size=cfg.csd_batch_size, batch_ratio=cfg.batch_ratio)
    return report
