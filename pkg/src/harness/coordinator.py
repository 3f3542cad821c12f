"""
This file contains the coordinator side of the live harness.

One reader thread per worker connection and a tick thread feed a single
queue. Only the consumer of that queue (the thread calling run) touches the
scheduler state.
"""

# External imports
import logging
import multiprocessing
import os
import queue
import tempfile
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Set

# Internal Imports
from src.errors import ConfigurationError, HarnessTimeoutError, ProtocolViolationError
from src.harness.busywork import SPIN
from src.harness.index_files import SharedIndexFile, remove_all_indexes, write_index
from src.harness.transport import Address, LineChannel, bound_address, listen, parse_address
from src.harness.wire import MessageKind, WireMessage
from src.harness.worker import worker_loop
from src.scheduler.config import SchedulerConfig
from src.scheduler.scheduler import LedgerEvent, PullScheduler
from src.scheduler.state import BatchAssignment
from src.topology.cluster import ClusterConfig, NodeSpec
from src.workload.workload import WorkloadProfile


logger = logging.getLogger(__name__)


DEFAULT_TIMEOUT = 30.0

# Queue item tags
_MESSAGE = "message"
_CLOSED = "closed"
_BAD_LINE = "bad_line"
_TICK = "tick"


@dataclass
class HarnessReport:
    """
    Outcome of one live run. Times are seconds since seeding.

    Attributes:
        valid: False when the run was aborted
        reason: Why the run was aborted
        total_items: Items scheduled
        makespan: Seeding to the last batch ack
        throughput: total_items / makespan
        per_node_items: Items assigned per node id
        ledger: Every batch issued
        events: Seed/ack/tick log, replayable through the scheduler
        completion_times: Batch id -> ack arrival time
        node_stats: STATS payload per node id
        declared_rates: Rate each worker announced in HELLO
    """
    valid: bool
    total_items: int
    makespan: float = 0.0
    throughput: float = 0.0
    per_node_items: Dict[str, int] = field(default_factory=dict)
    ledger: List[BatchAssignment] = field(default_factory=list)
    events: List[LedgerEvent] = field(default_factory=list)
    completion_times: Dict[int, float] = field(default_factory=dict)
    node_stats: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    declared_rates: Dict[str, float] = field(default_factory=dict)
    reason: Optional[str] = None


class Coordinator:
    """
    Runs the pull scheduler against live workers.

    Args:
        listen_addr: unix:<path> or host:port; None for a unix socket in workdir
        cluster: Expected workers, one per node
        profile: Workload, already scaled to desk rates
        cfg: Scheduler parameters
        workdir: Shared directory for index files; a temp dir when None
        timeout: Seconds of worker silence before aborting
        total_items: Schedule only this many items (a workload prefix)
    """
    def __init__(
            self,
            listen_addr: Optional[str],
            cluster: ClusterConfig,
            profile: WorkloadProfile,
            cfg: SchedulerConfig,
            workdir: Optional[str] = None,
            timeout: float = DEFAULT_TIMEOUT,
            total_items: Optional[int] = None
    ):
        if timeout <= 0:
            raise ConfigurationError("Harness timeout must be positive")
        if total_items is not None and total_items < 0:
            raise ConfigurationError("Harness item count cannot be negative")

        self.cluster = cluster
        self.profile = profile
        self.cfg = cfg
        self.timeout = timeout
        self.total_items = profile.total_items if total_items is None else total_items
        self.workdir = workdir or tempfile.mkdtemp(prefix="simulatecsd-")
        os.makedirs(self.workdir, exist_ok=True)

        self.address = parse_address(listen_addr or f"unix:{os.path.join(self.workdir, 'coordinator.sock')}")
        self.scheduler = PullScheduler(cluster, cfg)

        self._queue: "queue.Queue" = queue.Queue()
        self._stop = threading.Event()
        self._threads: List[threading.Thread] = []
        self._server = None
        self._channels: Dict[int, LineChannel] = {}
        self._node_of: Dict[int, str] = {}
        self._channel_of: Dict[str, LineChannel] = {}

    def start(self) -> Address:
        """Bind and start accepting workers. Returns the address to connect to."""
        self._server = listen(self.address)
        self.address = bound_address(self._server, self.address)
        self._spawn_thread(self._accept_loop, "coordinator-accept")
        logger.info("Coordinator listening on %s, workdir %s", self.address, self.workdir)
        return self.address

    def _spawn_thread(self, target, name, *args):
        thread = threading.Thread(target=target, name=name, args=args, daemon=True)
        thread.start()
        self._threads.append(thread)

    def _accept_loop(self):
        conn_id = 0
        while not self._stop.is_set():
            try:
                sock, _ = self._server.accept()
            except OSError:
                return
            channel = LineChannel(sock)
            self._channels[conn_id] = channel
            self._spawn_thread(self._read_loop, f"coordinator-conn-{conn_id}", conn_id, channel)
            conn_id += 1

    def _read_loop(self, conn_id: int, channel: LineChannel):
        while True:
            try:
                message = channel.receive()
            except ProtocolViolationError as err:
                self._queue.put((_BAD_LINE, conn_id, str(err), time.monotonic()))
                continue
            if message is None:
                self._queue.put((_CLOSED, conn_id, None, time.monotonic()))
                return
            self._queue.put((_MESSAGE, conn_id, message, time.monotonic()))

    def _tick_loop(self, t0: float):
        k = 1
        poll = self.cfg.poll_interval
        while not self._stop.is_set():
            delay = t0 + k * poll - time.monotonic()
            if delay > 0 and self._stop.wait(delay):
                return
            self._queue.put((_TICK, None, k * poll, time.monotonic()))
            k += 1

    def _send(self, node_id: str, message: WireMessage):
        try:
            self._channel_of[node_id].send(message)
        except OSError as err:
            logger.warning("Send to %s failed: %s", node_id, err)

    def _send_to_conn(self, conn_id: int, message: WireMessage):
        try:
            self._channels[conn_id].send(message)
        except OSError:
            pass

    def _issue(self, assignments: List[BatchAssignment]):
        for assignment in assignments:
            write_index(self.workdir, SharedIndexFile(
                batch_id=assignment.batch_id,
                start_index=assignment.start_index,
                count=assignment.count,
                workload_name=self.profile.name,
            ))
            self._send(assignment.node_id, WireMessage.assign(
                assignment.batch_id, assignment.start_index, assignment.count))

    def _next(self, deadline: float):
        """
        Next queue item, waiting at most until deadline.

        Raises:
            HarnessTimeoutError: If the deadline passes first
        """
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            raise HarnessTimeoutError(f"No worker activity for {self.timeout:.1f} s")
        try:
            return self._queue.get(timeout=remaining)
        except queue.Empty:
            raise HarnessTimeoutError(f"No worker activity for {self.timeout:.1f} s") from None

    def _register(self, report: HarnessReport):
        """Wait for every expected node to say HELLO and ask for work"""
        expected = {node.id: node for node in self.cluster.nodes}
        ready: Set[str] = set()
        deadline = time.monotonic() + self.timeout

        while ready != set(expected):
            tag, conn_id, payload, _ = self._next(deadline)
            if tag == _BAD_LINE:
                self._send_to_conn(conn_id, WireMessage.err(payload))
                continue
            if tag == _CLOSED:
                node_id = self._node_of.get(conn_id)
                if node_id is not None:
                    raise ProtocolViolationError(f"Worker {node_id} disconnected before seeding")
                continue

            message = payload
            if message.kind is MessageKind.HELLO:
                node = expected.get(message.node_id)
                if node is None or node.kind is not message.node_kind or message.node_id in self._channel_of:
                    self._send_to_conn(conn_id, WireMessage.err(
                        f"Unexpected worker {message.node_id} ({message.node_kind})"))
                    continue
                self._node_of[conn_id] = message.node_id
                self._channel_of[message.node_id] = self._channels[conn_id]
                report.declared_rates[message.node_id] = message.declared_rate
                deadline = time.monotonic() + self.timeout
            elif message.kind is MessageKind.ACK and message.batch_id is None \
                    and self._node_of.get(conn_id) == message.node_id:
                ready.add(message.node_id)
            else:
                self._send_to_conn(conn_id, WireMessage.err(f"Unexpected {message.kind} before seeding"))

        logger.info("All %d workers registered", len(expected))

    def run(self) -> HarnessReport:
        """
        Register the workers, seed, serve acks on the poll tick, drain, and
        collect STATS.

        Returns:
            HarnessReport; valid is False if a worker timed out, left, or
            broke the protocol
        """
        if self._server is None:
            self.start()

        report = HarnessReport(valid=True, total_items=self.total_items)
        state = self.scheduler.new_state(self.total_items)
        drained: Set[str] = set()
        t0 = None

        try:
            self._register(report)

            t0 = time.monotonic()
            self._spawn_thread(self._tick_loop, "coordinator-tick", t0)
            report.events.append(LedgerEvent("seed", 0.0))
            self._issue(self.scheduler.seed(state, 0.0))

            # Nodes seeded with nothing are done already
            for node_id in self.cluster.seeding_order():
                if node_id not in state.outstanding:
                    self._drain(node_id, drained)

            deadline = time.monotonic() + self.timeout
            while len(drained) < len(self.cluster.nodes) or len(report.node_stats) < len(drained):
                tag, conn_id, payload, received = self._next(deadline)
                node_id = self._node_of.get(conn_id)

                if tag == _TICK:
                    if state.pending_acks:
                        waiting = list(state.pending_acks)
                        report.events.append(LedgerEvent("tick", payload))
                        _, issued = self.scheduler.on_poll_tick(state, payload)
                        self._issue(issued)
                        served = {assignment.node_id for assignment in issued}
                        for waiting_id in waiting:
                            if waiting_id not in served:
                                self._drain(waiting_id, drained)
                    continue

                deadline = time.monotonic() + self.timeout
                if tag == _BAD_LINE:
                    self._send_to_conn(conn_id, WireMessage.err(payload))
                    continue
                if tag == _CLOSED:
                    if node_id is not None and node_id not in drained:
                        raise ProtocolViolationError(f"Worker {node_id} disconnected mid-run")
                    if node_id is not None and node_id not in report.node_stats:
                        # Closed without answering STATS_REQ, stop waiting for it
                        report.node_stats[node_id] = {}
                    continue

                message = payload
                if message.kind is MessageKind.ACK and node_id == message.node_id:
                    ack_time = received - t0
                    report.completion_times[message.batch_id] = ack_time
                    report.events.append(LedgerEvent("ack", ack_time, node_id, message.batch_id))
                    self.scheduler.on_ack(state, node_id, ack_time, message.batch_id)
                elif message.kind is MessageKind.STATS and node_id is not None:
                    report.node_stats[node_id] = message.payload
                elif message.kind is MessageKind.ERR:
                    raise ProtocolViolationError(f"Worker {node_id} reported: {message.error}")
                else:
                    self._send_to_conn(conn_id, WireMessage.err(f"Unexpected {message.kind} from {node_id}"))

        except (HarnessTimeoutError, ProtocolViolationError) as err:
            logger.error("Harness run aborted: %s", err)
            report.valid = False
            report.reason = str(err)
            for node_id in self._channel_of:
                if node_id not in drained:
                    self._send(node_id, WireMessage.err(f"run aborted: {err}"))
        finally:
            self.shutdown()

        return self._finish(report, state)

    def _drain(self, node_id: str, drained: Set[str]):
        if node_id in drained:
            return
        drained.add(node_id)
        self._send(node_id, WireMessage.stats_req())
        self._send(node_id, WireMessage.drain())

    def _finish(self, report: HarnessReport, state) -> HarnessReport:
        report.ledger = list(state.assignments)
        report.per_node_items = {node.id: 0 for node in self.cluster.nodes}
        for assignment in report.ledger:
            report.per_node_items[assignment.node_id] += assignment.count

        if report.completion_times:
            report.makespan = max(report.completion_times.values())
            report.throughput = self.total_items / report.makespan if report.makespan > 0 else 0.0

        if report.valid and sum(report.per_node_items.values()) != self.total_items:
            report.valid = False
            report.reason = "assigned items do not add up to the workload"

        logger.info(
            "Harness run %s: %d items in %.3f s (%.3f items/s)",
            "complete" if report.valid else "INVALID", self.total_items, report.makespan, report.throughput,
        )
        return report

    def shutdown(self):
        """Stop threads, close sockets, remove leftover index files"""
        self._stop.set()
        if self._server is not None:
            try:
                self._server.close()
            except OSError:
                pass
        for channel in list(self._channels.values()):
            try:
                channel.close()
            except OSError:
                pass
        if self.address.is_unix and os.path.exists(self.address.path):
            os.unlink(self.address.path)
        removed = remove_all_indexes(self.workdir)
        if removed:
            logger.warning("Removed %d index files of unfinished batches", removed)


def _worker_entry(connect_addr, node_spec, profile, cfg, workdir, mode):
    raise SystemExit(worker_loop(connect_addr, node_spec, profile, cfg, workdir, mode=mode))


def spawn_local_workers(
        address: Address,
        nodes: List[NodeSpec],
        profile: WorkloadProfile,
        cfg: SchedulerConfig,
        workdir: str,
        mode: str = SPIN
) -> List[multiprocessing.Process]:
    """Start one worker process per node on this machine"""
    context = multiprocessing.get_context("spawn")
    processes = []
    for node in nodes:
        process = context.Process(
            target=_worker_entry,
            args=(str(address), node, profile, cfg, workdir, mode),
            name=f"worker-{node.id}",
            daemon=True,
        )
        process.start()
        processes.append(process)
    return processes


def coordinate(
        listen_addr: Optional[str],
        cluster: ClusterConfig,
        profile: WorkloadProfile,
        cfg: SchedulerConfig,
        workdir: Optional[str] = None,
        timeout: float = DEFAULT_TIMEOUT,
        total_items: Optional[int] = None,
        spawn: bool = False,
        mode: str = SPIN
) -> HarnessReport:
    """
    Run the scheduler against live workers.

    Args:
        spawn: Start the workers locally as processes
        mode: Synthetic work mode of spawned workers

    Returns:
        HarnessReport
    """
    coordinator = Coordinator(listen_addr, cluster, profile, cfg, workdir=workdir,
                              timeout=timeout, total_items=total_items)
    address = coordinator.start()

    processes = []
    if spawn:
        processes = spawn_local_workers(address, cluster.nodes, profile, cfg, coordinator.workdir, mode)

    try:
        report = coordinator.run()
    finally:
        for process in processes:
            process.join(timeout=5)
            if process.is_alive():
                process.terminate()
    return report
