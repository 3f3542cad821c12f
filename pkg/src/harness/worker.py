"""
This file contains the worker side of the live harness: HELLO, then ACK,
wait for ASSIGN, read the index file, work, delete the index file, until
DRAIN.
"""

# External imports
import logging
import os
import time
from typing import Any, Dict, List

# Internal Imports
from src.errors import ConfigurationError, ProtocolViolationError
from src.harness.busywork import SPIN, SyntheticWork
from src.harness.index_files import delete_index, read_index
from src.harness.transport import LineChannel, connect, parse_address
from src.harness.wire import MessageKind, WireMessage
from src.scheduler.config import SchedulerConfig, batch_size_for
from src.topology.cluster import NodeSpec
from src.workload.workload import WorkloadProfile, rate_lookup


logger = logging.getLogger(__name__)


EXIT_OK = 0
EXIT_CONNECTION_LOST = 1
EXIT_PROTOCOL_ERROR = 2


def worker_loop(
        connect_addr: str,
        node_spec: NodeSpec,
        profile: WorkloadProfile,
        cfg: SchedulerConfig,
        workdir: str,
        mode: str = SPIN,
        connect_attempts: int = 10
) -> int:
    """
    Run one worker until drained.

    Args:
        connect_addr: Coordinator address (unix:<path> or host:port)
        node_spec: This worker's id and kind
        profile: Workload, already scaled to desk rates
        cfg: Scheduler parameters, for the nominal batch size
        workdir: Shared directory holding the index files
        mode: 'spin' or 'sleep'
        connect_attempts: Connection retries before giving up

    Returns:
        int: EXIT_OK when drained, EXIT_CONNECTION_LOST, or EXIT_PROTOCOL_ERROR

    Raises:
        ConfigurationError: If workdir is not an existing directory
    """
    if not workdir or not os.path.isdir(workdir):
        raise ConfigurationError(f"Worker needs an existing shared workdir, got {workdir!r}")
    node_id = node_spec.id
    rate = rate_lookup(profile.rate_table(node_spec.rate_table_ref), batch_size_for(node_spec.kind, cfg))
    work = SyntheticWork(mode)
    achieved = work.achieved_rate(rate)
    logger.info("Worker %s (%s): rate %.3f items/s, achieved %.3f", node_id, node_spec.kind, rate, achieved)

    try:
        sock = connect(parse_address(connect_addr), attempts=connect_attempts)
    except ConnectionError as err:
        logger.error("Worker %s: %s", node_id, err)
        return EXIT_CONNECTION_LOST

    channel = LineChannel(sock)
    timings: List[List[Any]] = []
    try:
        channel.send(WireMessage.hello(node_id, node_spec.kind, rate))
        channel.send(WireMessage.ack(node_id))

        while True:
            try:
                message = channel.receive()
            except ProtocolViolationError as err:
                logger.error("Worker %s: %s", node_id, err)
                channel.send(WireMessage.err(str(err)))
                return EXIT_PROTOCOL_ERROR

            if message is None:
                logger.warning("Worker %s: coordinator closed the connection", node_id)
                return EXIT_CONNECTION_LOST

            if message.kind is MessageKind.ASSIGN:
                try:
                    index = read_index(workdir, message.batch_id)
                    if (index.start_index, index.count) != (message.start_index, message.count):
                        raise ProtocolViolationError(
                            f"Index file of batch {message.batch_id} disagrees with ASSIGN"
                        )
                except ProtocolViolationError as err:
                    logger.error("Worker %s: %s", node_id, err)
                    channel.send(WireMessage.err(str(err)))
                    return EXIT_PROTOCOL_ERROR

                started = time.perf_counter()
                work.process_batch(message.count, rate)
                elapsed = time.perf_counter() - started
                delete_index(workdir, message.batch_id)
                timings.append([message.batch_id, message.start_index, message.count, elapsed])
                channel.send(WireMessage.ack(node_id, message.batch_id))

            elif message.kind is MessageKind.STATS_REQ:
                channel.send(WireMessage.stats(_stats_payload(node_spec, rate, achieved, timings)))

            elif message.kind is MessageKind.DRAIN:
                logger.info("Worker %s drained after %d batches", node_id, len(timings))
                return EXIT_OK

            elif message.kind is MessageKind.ERR:
                logger.error("Worker %s: coordinator error: %s", node_id, message.error)
                return EXIT_PROTOCOL_ERROR

            else:
                channel.send(WireMessage.err(f"Unexpected {message.kind} sent to a worker"))
                return EXIT_PROTOCOL_ERROR
    except OSError as err:
        logger.warning("Worker %s: connection lost: %s", node_id, err)
        return EXIT_CONNECTION_LOST
    finally:
        channel.close()


def _stats_payload(node_spec: NodeSpec, rate: float, achieved: float, timings: List[List[Any]]) -> Dict[str, Any]:
    return {
        "node_id": node_spec.id,
        "kind": str(node_spec.kind),
        "declared_rate": rate,
        "achieved_rate": achieved,
        "items": sum(timing[2] for timing in timings),
        "batches": timings,
    }
