import os
import tempfile
import threading
import unittest
from src.errors import ConfigurationError
from src.harness.busywork import SLEEP
from src.harness.index_files import SharedIndexFile, list_indexes, write_index
from src.harness.transport import LineChannel, listen, parse_address
from src.harness.wire import MessageKind, WireMessage
from src.harness.worker import EXIT_CONNECTION_LOST, EXIT_OK, EXIT_PROTOCOL_ERROR, worker_loop
from src.scheduler.config import SchedulerConfig
from src.topology.cluster import NodeSpec
from src.topology.node_enums import NodeKind
from src.workload.workload import RateTable, WorkloadProfile


class TestWorkerLoop(unittest.TestCase):
    """Tests for worker_loop against a scripted coordinator"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.workdir = self.tmp.name
        self.address = f"unix:{os.path.join(self.workdir, 'c.sock')}"
        self.server = listen(parse_address(self.address))
        self.profile = WorkloadProfile(
            name="toy",
            total_items=100,
            dataset_input_bytes=100.0,
            avg_output_bytes_per_item=1.0,
            host_rates=RateTable.flat(1000.0),
            csd_rates=RateTable.flat(1000.0),
        )
        self.result = {}

    def tearDown(self):
        self.server.close()
        self.tmp.cleanup()

    def _start_worker(self):
        def target():
            self.result["status"] = worker_loop(
                self.address, NodeSpec("csd1", NodeKind.CSD), self.profile,
                SchedulerConfig(csd_batch_size=3), self.workdir, mode=SLEEP,
            )
        thread = threading.Thread(target=target, daemon=True)
        thread.start()

        sock, _ = self.server.accept()
        channel = LineChannel(sock)
        hello = channel.receive()
        ready = channel.receive()
        self.assertIs(hello.kind, MessageKind.HELLO)
        self.assertEqual(hello.declared_rate, 1000.0)
        self.assertEqual((ready.kind, ready.node_id, ready.batch_id), (MessageKind.ACK, "csd1", None))
        return thread, channel

    def test_drain_before_assign(self):
        thread, channel = self._start_worker()
        channel.send(WireMessage.drain())
        thread.join(timeout=5)

        self.assertEqual(self.result["status"], EXIT_OK)
        channel.close()

    def test_batch_then_stats_and_drain(self):
        thread, channel = self._start_worker()
        write_index(self.workdir, SharedIndexFile(0, 0, 3, "toy"))
        channel.send(WireMessage.assign(0, 0, 3))

        ack = channel.receive()
        self.assertEqual((ack.kind, ack.node_id, ack.batch_id), (MessageKind.ACK, "csd1", 0))
        self.assertEqual(list_indexes(self.workdir), [])

        channel.send(WireMessage.stats_req())
        stats = channel.receive()
        channel.send(WireMessage.drain())
        thread.join(timeout=5)

        self.assertEqual(stats.payload["items"], 3)
        self.assertEqual(stats.payload["node_id"], "csd1")
        self.assertEqual(self.result["status"], EXIT_OK)
        channel.close()

    def test_assign_count_zero(self):
        thread, channel = self._start_worker()
        channel.send_line("ASSIGN 0 0 0\n")

        reply = channel.receive()
        thread.join(timeout=5)

        self.assertIs(reply.kind, MessageKind.ERR)
        self.assertIn("count must be at least 1", reply.error)
        self.assertEqual(self.result["status"], EXIT_PROTOCOL_ERROR)
        channel.close()

    def test_assign_without_index_file(self):
        thread, channel = self._start_worker()
        channel.send(WireMessage.assign(4, 0, 3))

        reply = channel.receive()
        thread.join(timeout=5)

        self.assertIs(reply.kind, MessageKind.ERR)
        self.assertIn("No index file for batch 4", reply.error)
        self.assertEqual(self.result["status"], EXIT_PROTOCOL_ERROR)
        channel.close()

    def test_index_disagrees_with_assign(self):
        thread, channel = self._start_worker()
        write_index(self.workdir, SharedIndexFile(0, 5, 3, "toy"))
        channel.send(WireMessage.assign(0, 0, 3))

        reply = channel.receive()
        thread.join(timeout=5)

        self.assertIs(reply.kind, MessageKind.ERR)
        self.assertEqual(self.result["status"], EXIT_PROTOCOL_ERROR)
        channel.close()

    def test_coordinator_disconnects(self):
        thread, channel = self._start_worker()
        channel.close()
        thread.join(timeout=5)

        self.assertEqual(self.result["status"], EXIT_CONNECTION_LOST)

    def test_no_coordinator(self):
        status = worker_loop(
            f"unix:{os.path.join(self.workdir, 'nobody.sock')}", NodeSpec("csd1", NodeKind.CSD),
            self.profile, SchedulerConfig(csd_batch_size=3), self.workdir, mode=SLEEP, connect_attempts=2,
        )

        self.assertEqual(status, EXIT_CONNECTION_LOST)

    def test_missing_workdir(self):
        with self.assertRaisesRegex(ConfigurationError, "existing shared workdir"):
            worker_loop(
                self.address, NodeSpec("csd1", NodeKind.CSD), self.profile,
                SchedulerConfig(csd_batch_size=3), os.path.join(self.workdir, "absent"), mode=SLEEP,
            )
