import unittest
from dataclasses import replace
from src.scheduler.config import SchedulerConfig
from src.scheduler.state import BatchAssignment
from src.simulator.engine import host_only_run, item_latency, run
from src.topology.cluster import DataPathSpec
from src.topology.factories.standard import StandardClusterFactory
from src.workload.factories.builtin import builtin_profile
from src.workload.workload import RateTable, WorkloadProfile


def flat_profile(total_items, host_rate, csd_rate, end_to_end=None):
    return WorkloadProfile(
        name="toy",
        total_items=total_items,
        dataset_input_bytes=total_items * 1000.0,
        avg_output_bytes_per_item=10.0,
        host_rates=RateTable.flat(host_rate),
        csd_rates=RateTable.flat(csd_rate),
        host_end_to_end_rate=end_to_end,
    )


class TestItemLatency(unittest.TestCase):
    """Tests for item_latency"""

    def test_unit_rate_sequence(self):
        batch = BatchAssignment("csd1", 0, 0, 3, 0.0)

        self.assertEqual([item_latency(batch, i, 1.0) for i in range(3)], [1.0, 2.0, 3.0])

    def test_assign_time_offset(self):
        batch = BatchAssignment("csd1", 0, 0, 10, 2.0)

        self.assertAlmostEqual(item_latency(batch, 0, 5.0), 2.2)

    def test_larger_batch_larger_max(self):
        small = BatchAssignment("csd1", 0, 0, 5, 0.0)
        large = BatchAssignment("csd1", 1, 0, 50, 0.0)

        self.assertGreater(item_latency(large, 49, 5.0), item_latency(small, 4, 5.0))

    def test_index_out_of_range(self):
        with self.assertRaisesRegex(ValueError, "outside batch of 3"):
            item_latency(BatchAssignment("csd1", 0, 0, 3, 0.0), 3, 1.0)


class TestSimulation(unittest.TestCase):
    """Tests for the discrete-event engine"""

    def test_hand_trace(self):
        """Two unit-rate nodes, four unit batches: two rounds one second apart"""
        cluster = StandardClusterFactory().create_cluster(1)
        cfg = SchedulerConfig(csd_batch_size=1, batch_ratio=1, poll_interval=0.2)

        report = run(cluster, flat_profile(4, 1.0, 1.0), cfg)

        self.assertEqual(
            [(a.node_id, a.start_index, a.count, a.assign_time) for a in report.ledger],
            [("host", 0, 1, 0.0), ("csd1", 1, 1, 0.0), ("host", 2, 1, 1.0), ("csd1", 3, 1, 1.0)],
        )
        self.assertEqual(report.makespan, 2.0)
        self.assertEqual(report.throughput, 2.0)
        self.assertEqual(report.per_node_items, {"host": 2, "csd1": 2})
        self.assertEqual(report.csd_fraction, 0.5)
        self.assertEqual(report.latency_stats.mean, 1.5)
        self.assertEqual(report.completion_times, {0: 1.0, 1: 1.0, 2: 2.0, 3: 2.0})

    def test_ack_waits_for_tick(self):
        """A batch ending between ticks is followed at the next tick"""
        cluster = StandardClusterFactory().create_cluster(0)
        cfg = SchedulerConfig(csd_batch_size=1, poll_interval=0.2)

        report = run(cluster, flat_profile(2, 1 / 0.3, 1.0), cfg)

        self.assertAlmostEqual(report.ledger[1].assign_time, 0.4)
        self.assertAlmostEqual(report.makespan, 0.7)

    def test_host_overhead(self):
        cluster = StandardClusterFactory().create_cluster(0)
        cfg = SchedulerConfig(csd_batch_size=10, host_assign_overhead=0.5)

        report = run(cluster, flat_profile(10, 10.0, 1.0), cfg)

        self.assertAlmostEqual(report.makespan, 1.5)

    def test_host_only_speech(self):
        profile = builtin_profile("speech_to_text")

        report = host_only_run(profile, StandardClusterFactory().create_cluster(36))

        self.assertAlmostEqual(report.throughput, 96.0, places=9)
        self.assertAlmostEqual(report.makespan, 225_715 / 96)
        self.assertEqual(report.csd_count, 0)
        self.assertEqual(len(report.ledger), 1)
        self.assertAlmostEqual(report.energy.normalized_to_host_only, 1.0)
        self.assertEqual(report.csd_fraction_paper, 0.0)

    def test_host_only_keeps_scenario_labels(self):
        cfg = SchedulerConfig(csd_batch_size=6, batch_ratio=20)

        report = host_only_run(builtin_profile("speech_to_text"), StandardClusterFactory().create_cluster(36), cfg)

        self.assertEqual((report.batch_size, report.batch_ratio), (6, 20))

    def test_speech_with_36_csds(self):
        profile = builtin_profile("speech_to_text")
        cfg = SchedulerConfig(csd_batch_size=6, batch_ratio=20)

        report = run(StandardClusterFactory().create_cluster(36), profile, cfg)

        self.assertLess(abs(report.throughput - 292.8) / 292.8, 0.05)
        self.assertGreaterEqual(report.speedup, 2.8)
        self.assertLessEqual(report.speedup, 3.2)
        self.assertEqual(report.host_only_throughput, 96)
        self.assertEqual(report.total_items, 225_715)

    def test_recommender_with_36_csds(self):
        cfg = SchedulerConfig(csd_batch_size=100, batch_ratio=22)

        report = run(StandardClusterFactory().create_cluster(36), builtin_profile("recommender"), cfg)

        self.assertLess(abs(report.throughput - 1506) / 1506, 0.05)

    def test_sentiment_with_36_csds(self):
        cfg = SchedulerConfig(csd_batch_size=40_000, batch_ratio=26)

        report = run(StandardClusterFactory().create_cluster(36), builtin_profile("sentiment"), cfg)

        self.assertLess(abs(report.throughput - 20994) / 20994, 0.10)

    def test_report_row_order(self):
        from src.simulator.sweep import SWEEP_COLUMNS
        cfg = SchedulerConfig(csd_batch_size=2)

        report = run(StandardClusterFactory().create_cluster(2), flat_profile(20, 4.0, 1.0), cfg)

        self.assertEqual(list(report.row()), SWEEP_COLUMNS)

    def test_no_csds_is_its_own_baseline(self):
        cfg = SchedulerConfig(csd_batch_size=6, batch_ratio=20)

        report = run(StandardClusterFactory().create_cluster(0), builtin_profile("speech_to_text"), cfg)

        self.assertEqual(report.speedup, 1.0)
        self.assertEqual(report.csd_fraction_paper, 0.0)
        self.assertEqual(report.energy.normalized_to_host_only, 1.0)
        self.assertEqual(report.bandwidth.saturated_paths, [])

    def test_saturated_tunnel_flagged(self):
        cluster = replace(StandardClusterFactory().create_cluster(2), paths=DataPathSpec(tunnel_bandwidth=1e-3))

        with self.assertLogs("src.simulator.engine", level="WARNING") as logs:
            report = run(cluster, flat_profile(20, 4.0, 1.0), SchedulerConfig(csd_batch_size=2))

        self.assertEqual(report.bandwidth.saturated_paths, ["tunnel"])
        self.assertTrue(any("tunnel" in line for line in logs.output))
