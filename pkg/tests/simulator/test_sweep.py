import os
import tempfile
import unittest
from dataclasses import replace
import polars as pl
from src.scheduler.config import SchedulerConfig
from src.simulator.engine import host_only_run
from src.simulator.sweep import SWEEP_COLUMNS, sweep, sweep_frame, write_sweep_csv
from src.topology.factories.standard import StandardClusterFactory
from src.workload.factories.builtin import builtin_profile
from src.workload.workload import RateTable, WorkloadProfile


class TestSweep(unittest.TestCase):
    """Tests for the parameter sweep"""

    def setUp(self):
        self.cluster = StandardClusterFactory().create_cluster(0)
        self.profile = WorkloadProfile(
            name="toy",
            total_items=2000,
            dataset_input_bytes=2000 * 100.0,
            avg_output_bytes_per_item=1.0,
            host_rates=RateTable.flat(50.0),
            csd_rates=RateTable.flat(5.0),
        )
        self.cfg = SchedulerConfig(csd_batch_size=1, batch_ratio=10)

    def test_batch_major_order(self):
        reports = sweep(self.cluster, self.profile, [2, 4], [0, 3], base_cfg=self.cfg)

        self.assertEqual([(r.batch_size, r.csd_count) for r in reports], [(2, 0), (2, 3), (4, 0), (4, 3)])
        self.assertTrue(all(r.batch_ratio == 10 for r in reports))

    def test_zero_csd_row(self):
        report = sweep(self.cluster, self.profile, [2], [0], base_cfg=self.cfg)[0]

        self.assertEqual(report.csd_fraction, 0.0)
        self.assertEqual(report.per_node_items, {"host": 2000})

    def test_zero_csd_row_is_host_only_run(self):
        """Speech without CSDs is its own reference: no in-storage share, nothing saved"""
        cluster = StandardClusterFactory().create_cluster(36)
        profile = builtin_profile("speech_to_text")
        cfg = SchedulerConfig(csd_batch_size=1, batch_ratio=20)

        report = sweep(cluster, profile, [6], [0], base_cfg=cfg)[0]

        self.assertEqual(report, host_only_run(profile, cluster, replace(cfg, csd_batch_size=6)))
        self.assertAlmostEqual(report.throughput, 96.0)
        self.assertEqual(report.csd_fraction_paper, 0.0)
        self.assertEqual(report.energy.normalized_to_host_only, 1.0)
        self.assertEqual(report.energy.savings_percent, 0.0)

    def test_speech_energy_falls_along_csd_counts(self):
        reports = sweep(StandardClusterFactory().create_cluster(36), builtin_profile("speech_to_text"),
                        [6], [0, 9, 18, 27, 36], base_cfg=SchedulerConfig(csd_batch_size=1, batch_ratio=20))
        energies = [r.energy.energy_per_item_mj for r in reports]
        normalized = [r.energy.normalized_to_host_only for r in reports]

        self.assertTrue(all(after < before for before, after in zip(energies, energies[1:])), energies)
        self.assertEqual(normalized[0], 1.0)
        self.assertLess(normalized[-1], 0.4)

    def test_empty_axis(self):
        with self.assertRaisesRegex(ValueError, "must not be empty"):
            sweep(self.cluster, self.profile, [], [1])

    def test_failing_cell_named(self):
        with self.assertRaisesRegex(ValueError, "batch_size=2, csd_count=40"):
            sweep(self.cluster, self.profile, [2], [40], base_cfg=self.cfg)

    def test_process_pool_matches_serial(self):
        serial = sweep(self.cluster, self.profile, [2, 4], [0, 2], base_cfg=self.cfg)
        pooled = sweep(self.cluster, self.profile, [2, 4], [0, 2], base_cfg=self.cfg, processes=2)

        self.assertEqual(pooled, serial)

    def test_speech_batch_size_barely_matters(self):
        reports = sweep(StandardClusterFactory().create_cluster(36), builtin_profile("speech_to_text"),
                        [2, 4, 6, 8], [36], base_cfg=SchedulerConfig(csd_batch_size=1, batch_ratio=20))
        throughputs = [r.throughput for r in reports]

        self.assertLess((max(throughputs) - min(throughputs)) / max(throughputs), 0.07)

    def test_csv(self):
        reports = sweep(self.cluster, self.profile, [2], [0, 1], base_cfg=self.cfg)
        with tempfile.TemporaryDirectory() as workdir:
            path = os.path.join(workdir, "sweep.csv")
            write_sweep_csv(reports, path)
            frame = pl.read_csv(path)

        self.assertEqual(frame.columns, SWEEP_COLUMNS)
        self.assertEqual(frame["csd_count"].to_list(), [0, 1])
        self.assertEqual(sweep_frame(reports).columns, SWEEP_COLUMNS)
