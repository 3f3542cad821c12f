import unittest
import numpy as np
from src.scheduler.config import SchedulerConfig
from src.simulator.engine import run
from src.topology.factories.standard import StandardClusterFactory
from src.workload.workload import RateTable, WorkloadProfile
from tests.simulator.brute_force import brute_force_ledger


class TestBruteForceEquivalence(unittest.TestCase):
    """The engine's ledger matches a tick-stepping replay exactly"""

    def test_random_small_cases(self):
        rng = np.random.default_rng(99)
        factory = StandardClusterFactory()

        for _ in range(200):
            total = int(rng.integers(1, 21))
            profile = WorkloadProfile(
                name="oracle",
                total_items=total,
                dataset_input_bytes=float(total),
                avg_output_bytes_per_item=1.0,
                host_rates=RateTable.flat(float(rng.uniform(0.5, 5.0))),
                csd_rates=RateTable.flat(float(rng.uniform(0.5, 5.0))),
            )
            cfg = SchedulerConfig(
                csd_batch_size=int(rng.integers(1, 4)),
                batch_ratio=float(rng.integers(1, 4)),
                poll_interval=float(rng.choice([0.1, 0.2, 0.25])),
            )
            cluster = factory.create_cluster(int(rng.integers(0, 3)))

            report = run(cluster, profile, cfg)
            engine_ledger = [
                (a.node_id, a.batch_id, a.start_index, a.count, a.assign_time) for a in report.ledger
            ]

            self.assertEqual(engine_ledger, brute_force_ledger(cluster, profile, cfg))
