import unittest
from dataclasses import replace
from src.errors import ConfigurationError
from src.topology.cluster import NodeSpec
from src.topology.node_enums import NodeKind
from src.workload.workload import RateTable, WorkloadProfile, rate_lookup, rate_table_from_pairs


class TestRateLookup(unittest.TestCase):
    """Tests for rate_lookup"""

    def setUp(self):
        self.table = RateTable(entries=((100, 100.0), (400, 300.0)))

    def test_flat_table(self):
        """A single-entry table returns its rate for any batch size"""
        table = RateTable.flat(5.3)

        for batch_size in (1, 6, 1000):
            self.assertEqual(rate_lookup(table, batch_size), 5.3)

    def test_knots_exact(self):
        """Exact knots return the knot rate"""
        self.assertEqual(rate_lookup(self.table, 100), 100.0)
        self.assertEqual(rate_lookup(self.table, 400), 300.0)

    def test_log_midpoint(self):
        """Halfway in log(batch size) is halfway in rate"""
        self.assertAlmostEqual(rate_lookup(self.table, 200), 200.0, places=9)

    def test_clamped_outside_table(self):
        """Outside the table the nearest entry's rate is used"""
        self.assertEqual(rate_lookup(self.table, 10), 100.0)
        self.assertEqual(rate_lookup(self.table, 5000), 300.0)

    def test_monotone_for_monotone_table(self):
        """A non-decreasing table gives non-decreasing rates"""
        table = RateTable(entries=((100, 120.0), (1000, 250.0), (10000, 364.0)))
        rates = [rate_lookup(table, b) for b in range(1, 20001, 97)]

        self.assertTrue(all(r2 >= r1 for r1, r2 in zip(rates, rates[1:])))

    def test_invalid_batch_size(self):
        """Batch sizes below 1 are rejected"""
        with self.assertRaisesRegex(ValueError, "Batch size must be at least 1"):
            rate_lookup(self.table, 0)


class TestRateTable(unittest.TestCase):
    """Tests for the RateTable class"""

    def test_empty_table(self):
        with self.assertRaisesRegex(ConfigurationError, "at least one entry"):
            RateTable(entries=())

    def test_unsorted_batches(self):
        with self.assertRaisesRegex(ConfigurationError, "strictly increasing"):
            RateTable(entries=((10, 1.0), (10, 2.0)))

    def test_non_positive_rate(self):
        with self.assertRaisesRegex(ConfigurationError, "must be positive"):
            RateTable(entries=((10, 0.0),))

    def test_from_pairs(self):
        """Lists from JSON become tuples"""
        table = rate_table_from_pairs([[1, 2], [3, 4]])

        self.assertEqual(table.entries, ((1, 2.0), (3, 4.0)))

    def test_scaled(self):
        table = RateTable(entries=((1, 100.0), (10, 50.0))).scaled(10)

        self.assertEqual(table.entries, ((1, 10.0), (10, 5.0)))


class TestWorkloadProfile(unittest.TestCase):
    """Tests for the WorkloadProfile class"""

    def setUp(self):
        self.profile = WorkloadProfile(
            name="toy",
            total_items=1000,
            dataset_input_bytes=1000 * 1024,
            avg_output_bytes_per_item=10,
            host_rates=RateTable.flat(100),
            csd_rates=RateTable.flat(5),
            host_end_to_end_rate=90,
        )

    def test_derived_sizes(self):
        self.assertEqual(self.profile.avg_input_bytes_per_item, 1024)
        self.assertEqual(self.profile.output_bytes_total, 10_000)

    def test_rates_for(self):
        self.assertIs(self.profile.rates_for(NodeKind.HOST), self.profile.host_rates)
        self.assertIs(self.profile.rates_for(NodeKind.CSD), self.profile.csd_rates)

    def test_rate_table_by_reference(self):
        self.assertIs(self.profile.rate_table("host_rates"), self.profile.host_rates)
        self.assertIs(self.profile.rate_table(NodeSpec("csd1", NodeKind.CSD).rate_table_ref), self.profile.csd_rates)

    def test_unknown_rate_table(self):
        with self.assertRaisesRegex(ConfigurationError, "Unknown rate table 'gpu_rates'"):
            self.profile.rate_table("gpu_rates")

    def test_host_only_rate_prefers_end_to_end(self):
        """The measured end-to-end rate wins over the table"""
        self.assertEqual(self.profile.host_only_rate(100), 90)
        self.assertEqual(replace(self.profile, host_end_to_end_rate=None).host_only_rate(100), 100)

    def test_scaled_keeps_ratios(self):
        scaled = self.profile.scaled(10)

        self.assertEqual(rate_lookup(scaled.host_rates, 1), 10)
        self.assertEqual(rate_lookup(scaled.csd_rates, 1), 0.5)
        self.assertEqual(scaled.host_end_to_end_rate, 9)

    def test_with_total_items(self):
        prefix = self.profile.with_total_items(10)

        self.assertEqual(prefix.total_items, 10)
        self.assertEqual(prefix.avg_input_bytes_per_item, 1024)

    def test_host_only_table(self):
        """The host-only copy runs the host at the end-to-end rate"""
        self.assertEqual(self.profile.host_only(100).host_rates, RateTable.flat(90))

    def test_invalid_total_items(self):
        with self.assertRaisesRegex(ValueError, "Total items must be a positive integer"):
            replace(self.profile, total_items=0)

    def test_invalid_end_to_end_rate(self):
        with self.assertRaisesRegex(ValueError, "end-to-end rate must be positive"):
            replace(self.profile, host_end_to_end_rate=-1)
