import unittest
from src.errors import ConfigurationError
from src.topology.factories.default_config import get_default_power_model
from src.topology.factories.standard import StandardClusterFactory


class TestStandardClusterFactory(unittest.TestCase):
    """Tests for the StandardClusterFactory class"""

    def setUp(self):
        self.factory = StandardClusterFactory()

    def test_create_cluster(self):
        cluster = self.factory.create_cluster(36)

        self.assertEqual(cluster.seeding_order()[:3], ["host", "csd1", "csd2"])
        self.assertEqual(cluster.csd_count, 36)
        self.assertEqual(cluster.power, get_default_power_model())

    def test_host_only(self):
        self.assertEqual(self.factory.create_cluster(0).seeding_order(), ["host"])

    def test_negative_count(self):
        with self.assertRaisesRegex(ConfigurationError, "CSD count must be between 0 and 36, got -1"):
            self.factory.create_cluster(-1)

    def test_over_ceiling(self):
        with self.assertRaisesRegex(ConfigurationError, "got 37"):
            self.factory.create_cluster(37)
