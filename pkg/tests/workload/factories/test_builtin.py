import json
import os
import tempfile
import unittest
from src.errors import UnknownProfileError
from src.workload.factories.builtin import BuiltinProfileFactory, builtin_profile
from src.workload.workload import rate_lookup


class TestBuiltinProfileFactory(unittest.TestCase):
    """Tests for the BuiltinProfileFactory class"""

    def test_available_profiles(self):
        self.assertEqual(
            BuiltinProfileFactory().available_profiles(),
            ["recommender", "sentiment", "speech_to_text"],
        )

    def test_speech_to_text(self):
        profile = builtin_profile("speech_to_text")

        self.assertEqual(profile.total_items, 225_715)
        self.assertEqual(profile.dataset_input_bytes, 3.8e9)
        self.assertAlmostEqual(profile.output_bytes_total, 1.2e6)
        self.assertEqual(rate_lookup(profile.host_rates, 120), 102)
        self.assertEqual(rate_lookup(profile.csd_rates, 6), 5.3)
        self.assertEqual(profile.host_end_to_end_rate, 96)

    def test_recommender_rates(self):
        """CSD rate is 1506 - 579 spread over 36 drives"""
        profile = builtin_profile("recommender")

        self.assertEqual(rate_lookup(profile.host_rates, 2200), 579)
        self.assertAlmostEqual(rate_lookup(profile.csd_rates, 100), (1506 - 579) / 36, places=2)

    def test_sentiment_best_rates(self):
        profile = builtin_profile("sentiment")

        self.assertEqual(rate_lookup(profile.host_rates, 1_040_000), 9496)
        self.assertEqual(rate_lookup(profile.csd_rates, 40_000), 364)

    def test_unknown_profile(self):
        with self.assertRaisesRegex(UnknownProfileError, "Unknown workload profile 'nope'"):
            builtin_profile("nope")

    def test_unknown_profile_is_key_error(self):
        with self.assertRaises(KeyError):
            builtin_profile("nope")

    def test_extra_profile_file(self):
        document = {
            "name": "toy", "total_items": 10, "dataset_input_bytes": 100,
            "avg_output_bytes_per_item": 1, "host_rates": [[1, 10]], "csd_rates": [[1, 1]],
        }
        with tempfile.TemporaryDirectory() as workdir:
            path = os.path.join(workdir, "toy.json")
            with open(path, "w") as f:
                json.dump(document, f)

            factory = BuiltinProfileFactory(extra_profile_paths=[path])

        self.assertIn("toy", factory.available_profiles())
        self.assertEqual(factory.create_profile("toy").total_items, 10)
