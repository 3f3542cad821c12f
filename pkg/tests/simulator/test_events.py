import unittest
import numpy as np
from src.simulator.events import EventKind, EventQueue


class TestEventQueue(unittest.TestCase):
    """Tests for the EventQueue class"""

    def test_completion_before_tick_at_same_time(self):
        queue = EventQueue()
        queue.push(1.0, EventKind.POLL_TICK)
        queue.push(1.0, EventKind.BATCH_COMPLETE, node_id="csd1", batch_id=3)

        self.assertIs(queue.pop().kind, EventKind.BATCH_COMPLETE)
        self.assertIs(queue.pop().kind, EventKind.POLL_TICK)

    def test_insertion_order_breaks_ties(self):
        queue = EventQueue()
        for node_id in ("host", "csd1", "csd2"):
            queue.push(2.0, EventKind.BATCH_COMPLETE, node_id=node_id)

        self.assertEqual([queue.pop().node_id for _ in range(3)], ["host", "csd1", "csd2"])

    def test_total_order(self):
        """Pops come out sorted by (time, kind, insertion order)"""
        rng = np.random.default_rng(7)
        queue = EventQueue()
        pushed = []
        for seq in range(300):
            time = float(rng.integers(0, 20)) / 4
            kind = EventKind(int(rng.integers(0, 2)))
            queue.push(time, kind)
            pushed.append((time, kind, seq))

        popped = [(e.time, e.kind, e.seq) for e in iter(queue.pop, None)]

        self.assertEqual(popped, sorted(pushed))
        self.assertTrue(queue.is_empty())

    def test_len(self):
        queue = EventQueue()
        self.assertEqual(len(queue), 0)
        queue.push(0.5, EventKind.POLL_TICK)

        self.assertEqual(len(queue), 1)
        self.assertFalse(queue.is_empty())
