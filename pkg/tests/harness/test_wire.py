import unittest
from src.errors import ProtocolViolationError
from src.harness.wire import MessageKind, WireMessage, decode, encode
from src.topology.node_enums import NodeKind


class TestWire(unittest.TestCase):
    """Tests for the line protocol"""

    def test_encode_lines(self):
        self.assertEqual(encode(WireMessage.hello("csd1", NodeKind.CSD, 5.3)), "HELLO csd1 csd 5.3\n")
        self.assertEqual(encode(WireMessage.ack("csd1")), "ACK csd1 -\n")
        self.assertEqual(encode(WireMessage.ack("host", 12)), "ACK host 12\n")
        self.assertEqual(encode(WireMessage.assign(3, 120, 6)), "ASSIGN 3 120 6\n")
        self.assertEqual(encode(WireMessage.drain()), "DRAIN\n")
        self.assertEqual(encode(WireMessage.stats_req()), "STATS_REQ\n")
        self.assertEqual(encode(WireMessage.stats({"b": 1, "a": [2]})), 'STATS {"a":[2],"b":1}\n')
        self.assertEqual(encode(WireMessage.err("bad\nthing")), "ERR bad thing\n")

    def test_decode_hello(self):
        message = decode("HELLO host host 102.0\n")

        self.assertIs(message.kind, MessageKind.HELLO)
        self.assertIs(message.node_kind, NodeKind.HOST)
        self.assertEqual(message.declared_rate, 102.0)

    def test_decode_ack(self):
        self.assertIsNone(decode("ACK csd2 -").batch_id)
        self.assertEqual(decode("ACK csd2 7").batch_id, 7)

    def test_decode_assign(self):
        message = decode("ASSIGN 4 10 6\n")

        self.assertEqual((message.batch_id, message.start_index, message.count), (4, 10, 6))

    def test_decode_stats(self):
        self.assertEqual(decode('STATS {"items": 3}').payload, {"items": 3})

    def test_unknown_kind(self):
        with self.assertRaisesRegex(ProtocolViolationError, "Unknown message kind 'HELO'"):
            decode("HELO csd1")

    def test_assign_count_zero(self):
        with self.assertRaisesRegex(ProtocolViolationError, "count must be at least 1, got 0"):
            decode("ASSIGN 1 0 0")

    def test_wrong_field_count(self):
        with self.assertRaisesRegex(ProtocolViolationError, "ASSIGN takes 3 fields, got 2"):
            decode("ASSIGN 1 0")

    def test_non_integer(self):
        with self.assertRaisesRegex(ProtocolViolationError, "batch_id must be a decimal integer"):
            decode("ACK csd1 x")

    def test_stats_not_object(self):
        with self.assertRaisesRegex(ProtocolViolationError, "must be a JSON object"):
            decode("STATS [1]")
