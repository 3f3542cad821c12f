"""
This file contains the coordinator <-> worker wire protocol.

One message per UTF-8 line, space-separated fields in fixed order:

    HELLO <node_id> <kind> <declared_rate>
    ACK <node_id> <batch_id|->
    ASSIGN <batch_id> <start_index> <count>
    DRAIN
    STATS_REQ
    STATS <json payload>
    ERR <message>
"""

# External imports
import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

# Internal Imports
from src.errors import ProtocolViolationError
from src.topology.node_enums import NodeKind


NO_BATCH = "-"


class MessageKind(Enum):
    HELLO = "HELLO"
    ACK = "ACK"
    ASSIGN = "ASSIGN"
    DRAIN = "DRAIN"
    STATS_REQ = "STATS_REQ"
    STATS = "STATS"
    ERR = "ERR"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class WireMessage:
    kind: MessageKind
    node_id: Optional[str] = None
    node_kind: Optional[NodeKind] = None
    declared_rate: Optional[float] = None
    batch_id: Optional[int] = None
    start_index: Optional[int] = None
    count: Optional[int] = None
    payload: Optional[Dict[str, Any]] = None
    error: Optional[str] = None

    @classmethod
    def hello(cls, node_id: str, node_kind: NodeKind, declared_rate: float) -> "WireMessage":
        return cls(MessageKind.HELLO, node_id=node_id, node_kind=node_kind, declared_rate=declared_rate)

    @classmethod
    def ack(cls, node_id: str, batch_id: Optional[int] = None) -> "WireMessage":
        return cls(MessageKind.ACK, node_id=node_id, batch_id=batch_id)

    @classmethod
    def assign(cls, batch_id: int, start_index: int, count: int) -> "WireMessage":
        return cls(MessageKind.ASSIGN, batch_id=batch_id, start_index=start_index, count=count)

    @classmethod
    def drain(cls) -> "WireMessage":
        return cls(MessageKind.DRAIN)

    @classmethod
    def stats_req(cls) -> "WireMessage":
        return cls(MessageKind.STATS_REQ)

    @classmethod
    def stats(cls, payload: Dict[str, Any]) -> "WireMessage":
        return cls(MessageKind.STATS, payload=payload)

    @classmethod
    def err(cls, error: str) -> "WireMessage":
        return cls(MessageKind.ERR, error=error)


def encode(message: WireMessage) -> str:
    """Message to its line, newline included"""
    kind = message.kind
    if kind is MessageKind.HELLO:
        fields = [message.node_id, str(message.node_kind), repr(float(message.declared_rate))]
    elif kind is MessageKind.ACK:
        fields = [message.node_id, NO_BATCH if message.batch_id is None else str(message.batch_id)]
    elif kind is MessageKind.ASSIGN:
        fields = [str(message.batch_id), str(message.start_index), str(message.count)]
    elif kind is MessageKind.STATS:
        fields = [json.dumps(message.payload, separators=(",", ":"), sort_keys=True)]
    elif kind is MessageKind.ERR:
        fields = [" ".join((message.error or "").split())]
    else:
        fields = []
    return " ".join([kind.value] + fields) + "\n"


def _int(token: str, name: str, line: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ProtocolViolationError(f"{name} must be a decimal integer in '{line}'") from None


def _expect_fields(tokens, expected: int, line: str):
    if len(tokens) != expected:
        raise ProtocolViolationError(
            f"{tokens[0]} takes {expected - 1} fields, got {len(tokens) - 1} in '{line}'"
        )


def decode(line: str) -> WireMessage:
    """
    Parse one line.

    Raises:
        ProtocolViolationError: Unknown kind, wrong field count, bad number,
            or an ASSIGN with count below 1
    """
    line = line.rstrip("\r\n")
    head, _, rest = line.partition(" ")
    try:
        kind = MessageKind(head)
    except ValueError:
        raise ProtocolViolationError(f"Unknown message kind '{head}'") from None

    if kind is MessageKind.STATS:
        try:
            payload = json.loads(rest)
        except json.JSONDecodeError as err:
            raise ProtocolViolationError(f"STATS payload is not JSON: {err.msg}") from None
        if not isinstance(payload, dict):
            raise ProtocolViolationError("STATS payload must be a JSON object")
        return WireMessage.stats(payload)

    if kind is MessageKind.ERR:
        return WireMessage.err(rest)

    tokens = line.split()
    if kind is MessageKind.HELLO:
        _expect_fields(tokens, 4, line)
        try:
            node_kind = NodeKind.parse(tokens[2])
            declared_rate = float(tokens[3])
        except ValueError as err:
            raise ProtocolViolationError(f"Malformed HELLO '{line}': {err}") from None
        return WireMessage.hello(tokens[1], node_kind, declared_rate)

    if kind is MessageKind.ACK:
        _expect_fields(tokens, 3, line)
        batch_id = None if tokens[2] == NO_BATCH else _int(tokens[2], "batch_id", line)
        return WireMessage.ack(tokens[1], batch_id)

    if kind is MessageKind.ASSIGN:
        _expect_fields(tokens, 4, line)
        batch_id = _int(tokens[1], "batch_id", line)
        start_index = _int(tokens[2], "start_index", line)
        count = _int(tokens[3], "count", line)
        if count < 1:
            raise ProtocolViolationError(f"ASSIGN count must be at least 1, got {count}")
        if start_index < 0:
            raise ProtocolViolationError(f"ASSIGN start_index cannot be negative, got {start_index}")
        return WireMessage.assign(batch_id, start_index, count)

    _expect_fields(tokens, 1, line)
    return WireMessage(kind)
