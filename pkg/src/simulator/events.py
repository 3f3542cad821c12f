"""
Event queue for the discrete-event engine.

Events are ordered by time, then kind (a batch completing at time t is
handled before the poll tick at t), then insertion order.
"""

# External imports
import heapq
from dataclasses import dataclass, field
from enum import IntEnum
from typing import List, Optional


class EventKind(IntEnum):
    """Event kinds, valued by their priority at equal timestamps"""
    BATCH_COMPLETE = 0
    POLL_TICK = 1


@dataclass(frozen=True, order=True)
class SimEvent:
    time: float
    kind: EventKind
    seq: int
    node_id: Optional[str] = field(default=None, compare=False)
    batch_id: Optional[int] = field(default=None, compare=False)


class EventQueue:
    """Priority queue of SimEvents. Assigns the tie-breaking sequence numbers."""

    def __init__(self):
        self._queue: List[SimEvent] = []
        self._counter = 0

    def push(self, time: float, kind: EventKind, node_id: Optional[str] = None,
             batch_id: Optional[int] = None) -> SimEvent:
        event = SimEvent(time=time, kind=kind, seq=self._counter, node_id=node_id, batch_id=batch_id)
        self._counter += 1
        heapq.heappush(self._queue, event)
        return event

    def pop(self) -> Optional[SimEvent]:
        if self._queue:
            return heapq.heappop(self._queue)
        return None

    def is_empty(self) -> bool:
        return len(self._queue) == 0

    def __len__(self) -> int:
        return len(self._queue)

    def __repr__(self):
        return f"EventQueue(size={len(self._queue)})"
