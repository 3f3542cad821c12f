"""This file contains the code for the scheduler state and its ledger entries"""

# External imports
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List


@dataclass(frozen=True)
class BatchAssignment:
    """
    One batch handed to one node. Only the index range travels to the
    node, never the data.
    """
    node_id: str
    batch_id: int
    start_index: int
    count: int
    assign_time: float

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("Batch count must be at least 1")
        if self.start_index < 0:
            raise ValueError("Batch start index cannot be negative")

    @property
    def end_index(self) -> int:
        return self.start_index + self.count


@dataclass
class SchedulerState:
    """
    Mutable scheduler state, owned by one caller at a time.

    Attributes:
        total_items: Size of the closed workload
        next_index: First item not yet assigned
        pending_acks: Nodes waiting for their next batch, in ack order
        assignments: Every batch issued so far, in issue order
        outstanding: Node id -> batch id currently being processed
        exhausted: True once every item has been assigned
    """
    total_items: int
    next_index: int = 0
    pending_acks: Deque[str] = field(default_factory=deque)
    assignments: List[BatchAssignment] = field(default_factory=list)
    outstanding: Dict[str, int] = field(default_factory=dict)
    exhausted: bool = False

    def __post_init__(self):
        if self.total_items < 0:
            raise ValueError("Total items cannot be negative")
        if self.total_items == 0:
            self.exhausted = True

    @property
    def remaining(self) -> int:
        return self.total_items - self.next_index

    @property
    def assigned_items(self) -> int:
        return sum(assignment.count for assignment in self.assignments)
