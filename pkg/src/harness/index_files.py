"""
This file contains the shared-directory index handoff: the coordinator
writes a batch's index range to <workdir>/assign/<batch_id>.idx before
assigning it, the worker reads it and deletes it when done.
"""

# External imports
import os
from dataclasses import dataclass
from typing import List

# Internal Imports
from src.errors import ProtocolViolationError


ASSIGN_DIR = "assign"


@dataclass(frozen=True)
class SharedIndexFile:
    batch_id: int
    start_index: int
    count: int
    workload_name: str

    def content(self) -> str:
        return f"{self.start_index} {self.count} {self.workload_name}\n"


def assign_dir(workdir: str) -> str:
    return os.path.join(workdir, ASSIGN_DIR)


def index_path(workdir: str, batch_id: int) -> str:
    return os.path.join(assign_dir(workdir), f"{batch_id}.idx")


def write_index(workdir: str, index: SharedIndexFile) -> str:
    """Write atomically so a reader never sees a partial file"""
    os.makedirs(assign_dir(workdir), exist_ok=True)
    path = index_path(workdir, index.batch_id)
    tmp_path = path + ".tmp"
    with open(tmp_path, "w") as f:
        f.write(index.content())
    os.replace(tmp_path, path)
    return path


def read_index(workdir: str, batch_id: int) -> SharedIndexFile:
    """
    Raises:
        ProtocolViolationError: If the file is missing or malformed
    """
    path = index_path(workdir, batch_id)
    try:
        with open(path) as f:
            tokens = f.read().split()
    except FileNotFoundError:
        raise ProtocolViolationError(f"No index file for batch {batch_id} at {path}") from None

    if len(tokens) != 3:
        raise ProtocolViolationError(f"Index file {path} must hold 'start count workload_name'")
    try:
        start_index, count = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ProtocolViolationError(f"Index file {path} has non-integer fields") from None
    return SharedIndexFile(batch_id=batch_id, start_index=start_index, count=count, workload_name=tokens[2])


def delete_index(workdir: str, batch_id: int):
    try:
        os.remove(index_path(workdir, batch_id))
    except FileNotFoundError:
        pass


def list_indexes(workdir: str) -> List[int]:
    directory = assign_dir(workdir)
    if not os.path.isdir(directory):
        return []
    return sorted(
        int(name[:-len(".idx")]) for name in os.listdir(directory)
        if name.endswith(".idx") and name[:-len(".idx")].isdigit()
    )


def remove_all_indexes(workdir: str) -> int:
    """Remove every leftover index file, returning how many there were"""
    leftovers = list_indexes(workdir)
    for batch_id in leftovers:
        delete_index(workdir, batch_id)
    return len(leftovers)
