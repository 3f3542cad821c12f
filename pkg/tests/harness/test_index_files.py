import os
import tempfile
import unittest
from src.errors import ProtocolViolationError
from src.harness.index_files import (
    SharedIndexFile, delete_index, index_path, list_indexes, read_index, remove_all_indexes, write_index,
)


class TestIndexFiles(unittest.TestCase):
    """Tests for the shared-directory index handoff"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.workdir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def test_layout_and_content(self):
        path = write_index(self.workdir, SharedIndexFile(5, 120, 6, "speech_to_text"))

        self.assertEqual(path, os.path.join(self.workdir, "assign", "5.idx"))
        with open(path) as f:
            self.assertEqual(f.read(), "120 6 speech_to_text\n")

    def test_read_back(self):
        index = SharedIndexFile(2, 10, 3, "toy")
        write_index(self.workdir, index)

        self.assertEqual(read_index(self.workdir, 2), index)

    def test_missing_file(self):
        with self.assertRaisesRegex(ProtocolViolationError, "No index file for batch 9"):
            read_index(self.workdir, 9)

    def test_malformed_file(self):
        write_index(self.workdir, SharedIndexFile(1, 0, 1, "toy"))
        with open(index_path(self.workdir, 1), "w") as f:
            f.write("zero one toy\n")

        with self.assertRaisesRegex(ProtocolViolationError, "non-integer fields"):
            read_index(self.workdir, 1)

    def test_delete_and_list(self):
        for batch_id in (3, 1, 2):
            write_index(self.workdir, SharedIndexFile(batch_id, batch_id, 1, "toy"))
        delete_index(self.workdir, 2)
        delete_index(self.workdir, 2)

        self.assertEqual(list_indexes(self.workdir), [1, 3])
        self.assertEqual(remove_all_indexes(self.workdir), 2)
        self.assertEqual(list_indexes(self.workdir), [])

    def test_list_without_directory(self):
        self.assertEqual(list_indexes(self.workdir), [])
