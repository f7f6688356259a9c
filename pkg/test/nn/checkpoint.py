__all__ = ["ArchiveTest", "GcnCheckpointTest"]

import os
import tempfile
import unittest

import numpy as np

from newsgraph.exception import *
from newsgraph.nn.checkpoint import *
from newsgraph.nn.gcn import PARAMETER_NAMES, GcnModel

class ArchiveTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "archive.npz")

    def tearDown(self):
        self.tmp.cleanup()

    def test_arrays_and_metadata_survive_a_round_trip(self):
        writeArchive(self.path, "thing", {"a": np.arange(3.0)}, {"note": "x"})
        arrays, meta = readArchive(self.path, "thing")

        self.assertEqual(arrays["a"].tolist(), [0.0, 1.0, 2.0])
        self.assertEqual(meta["note"], "x")
        self.assertEqual(meta["format_version"], FORMAT_VERSION)

    def test_a_different_kind_raises_CheckpointError(self):
        writeArchive(self.path, "thing", {}, {})
        self.assertRaises(CheckpointError, readArchive, self.path, "other")

    def test_a_missing_file_raises_CheckpointError(self):
        self.assertRaises(CheckpointError, readArchive, self.path, "thing")

    def test_a_file_that_is_not_an_archive_raises_CheckpointError(self):
        with open(self.path, "wb") as f:
            f.write(b"not a zip file")

        self.assertRaises(CheckpointError, readArchive, self.path, "thing")

    def test_an_unknown_format_version_raises_CheckpointError(self):
        np.savez(self.path, __meta__=np.array('{"format_version": 99, "kind": "thing"}'))
        self.assertRaises(CheckpointError, readArchive, self.path, "thing")

class GcnCheckpointTest(unittest.TestCase):
    def test_parameters_are_restored_bit_for_bit(self):
        model = GcnModel.initialize(4, 2, hidden=6, dropout=0.25, seed=3)

        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "gcn.npz")
            saveGcnModel(model, path, config={"hidden": 6}, seed=3, scheme="links")
            restored, meta = loadGcnModel(path)

        for name in PARAMETER_NAMES:
            self.assertTrue(np.array_equal(restored.params[name], model.params[name]))

        self.assertEqual(restored.dropout, 0.25)
        self.assertEqual(meta["config"], {"hidden": 6})
        self.assertEqual(meta["scheme"], "links")

    def test_a_checkpoint_missing_a_parameter_raises_CheckpointError(self):
        params = dict(GcnModel.initialize(4, 2, hidden=3).params)
        del params["W1"]

        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "gcn.npz")
            writeArchive(path, "gcn", params, {"dropout": 0.5})
            self.assertRaises(CheckpointError, loadGcnModel, path)

if __name__ == "__main__":
    unittest.main()
