__all__ = ["ExperimentConfigTest", "RunExperimentTest"]

import json
import os
import tempfile
import unittest

import pandas as pd

from newsgraph.evaluation.experiment import *
from newsgraph.exception import *
from newsgraph.ingest.labels import Task
from newsgraph.webgraph.weights import WeightScheme

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(__file__)), "fixtures")

def fixture(name):
    return os.path.join(FIXTURES, name)

class ExperimentConfigTest(unittest.TestCase):
    def test_an_empty_document_takes_every_default(self):
        config = ExperimentConfig()
        self.assertEqual(config.asDict(), DEFAULTS)
        self.assertEqual(config.tasks, (Task.RELIABILITY,))
        self.assertEqual(config.topn, [None])

    def test_the_fixture_file_is_loaded_and_converted(self):
        config = ExperimentConfig.load(fixture("experiment.yaml"))

        self.assertEqual(config.name, "topn-smoke")
        self.assertEqual(config.seeds, [3])
        self.assertEqual(config.schemes, (WeightScheme.LINKS, None))
        self.assertEqual(config.topn, [1, 3])
        self.assertEqual(config.values["train"]["min_delta"], 1e-4)
        self.assertEqual(config.values["synthetic"]["mean_degree"], 6.0)
        self.assertEqual(config.trainConfig(3).hidden, 16)

    def test_repeats_add_consecutive_seeds(self):
        config = ExperimentConfig({"experiment": {"seed": 7, "repeats": 3}})
        self.assertEqual(config.seeds, [7, 8, 9])
        self.assertEqual(config.withSeed(1).seeds, [1, 2, 3])

    def test_unknown_sections_and_keys_raise_ValidationError(self):
        self.assertRaises(ValidationError, ExperimentConfig, {"model": {}})
        self.assertRaises(ValidationError, ExperimentConfig, {"train": {"epochs": 3}})

    def test_values_of_the_wrong_type_raise_ValidationError(self):
        self.assertRaises(ValidationError, ExperimentConfig, {"train": {"hidden": "wide"}})
        self.assertRaises(ValidationError, ExperimentConfig, {"train": {"learning_rate": "fast"}})
        self.assertRaises(ValidationError, ExperimentConfig, {"discovery": {"strict": 1}})

    def test_invalid_grid_entries_raise_ValidationError(self):
        self.assertRaises(ValidationError, ExperimentConfig, {"sweep": {"networks": ["sidelink"]}})
        self.assertRaises(ValidationError, ExperimentConfig, {"sweep": {"schemes": ["squared"]}})
        self.assertRaises(ValidationError, ExperimentConfig, {"sweep": {"topn": [0]}})
        self.assertRaises(ValidationError, ExperimentConfig, {"flat": {"models": ["knn"]}})

    def test_values_rejected_by_derived_configs_raise_ValidationError(self):
        self.assertRaises(ValidationError, ExperimentConfig, {"discovery": {"alpha_min": -1}})
        self.assertRaises(ValidationError, ExperimentConfig, {"data": {"nodes": "nodes.csv"}})

    def test_the_config_hash_depends_only_on_values(self):
        a = ExperimentConfig({"experiment": {"seed": 1}})
        b = ExperimentConfig().replace("experiment", seed=1)
        self.assertEqual(a.configHash, b.configHash)
        self.assertNotEqual(a.configHash, ExperimentConfig().configHash)

    def test_an_unreadable_file_raises_ValidationError(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "broken.yaml")
            with open(path, "w", encoding="utf-8") as f:
                f.write("experiment: [unclosed\n")

            self.assertRaises(ValidationError, ExperimentConfig.load, path)
            self.assertRaises(ValidationError, ExperimentConfig.load, os.path.join(tmp, "none.yaml"))

class RunExperimentTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.config = ExperimentConfig.load(fixture("experiment.yaml"))
        cls.result = runExperiment(cls.config)

    def test_every_cell_reports_accuracy_and_f1(self):
        rows = self.result.rows

        self.assertEqual(list(rows.columns), list(RESULT_COLUMNS))
        self.assertTrue(self.result.failures.empty)
        self.assertEqual(self.result.record["cells"], 5)
        self.assertEqual(len(rows), 10)
        self.assertEqual(set(rows["metric"]), {"accuracy", "f1"})
        self.assertTrue(((rows["value"] >= 0) & (rows["value"] <= 1)).all())

    def test_the_grid_covers_every_truncation_and_scheme(self):
        gcn = self.result.rows[self.result.rows["model"] == "gcn"]
        cells = set(zip(gcn["topn"], gcn["scheme"]))
        self.assertEqual(cells, {(1, "links"), (1, "none"), (3, "links"), (3, "none")})

    def test_tree_models_report_feature_importances(self):
        importances = self.result.importances
        self.assertEqual(list(importances.columns), list(IMPORTANCE_COLUMNS))
        self.assertEqual(set(importances["model"]), {"decision_tree"})
        self.assertAlmostEqual(importances["importance"].sum(), 1.0, delta=1e-9)

    def test_repeated_runs_give_identical_results(self):
        again = runExperiment(self.config)
        pd.testing.assert_frame_equal(again.rows, self.result.rows)

    def test_outputs_are_written_to_the_output_directory(self):
        with tempfile.TemporaryDirectory() as tmp:
            runExperiment(self.config, tmp)

            for name in ("results.csv", "failures.csv", "importances.csv", "run.json"):
                self.assertTrue(os.path.isfile(os.path.join(tmp, name)), name)

            with open(os.path.join(tmp, "run.json"), encoding="utf-8") as f:
                record = json.load(f)

            results = pd.read_csv(os.path.join(tmp, "results.csv"))

        self.assertEqual(record["config_hash"], self.config.configHash)
        self.assertEqual(record["seeds"], [3])
        self.assertEqual(len(results), 10)

    def test_data_too_small_to_split_is_recorded_as_a_failure(self):
        config = ExperimentConfig({
            "data": {
                "nodes": fixture("nodes.csv"),
                "edges": fixture("edges.csv"),
                "labels": fixture("labels.csv"),
            },
        })

        with self.assertLogs("newsgraph.evaluation.experiment", level="WARNING"):
            result = runExperiment(config)

        self.assertTrue(result.rows.empty)
        self.assertEqual(list(result.failures["model"]), ["split"])
        self.assertEqual(result.failures.loc[0, "error"], "ValidationError")

if __name__ == "__main__":
    unittest.main()
