__all__ = ["ExitStatusTest", "GraphCommandTest", "DataCommandTest", "DiscoverCommandTest"]

import os
import shutil
import tempfile
import unittest

import pandas as pd

from newsgraph.cli import *

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

def fixture(name):
    return os.path.join(FIXTURES, name)

class CommandTestCase(unittest.TestCase):
    def setUp(self):
        self.outDir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.outDir)

    def invoke(self, *argv):
        return main(["--log-level", "ERROR", "--out-dir", self.outDir, *argv])

    def table(self, name):
        return pd.read_csv(os.path.join(self.outDir, name), encoding="utf-8")

    def writeFile(self, name, text):
        path = os.path.join(self.outDir, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)

        return path

class ExitStatusTest(CommandTestCase):
    def test_an_unknown_command_is_rejected_by_the_parser(self):
        with self.assertRaises(SystemExit) as context:
            buildParser().parse_args(["teleport"])

        self.assertEqual(context.exception.code, 2)

    def test_a_configuration_with_an_unknown_key_exits_with_2(self):
        config = self.writeFile("bad.yaml", "train:\n  epochs: 3\n")
        self.assertEqual(self.invoke("--config", config, "graph", "synthesize"), 2)

    def test_inconsistent_arguments_exit_with_2(self):
        self.assertEqual(self.invoke("ingest", "--nodes", fixture("nodes.csv")), 2)
        self.assertEqual(self.invoke("discover"), 2)

    def test_unresolved_classifier_checkpoints_exit_with_1(self):
        status = self.invoke(
            "discover",
            "--nodes", fixture("nodes.csv"),
            "--edges", fixture("edges.csv"),
            "--labels", fixture("labels.csv"),
        )

        self.assertEqual(status, 1)

class GraphCommandTest(CommandTestCase):
    def graphArgs(self):
        return ["--nodes", fixture("nodes.csv"), "--edges", fixture("edges.csv")]

    def test_summarize_reports_every_network(self):
        self.assertEqual(self.invoke("graph", "summarize", *self.graphArgs()), 0)
        frame = self.table("summary.csv")
        self.assertEqual(list(frame["network"]), ["backlink", "outlink", "combined"])
        self.assertEqual(frame.loc[2, "nodes"], 4)

    def test_weight_writes_one_row_per_edge(self):
        self.assertEqual(self.invoke("graph", "weight", *self.graphArgs(), "--scheme", "links"), 0)
        frame = self.table("weights_links.csv")
        self.assertTrue((frame["weight"] == frame["links"]).all())

    def test_synthesize_writes_a_graph_that_ingest_accepts(self):
        config = self.writeFile("small.yaml", "synthetic:\n  node_count: 60\n")
        self.assertEqual(self.invoke("--config", config, "--seed", "2", "graph", "synthesize"), 0)
        self.assertEqual(len(self.table("nodes.csv")), 60)

        generated = {
            name: os.path.join(self.outDir, name)
            for name in ("nodes.csv", "edges.csv", "labels.csv")
        }
        status = self.invoke(
            "ingest",
            "--labels", generated["labels.csv"],
            "--nodes", generated["nodes.csv"],
            "--edges", generated["edges.csv"],
        )

        self.assertEqual(status, 0)
        self.assertEqual(len(self.table("labels_binary.csv")), 60)

class DataCommandTest(CommandTestCase):
    def test_ingest_merges_labels_per_domain(self):
        self.assertEqual(self.invoke("ingest", "--labels", fixture("labels.csv")), 0)
        frame = self.table("labels_binary.csv")
        self.assertEqual(
            sorted(frame["domain"]),
            ["blog.example", "fakenews.example", "realnews.example"],
        )

    def test_audit_tabulates_survival_with_a_total_row(self):
        status = self.invoke(
            "audit", "--labels", fixture("labels.csv"), "--probes", fixture("probes.csv"),
        )

        self.assertEqual(status, 0)
        frame = self.table("survival.csv")
        self.assertEqual(frame.iloc[-1]["source"], "total")

    def test_classify_scores_a_prediction_table(self):
        path = self.writeFile("predictions.csv", "predicted,actual\n1,1\n1,0\n0,1\n0,0\n")
        self.assertEqual(self.invoke("metrics", "classify", "--predictions", path), 0)
        frame = self.table("metrics.csv")
        self.assertAlmostEqual(frame.loc[0, "accuracy"], 0.5)
        self.assertAlmostEqual(frame.loc[0, "f1"], 0.5)

    def test_a_prediction_table_without_actual_labels_exits_with_2(self):
        path = self.writeFile("predictions.csv", "predicted\n1\n")
        self.assertEqual(self.invoke("metrics", "classify", "--predictions", path), 2)

    def test_alpha_skips_blank_labels(self):
        path = self.writeFile(
            "annotations.csv",
            "item,annotator,label\n"
            "a,ann,left\na,bob,left\n"
            "b,ann,right\nb,bob,right\n"
            "c,ann,center\nc,bob,\n",
        )

        self.assertEqual(self.invoke("metrics", "alpha", "--annotations", path), 0)
        frame = self.table("alpha.csv")
        self.assertAlmostEqual(frame.loc[0, "alpha"], 1.0)
        self.assertEqual(frame.loc[0, "pairable"], 4)

class DiscoverCommandTest(CommandTestCase):
    def test_a_planted_run_writes_candidates_stages_and_an_evaluation(self):
        config = self.writeFile(
            "discover.yaml",
            "discovery:\n  alpha_min: 100\n  beta_min: 2\n",
        )

        self.assertEqual(self.invoke("--config", config, "discover", "--planted"), 0)

        stages = self.table("stages.csv")
        self.assertEqual(len(stages), 7)

        summary = self.table("discovery_summary.csv")
        self.assertEqual(summary.loc[0, "seed"], 30)

        evaluation = self.table("discovery_evaluation.csv")
        self.assertGreaterEqual(evaluation.loc[0, "recall"], 0.8)
        self.assertFalse(self.table("candidates.csv").empty)

if __name__ == "__main__":
    unittest.main()
