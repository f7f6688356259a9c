__all__ = ["CandidateSetTest", "LoadDiscoveryModelsTest", "RunDiscoveryTest"]

import os
import tempfile
import unittest

import pandas as pd

from newsgraph.baselines.models import saveFittedModel
from newsgraph.discovery.ecosystem import generatePlantedEcosystem
from newsgraph.discovery.pipeline import *
from newsgraph.discovery.schemes import LinkSchemeCriteria
from newsgraph.exception import *

FILTERS = ("backlink_filter", "news", "absolute_bias", "reliability")

class RunDiscoveryTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.ecosystem = generatePlantedEcosystem()
        cls.models = trainDiscoveryModels(
            cls.ecosystem.client,
            cls.ecosystem.labels,
            cls.ecosystem.newsDomains,
            cls.ecosystem.nonNewsDomains,
        )

        cls.config = PipelineConfig(criteria=LinkSchemeCriteria(alphaMin=100, betaMin=2))
        cls.discovery = cls.discover(cls.config)

    @classmethod
    def discover(cls, config):
        return runDiscovery(cls.ecosystem.labels, cls.ecosystem.client, config, cls.models)

    def test_stages_are_reported_in_pipeline_order(self):
        names = [stage.name for stage in self.discovery.report.stages]
        self.assertEqual(names, list(STAGES))

    def test_filter_stages_never_let_more_domains_out_than_in(self):
        counts = {s.name: (s.inCount, s.outCount) for s in self.discovery.report.stages}
        for name in FILTERS:
            inCount, outCount = counts[name]
            self.assertLessEqual(outCount, inCount, name)

        for before, after in zip(FILTERS, FILTERS[1:]):
            self.assertLessEqual(counts[after][0], counts[before][1], after)

    def test_the_planted_link_schemes_are_identified(self):
        found = {scheme.domain for scheme in self.discovery.schemes}
        self.assertEqual(found, set(self.ecosystem.groups["link_schemes"]))

    def test_labeled_domains_are_never_candidates(self):
        self.assertFalse(set(self.discovery.candidates.domains) & set(self.ecosystem.labels))

    def test_every_candidate_is_an_outlink_of_an_identified_link_scheme(self):
        schemes = {s.domain for s in self.discovery.schemes}
        for record in self.discovery.candidates:
            self.assertTrue(record.linkSchemeOutlink, record.domain)
            self.assertLessEqual(set(record.provenance), schemes, record.domain)

    def test_a_candidate_only_passes_a_filter_after_passing_the_ones_before_it(self):
        for record in self.discovery.candidates:
            if record.passedReliability:
                self.assertTrue(record.passedAbsoluteBias, record.domain)
            if record.passedAbsoluteBias:
                self.assertTrue(record.passedNews, record.domain)
            if record.passedNews:
                self.assertTrue(record.passedBacklinkFilter, record.domain)

    def test_hidden_unreliable_sites_are_discovered(self):
        discovered = set(self.discovery.candidates.discovered)
        hidden = set(self.ecosystem.groups["hidden_unreliable"])
        self.assertGreaterEqual(len(discovered & hidden), 0.8 * len(hidden))
        self.assertFalse(discovered & set(self.ecosystem.groups["reliable_news"]))

    def test_the_summary_row_has_one_column_per_summary_field(self):
        row = self.discovery.report.summaryRow()
        self.assertEqual(list(row.columns), list(SUMMARY_COLUMNS))
        self.assertEqual(row.loc[0, "link_schemes"], len(self.ecosystem.groups["link_schemes"]))
        self.assertEqual(row.loc[0, "seed"], len(self.ecosystem.groups["seed_unreliable"]))

    def test_thresholds_that_reject_everything_leave_nothing_discovered(self):
        discovery = self.discover(self.config.replace(newsThreshold=1.0))
        self.assertEqual(discovery.candidates.discovered, [])
        self.assertEqual(discovery.candidates.passing("passedNews"), [])
        self.assertEqual(discovery.report.stages[-1].outCount, 0)

    def test_a_prohibitive_backlink_threshold_stops_every_candidate(self):
        discovery = self.discover(self.config.replace(backlinkFilterThreshold=10**9))
        self.assertEqual(discovery.candidates.passing("passedBacklinkFilter"), [])
        self.assertTrue(all(r.newsScore is None for r in discovery.candidates))

    def test_repeated_runs_produce_identical_candidates(self):
        pd.testing.assert_frame_equal(
            self.discover(self.config).candidates.toFrame(),
            self.discovery.candidates.toFrame(),
        )

class CandidateSetTest(unittest.TestCase):
    def setUp(self):
        self.candidates = CandidateSet([
            CandidateRecord("b.example", ("s1",), 20000, True, 0.9, True),
            CandidateRecord("a.example", ("s1", "s2")),
            CandidateRecord("c.example", ()),
        ])

    def test_records_are_kept_in_domain_order(self):
        self.assertEqual(self.candidates.domains, ["a.example", "b.example", "c.example"])

    def test_the_frame_has_one_row_per_candidate(self):
        frame = self.candidates.toFrame()
        self.assertEqual(list(frame["domain"]), ["a.example", "b.example", "c.example"])
        self.assertEqual(list(frame["provenance"]), ["s1|s2", "s1", ""])
        self.assertTrue(pd.isna(frame.loc[0, "provider_backlink_total"]))
        self.assertEqual(frame.loc[1, "provider_backlink_total"], 20000)
        self.assertEqual(list(frame["link_scheme_outlink"]), [True, True, False])

    def test_passing_lists_the_domains_with_a_flag_set(self):
        self.assertEqual(self.candidates.passing("passedNews"), ["b.example"])
        self.assertEqual(self.candidates.discovered, [])

class LoadDiscoveryModelsTest(unittest.TestCase):
    def test_unset_checkpoints_raise_PipelineError(self):
        self.assertRaises(PipelineError, loadDiscoveryModels, PipelineConfig())

    def test_running_without_checkpoints_raises_before_any_stage(self):
        ecosystem = generatePlantedEcosystem()
        self.assertRaises(
            PipelineError,
            runDiscovery, ecosystem.labels, ecosystem.client, PipelineConfig(),
        )

    def test_a_corrupt_checkpoint_raises_PipelineError(self):
        with tempfile.TemporaryDirectory() as tmp:
            paths = []
            for name in ("news", "bias", "reliability"):
                path = os.path.join(tmp, f"{name}.npz")
                with open(path, "wb") as f:
                    f.write(b"not an archive")
                paths.append(path)

            config = PipelineConfig(
                newsCheckpoint=paths[0],
                absoluteBiasCheckpoint=paths[1],
                reliabilityCheckpoint=paths[2],
            )

            self.assertRaises(PipelineError, loadDiscoveryModels, config)

    def test_saved_models_are_loaded_in_filter_order(self):
        ecosystem = generatePlantedEcosystem()
        models = trainDiscoveryModels(
            ecosystem.client, ecosystem.labels,
            ecosystem.newsDomains, ecosystem.nonNewsDomains,
        )

        with tempfile.TemporaryDirectory() as tmp:
            paths = []
            for name, model in zip(("news", "bias", "reliability"), models):
                path = os.path.join(tmp, f"{name}.npz")
                saveFittedModel(model, path)
                paths.append(path)

            loaded = loadDiscoveryModels(PipelineConfig(
                newsCheckpoint=paths[0],
                absoluteBiasCheckpoint=paths[1],
                reliabilityCheckpoint=paths[2],
            ))

        for original, copy in zip(models, loaded):
            self.assertEqual(copy.manifest, original.manifest)

if __name__ == "__main__":
    unittest.main()
