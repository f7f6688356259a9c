__all__ = ["FilterByBacklinksTest", "ReadProbeResultsTest", "SurvivalReportTest"]

import os
import tempfile
import unittest

from newsgraph.exception import *
from newsgraph.ingest.labels import Source, readLabels
from newsgraph.ingest.survival import *

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(__file__)), "fixtures")

class FilterByBacklinksTest(unittest.TestCase):
    def test_domains_at_or_above_the_threshold_are_kept(self):
        result = filterByBacklinks({"a": 10000, "b": 9999, "c": 50000})
        self.assertEqual(result.kept, ["a", "c"])
        self.assertEqual(result.dropped, ["b"])
        self.assertEqual(result.unknown, [])

    def test_unknown_totals_are_excluded_and_reported(self):
        with self.assertLogs("newsgraph.ingest.survival", level="WARNING"):
            result = filterByBacklinks({"a": None, "b": 0}, threshold=0)

        self.assertEqual(result.kept, ["b"])
        self.assertEqual(result.unknown, ["a"])

    def test_a_negative_threshold_raises_ValueError(self):
        self.assertRaises(ValueError, filterByBacklinks, {}, -1)

class SurvivalReportTest(unittest.TestCase):
    def probe(self, domain, status, parked, total, source):
        return ProbeResult(domain, status, parked, total, source)

    def test_percentages_are_computed_per_source(self):
        report = survivalReport([
            self.probe("a", 200, False, 20000, Source.MBFC),
            self.probe("b", 404, None, None, Source.MBFC),
            self.probe("c", 200, True, 500, Source.MBFC),
            self.probe("d", 301, False, 9000, Source.MBFC),
        ])

        [row] = report.rows
        self.assertEqual(row.source, "mbfc")
        self.assertEqual(row.urls, 4)
        self.assertAlmostEqual(row.not404, 75.0)
        self.assertAlmostEqual(row.notParked, 50.0)
        self.assertAlmostEqual(row.both, 50.0)
        self.assertAlmostEqual(row.over10k, 25.0)

    def test_one_dead_one_parked_and_two_popular_live_domains(self):
        report = survivalReport([
            self.probe("gone.example", 404, False, 300, Source.MBFC),
            self.probe("parked.example", 200, True, 800, Source.MBFC),
            self.probe("alive.example", 200, False, 25000, Source.MBFC),
            self.probe("busy.example", 200, False, 120000, Source.MBFC),
        ])

        [row] = report.rows
        self.assertEqual(row.urls, 4)
        self.assertAlmostEqual(row.not404, 75.0)
        self.assertAlmostEqual(row.notParked, 75.0)
        self.assertAlmostEqual(row.both, 50.0)
        self.assertAlmostEqual(row.over10k, 50.0)
        self.assertEqual(tuple(report.total), ("total", 4, 3, 3, 2, 2))

    def test_unknown_probe_results_pass_no_check(self):
        report = survivalReport([self.probe("a", None, None, None, Source.OTHER)])
        self.assertEqual(tuple(report.rows[0])[2:], (0.0, 0.0, 0.0, 0.0))

    def test_the_total_row_counts_each_domain_once(self):
        report = survivalReport([
            self.probe("a", 200, False, 20000, Source.MBFC),
            self.probe("a", 200, False, 20000, Source.SNOPES),
            self.probe("b", 404, False, 1, Source.SNOPES),
        ])

        self.assertEqual(tuple(report.total), ("total", 2, 1, 2, 1, 1))

    def test_the_frame_has_one_row_per_source_plus_the_total(self):
        report = survivalReport([
            self.probe("a", 200, False, 1, Source.SNOPES),
            self.probe("b", 200, False, 1, Source.MBFC),
        ])

        frame = report.toFrame()
        self.assertEqual(tuple(frame.columns), SURVIVAL_COLUMNS)
        self.assertEqual(list(frame["source"]), ["mbfc", "snopes", "total"])

class ReadProbeResultsTest(unittest.TestCase):
    def setUp(self):
        self.labels = readLabels(os.path.join(FIXTURES, "labels.csv"))

    def test_each_domain_yields_one_result_per_listing_source(self):
        with self.assertLogs("newsgraph.ingest.survival", level="WARNING"):
            probes = readProbeResults(os.path.join(FIXTURES, "probes.csv"), self.labels)

        self.assertEqual(
            [(p.domain, p.source) for p in probes],
            [
                ("fakenews.example", Source.MBFC),
                ("fakenews.example", Source.BLOCKLIST),
                ("realnews.example", Source.MBFC),
                ("realnews.example", Source.SNOPES),
                ("blog.example", Source.OTHER),
            ],
        )

    def test_empty_cells_are_unknown(self):
        with self.assertLogs("newsgraph.ingest.survival", level="WARNING"):
            probes = readProbeResults(os.path.join(FIXTURES, "probes.csv"), self.labels)

        blog = probes[-1]
        self.assertEqual(blog.httpStatus, 404)
        self.assertIsNone(blog.parked)
        self.assertIsNone(blog.providerBacklinkTotal)
        self.assertFalse(blog.notParked)

    def test_the_fixture_survival_table(self):
        with self.assertLogs("newsgraph.ingest.survival", level="WARNING"):
            probes = readProbeResults(os.path.join(FIXTURES, "probes.csv"), self.labels)

        report = survivalReport(probes)
        self.assertEqual([row.source for row in report.rows], ["mbfc", "snopes", "blocklist", "other"])
        self.assertEqual(tuple(report.rows[0]), ("mbfc", 2, 100.0, 100.0, 100.0, 100.0))
        self.assertEqual(tuple(report.rows[-1]), ("other", 1, 0.0, 0.0, 0.0, 0.0))
        self.assertEqual(tuple(report.total), ("total", 3, 2, 2, 2, 2))

    def test_a_parked_flag_other_than_zero_or_one_raises_ValidationError(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "probes.csv")
            with open(path, "w", encoding="utf-8") as f:
                f.write("domain,http_status,parked,provider_backlink_total\n")
                f.write("fakenews.example,200,2,1\n")

            self.assertRaises(ValidationError, readProbeResults, path, self.labels)

if __name__ == "__main__":
    unittest.main()
