__all__ = ["AnnotationSetTest", "ClassificationMetricsTest", "KrippendorffAlphaTest"]

import itertools
import random
import unittest

from newsgraph.evaluation.metrics import *
from newsgraph.exception import *

def nominalAlpha(rows):
    """Alpha from the coincidence matrix of every pairable value."""
    coincidences = {}
    for row in rows:
        values = [v for v in row if v is not None]
        m = len(values)
        if m < 2:
            continue

        for a, b in itertools.permutations(range(m), 2):
            key = (values[a], values[b])
            coincidences[key] = coincidences.get(key, 0.0) + 1.0 / (m - 1)

    totals = {}
    for (c, _), o in coincidences.items():
        totals[c] = totals.get(c, 0.0) + o

    n = sum(totals.values())
    observed = sum(o for (c, k), o in coincidences.items() if c != k)
    expected = sum(totals[c] * totals[k] for c in totals for k in totals if c != k)
    return 1.0 - (n - 1) * observed / expected

class ClassificationMetricsTest(unittest.TestCase):
    def test_one_of_each_outcome_scores_one_half_everywhere(self):
        report = classificationMetrics([1, 1, 0, 0], [1, 0, 1, 0])

        self.assertEqual(
            (report.truePositives, report.falsePositives,
             report.falseNegatives, report.trueNegatives),
            (1, 1, 1, 1),
        )

        for value in (report.accuracy, report.precision, report.recall, report.f1):
            self.assertAlmostEqual(value, 0.5)

    def test_counts_match_a_counting_oracle(self):
        rng = random.Random(8)
        for _ in range(20):
            actual = [rng.randint(0, 1) for _ in range(30)]
            predicted = [rng.randint(0, 1) for _ in range(30)]
            report = classificationMetrics(predicted, actual)

            pairs = list(zip(predicted, actual))
            tp = pairs.count((1, 1))
            fp = pairs.count((1, 0))
            fn = pairs.count((0, 1))
            self.assertEqual(
                (report.truePositives, report.falsePositives, report.falseNegatives),
                (tp, fp, fn),
            )

            self.assertEqual(report.total, 30)

            if 2 * tp + fp + fn:
                self.assertAlmostEqual(report.f1, 2 * tp / (2 * tp + fp + fn))

    def test_the_positive_class_may_be_any_label(self):
        report = classificationMetrics(
            ["unreliable", "reliable"], ["unreliable", "unreliable"],
            positive="unreliable",
        )

        self.assertEqual((report.truePositives, report.falseNegatives), (1, 1))
        self.assertAlmostEqual(report.precision, 1.0)

    def test_no_positives_anywhere_is_flagged_as_undefined_f1(self):
        report = classificationMetrics([0, 0], [0, 0], task="reliability", seed=4)
        self.assertEqual(report.f1, 0.0)
        self.assertTrue(report.f1Undefined)
        self.assertEqual(report.accuracy, 1.0)
        self.assertEqual(report.asDict()["seed"], 4)

    def test_mismatched_or_empty_vectors_raise_ValueError(self):
        self.assertRaises(ValueError, classificationMetrics, [1, 0], [1])
        self.assertRaises(ValueError, classificationMetrics, [], [])

class AnnotationSetTest(unittest.TestCase):
    def test_records_are_collected_in_order_of_first_appearance(self):
        annotations = AnnotationSet.fromRecords([
            ("x.example", "ann", "left"),
            ("y.example", "bob", "right"),
            ("x.example", "bob", "center"),
        ])

        self.assertEqual(annotations.annotators, ("ann", "bob"))
        self.assertEqual(annotations.rows, [["left", "center"], [None, "right"]])

    def test_codes_follow_sorted_labels_with_nan_for_gaps(self):
        codes = AnnotationSet([["b", "a"], ["a", None]]).codes()
        self.assertEqual(codes.shape, (2, 2))
        self.assertEqual(codes[0].tolist(), [1.0, 0.0])
        self.assertEqual(codes[1, 0], 0.0)
        self.assertNotEqual(codes[1, 1], codes[1, 1])

    def test_a_single_annotator_raises_ValidationError(self):
        self.assertRaises(ValidationError, AnnotationSet, [["a"], ["b"]])

    def test_ragged_rows_raise_ValidationError(self):
        self.assertRaises(ValidationError, AnnotationSet, [["a", "b"], ["a"]])

class KrippendorffAlphaTest(unittest.TestCase):
    def test_perfect_agreement_gives_one(self):
        result = krippendorffAlpha(AnnotationSet([["a", "a"], ["b", "b"], ["a", "a"]]))
        self.assertAlmostEqual(result.alpha, 1.0)
        self.assertEqual(result.pairable, 6)

    def test_systematic_disagreement_is_negative(self):
        rows = [["a", "b"], ["b", "a"], ["a", "b"], ["b", "a"]]
        self.assertLess(krippendorffAlpha(AnnotationSet(rows)).alpha, 0.0)

    def test_alpha_matches_a_coincidence_matrix_oracle(self):
        rng = random.Random(21)
        for trial in range(15):
            rows = []
            for _ in range(12):
                row = [rng.choice(("left", "center", "right", None)) for _ in range(3)]
                rows.append(row)

            # keep the expected disagreement nonzero
            rows.append(["left", "right", None])

            result = krippendorffAlpha(AnnotationSet(rows))
            self.assertFalse(result.undefined)
            self.assertAlmostEqual(result.alpha, nominalAlpha(rows), delta=1e-9, msg=f"trial {trial}")

    def test_items_with_one_label_are_not_pairable(self):
        result = krippendorffAlpha(AnnotationSet([["a", None], [None, "b"]]))
        self.assertIsNone(result.alpha)
        self.assertEqual(result.pairable, 0)
        self.assertTrue(result.undefined)

    def test_a_single_shared_value_leaves_alpha_undefined(self):
        result = krippendorffAlpha(AnnotationSet([["a", "a"], ["a", "a"]]))
        self.assertIsNone(result.alpha)
        self.assertTrue(result.undefined)

if __name__ == "__main__":
    unittest.main()
