__all__ = [
    "AttributeManifestTest", "BuildGraphTest", "LinkKindTest", "NetworkTest",
]

import unittest

import numpy as np

from newsgraph.exception import *
from newsgraph.webgraph import *

B = LinkKind.BACKLINK
O = LinkKind.OUTLINK

def nodes(*domains, totals=None):
    return [
        NodeRecord(d, None if totals is None else totals[i], None, (float(i),))
        for i, d in enumerate(domains)
    ]

class LinkKindTest(unittest.TestCase):
    def test_parse_accepts_single_kinds_and_unions(self):
        self.assertEqual(LinkKind.parse("backlink"), B)
        self.assertEqual(LinkKind.parse("OUTLINK"), O)
        self.assertEqual(LinkKind.parse("backlink|outlink"), B | O)

    def test_str_renders_a_form_that_parse_accepts(self):
        for kind in (B, O, B | O):
            self.assertEqual(LinkKind.parse(str(kind)), kind)

    def test_parse_raises_ValueError_for_unknown_kinds(self):
        self.assertRaises(ValueError, LinkKind.parse, "sidelink")
        self.assertRaises(ValueError, LinkKind.parse, "")

class AttributeManifestTest(unittest.TestCase):
    def test_index_follows_declaration_order(self):
        manifest = AttributeManifest(("b", "a", "c"))
        self.assertEqual(manifest.index("a"), 1)
        self.assertEqual(list(manifest), ["b", "a", "c"])

    def test_duplicate_names_raise_ValidationError(self):
        self.assertRaises(ValidationError, AttributeManifest, ("a", "b", "a"))

    def test_unknown_names_raise_ValueError(self):
        self.assertRaises(ValueError, AttributeManifest(("a",)).index, "z")

    def test_missing_canonical_attributes_are_reported_in_canonical_order(self):
        manifest = AttributeManifest(("refdomains", "extra"))
        missing = manifest.missingCanonical()
        self.assertNotIn("refdomains", missing)
        self.assertEqual(
            missing,
            tuple(n for n in CANONICAL_ATTRIBUTES if n != "refdomains"),
        )

    def test_manifests_with_the_same_names_are_equal(self):
        self.assertEqual(AttributeManifest(("x", "y")), AttributeManifest(["x", "y"]))
        self.assertNotEqual(AttributeManifest(("x", "y")), AttributeManifest(("y", "x")))

class BuildGraphTest(unittest.TestCase):
    def setUp(self):
        self.manifest = AttributeManifest(("score",))

    def test_domains_are_normalized_before_edges_are_joined(self):
        graph = buildGraph(
            nodes("https://www.A.example/", "b.example"),
            [EdgeRecord("a.example", "WWW.B.EXAMPLE", B, 3, 1)],
            self.manifest,
        )

        self.assertEqual(graph.domains, ("a.example", "b.example"))
        self.assertEqual(graph.edge(0).source, 0)
        self.assertEqual(graph.edge(0).target, 1)

    def test_duplicate_edges_are_merged_by_summation_and_kinds_are_combined(self):
        graph = buildGraph(
            nodes("a.example", "b.example"),
            [
                EdgeRecord("a.example", "b.example", B, 3, 2),
                EdgeRecord("a.example", "b.example", O, 4, 1),
            ],
            self.manifest,
        )

        self.assertEqual(graph.edgeCount, 1)
        edge = graph.edge(0)
        self.assertEqual((edge.links, edge.refPages, edge.kind), (7, 3, B | O))

    def test_edges_are_sorted_by_source_then_target_id(self):
        graph = buildGraph(
            nodes("a", "b", "c"),
            [
                EdgeRecord("c", "a", B, 1, 1),
                EdgeRecord("a", "c", B, 1, 1),
                EdgeRecord("a", "b", B, 1, 1),
            ],
            self.manifest,
        )

        pairs = [(e.source, e.target) for e in graph.edges]
        self.assertEqual(pairs, [(0, 1), (0, 2), (2, 0)])

    def test_self_links_are_skipped_with_a_warning(self):
        with self.assertLogs("newsgraph.webgraph", level="WARNING") as logs:
            graph = buildGraph(
                nodes("a", "b"),
                [EdgeRecord("a", "a", B, 5, 1), EdgeRecord("www.a", "a", O, 1, 1),
                 EdgeRecord("a", "b", B, 1, 1)],
                self.manifest,
            )

        self.assertEqual(graph.edgeCount, 1)
        self.assertEqual(graph.graphBacklinks[0], 0)
        self.assertIn("2 self-link", logs.output[0])

    def test_an_edge_to_an_undeclared_domain_raises_DanglingEdgeError(self):
        with self.assertRaises(DanglingEdgeError) as context:
            buildGraph(nodes("a"), [EdgeRecord("a", "ghost", B, 1, 1)], self.manifest)

        self.assertEqual(context.exception.domains, ("ghost",))

    def test_an_attribute_vector_of_the_wrong_length_raises_ManifestMismatchError(self):
        records = [NodeRecord("a", None, None, (1.0, 2.0))]
        self.assertRaises(ManifestMismatchError, buildGraph, records, [], self.manifest)

    def test_a_provider_total_below_the_in_graph_sum_is_rejected(self):
        self.assertRaises(
            ValidationError,
            buildGraph,
            nodes("a", "b", totals=[None, 4]),
            [EdgeRecord("a", "b", B, 5, 1)],
            self.manifest,
        )

    def test_unknown_provider_totals_are_kept_apart_from_zero(self):
        graph = buildGraph(nodes("a", "b", totals=[None, 0]), [], self.manifest)
        self.assertIsNone(graph.node("a").providerBacklinkTotal)
        self.assertEqual(graph.node("b").providerBacklinkTotal, 0)

    def test_nonpositive_link_counts_are_rejected(self):
        self.assertRaises(
            ValidationError,
            buildGraph,
            nodes("a", "b"),
            [EdgeRecord("a", "b", B, 0, 1)],
            self.manifest,
        )

    def test_in_graph_degree_sums_match_a_recount_of_the_edges(self):
        graph = buildGraph(
            nodes("a", "b", "c"),
            [
                EdgeRecord("a", "b", B, 3, 1),
                EdgeRecord("c", "b", B, 2, 1),
                EdgeRecord("b", "a", O, 7, 1),
            ],
            self.manifest,
        )

        graph.checkDegrees()
        self.assertEqual(graph.graphBacklinks.tolist(), [7, 5, 0])
        self.assertEqual(graph.graphOutlinks.tolist(), [3, 7, 2])

    def test_the_arrays_of_a_graph_are_read_only(self):
        graph = buildGraph(nodes("a", "b"), [EdgeRecord("a", "b", B, 1, 1)], self.manifest)
        self.assertRaises(ValueError, graph.links.__setitem__, 0, 9)

    def test_the_adjacency_matrix_holds_link_counts_at_source_target(self):
        graph = buildGraph(
            nodes("a", "b", "c"),
            [EdgeRecord("a", "b", B, 3, 1), EdgeRecord("c", "a", B, 2, 1)],
            self.manifest,
        )

        expected = np.zeros((3, 3))
        expected[0, 1] = 3
        expected[2, 0] = 2
        self.assertTrue(np.array_equal(graph.adjacencyMatrix().toarray(), expected))

class NetworkTest(unittest.TestCase):
    def setUp(self):
        self.graph = buildGraph(
            nodes("a", "b", "c"),
            [
                EdgeRecord("a", "b", B, 1, 1),
                EdgeRecord("b", "c", O, 1, 1),
                EdgeRecord("c", "a", B, 1, 1),
                EdgeRecord("c", "a", O, 1, 1),
            ],
            AttributeManifest(("score",)),
        )

    def test_the_backlink_network_keeps_edges_observed_by_a_backlink_pull(self):
        network = self.graph.network(B)
        self.assertEqual(network.nodeCount, 3)
        self.assertEqual({(e.source, e.target) for e in network.edges}, {(0, 1), (2, 0)})

    def test_the_outlink_network_keeps_edges_observed_by_an_outlink_pull(self):
        network = self.graph.network(O)
        self.assertEqual({(e.source, e.target) for e in network.edges}, {(1, 2), (2, 0)})

    def test_the_combined_network_is_the_whole_graph(self):
        self.assertEqual(self.graph.network(B | O).edgeCount, self.graph.edgeCount)

if __name__ == "__main__":
    unittest.main()
