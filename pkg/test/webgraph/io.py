__all__ = ["ReadGraphTest", "WriteGraphTest"]

import math
import os
import tempfile
import unittest

from newsgraph.exception import *
from newsgraph.webgraph import *
from newsgraph.webgraph.io import *

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(__file__)), "fixtures")

def fixture(name):
    return os.path.join(FIXTURES, name)

class ReadGraphTest(unittest.TestCase):
    def setUp(self):
        self.graph = readGraph(fixture("nodes.csv"), fixture("edges.csv"))

    def test_attribute_columns_follow_the_fixed_columns_in_file_order(self):
        self.assertEqual(self.graph.manifest.names, ("refdomains", "edu"))

    def test_domains_are_normalized_in_node_order(self):
        self.assertEqual(self.graph.domains, (
            "fakenews.example", "realnews.example", "blog.example", "hub.example",
        ))

    def test_empty_cells_become_unknown_totals_and_missing_attributes(self):
        blog = self.graph.node("blog.example")
        self.assertIsNone(blog.providerBacklinkTotal)
        self.assertEqual(blog.providerOutlinkTotal, 40)
        self.assertTrue(math.isnan(blog.attributes[1]))

    def test_records_for_the_same_pair_are_merged_across_kinds(self):
        i = self.graph.nodeIndex["hub.example"]
        j = self.graph.nodeIndex["fakenews.example"]

        [edge] = [e for e in self.graph.edges if (e.source, e.target) == (i, j)]
        self.assertEqual(edge.links, 150)
        self.assertEqual(edge.refPages, 20)
        self.assertEqual(edge.kind, LinkKind.BACKLINK | LinkKind.OUTLINK)

    def test_edge_endpoints_given_as_urls_are_joined_by_domain(self):
        i = self.graph.nodeIndex["realnews.example"]
        j = self.graph.nodeIndex["blog.example"]
        self.assertIn((i, j), {(e.source, e.target) for e in self.graph.edges})

    def test_a_missing_required_column_raises_ValidationError(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "nodes.csv")
            with open(path, "w", encoding="utf-8") as f:
                f.write("domain,provider_backlink_total\na.example,1\n")

            self.assertRaises(ValidationError, readNodes, path)

    def test_a_fractional_count_raises_ValidationError(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "edges.csv")
            with open(path, "w", encoding="utf-8") as f:
                f.write("source,target,kind,links,ref_pages\na,b,backlink,1.5,1\n")

            self.assertRaises(ValidationError, readEdges, path)

    def test_an_unknown_link_kind_raises_ValidationError(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "edges.csv")
            with open(path, "w", encoding="utf-8") as f:
                f.write("source,target,kind,links,ref_pages\na,b,sidelink,1,1\n")

            self.assertRaises(ValidationError, readEdges, path)

class WriteGraphTest(unittest.TestCase):
    def test_a_written_graph_reads_back_with_the_same_content(self):
        graph = readGraph(fixture("nodes.csv"), fixture("edges.csv"))

        with tempfile.TemporaryDirectory() as tmp:
            nodesPath = os.path.join(tmp, "nodes.csv")
            edgesPath = os.path.join(tmp, "edges.csv")
            writeNodes(graph, nodesPath)
            writeEdges(graph, edgesPath)
            copy = readGraph(nodesPath, edgesPath)

        self.assertEqual(copy.domains, graph.domains)
        self.assertEqual(copy.manifest, graph.manifest)
        self.assertEqual(copy.edges, graph.edges)
        self.assertEqual(
            [n.providerBacklinkTotal for n in copy.nodes],
            [n.providerBacklinkTotal for n in graph.nodes],
        )

if __name__ == "__main__":
    unittest.main()
