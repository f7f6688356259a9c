__all__ = ["GraphSummary", "graphSummary", "undirectedProjection"]

import logging
import warnings

import networkx as nx
import numpy as np

from newsgraph.typing import *
from newsgraph.webgraph import AttributedWebgraph

logger = logging.getLogger(__name__)

class GraphSummary(NamedTuple):
    nodes: int
    edges: int
    averageDegree: float
    clustering: float
    pathLength: float
    density: float
    assortativity: Optional[float]
    empty: bool = False

def undirectedProjection(graph: AttributedWebgraph) -> nx.Graph:
    """Collapse direction and multiplicity into a simple undirected graph."""
    projection = nx.Graph()
    projection.add_nodes_from(range(graph.nodeCount))
    projection.add_edges_from(zip(graph.sources.tolist(), graph.targets.tolist()))
    return projection

def graphSummary(graph: AttributedWebgraph) -> GraphSummary:
    """Summary statistics of the undirected simple projection of a graph.

    The clustering coefficient is the mean local coefficient over all nodes
    (nodes of degree < 2 contribute 0). The characteristic path length is
    the mean shortest-path length between distinct nodes of the largest
    connected component. Degree assortativity is None when it is undefined,
    e.g. when every node has the same degree.
    """
    if graph.nodeCount == 0:
        return GraphSummary(0, 0, 0.0, 0.0, 0.0, 0.0, 0.0, empty=True)

    projection = undirectedProjection(graph)
    n = projection.number_of_nodes()
    m = projection.number_of_edges()

    largest = max(nx.connected_components(projection), key=len)
    if len(largest) > 1:
        pathLength = nx.average_shortest_path_length(
            projection.subgraph(largest)
        )
    else:
        pathLength = 0.0

    assortativity: Optional[float] = None
    if m > 0:
        with warnings.catch_warnings(), np.errstate(all="ignore"):
            warnings.simplefilter("ignore")
            try:
                value = nx.degree_assortativity_coefficient(projection)
            except (ValueError, ZeroDivisionError):
                value = float("nan")

        if np.isfinite(value):
            assortativity = float(value)

    summary = GraphSummary(
        nodes=n,
        edges=m,
        averageDegree=2.0 * m / n,
        clustering=float(nx.average_clustering(projection)),
        pathLength=float(pathLength),
        density=float(nx.density(projection)),
        assortativity=assortativity,
    )

    logger.debug("%s", summary)
    return summary
