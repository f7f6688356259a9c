__all__ = ["WeightScheme", "weightEdges"]

import enum
import logging

import numpy as np

from newsgraph.exception import *
from newsgraph.typing import *
from newsgraph.webgraph import AttributedWebgraph

logger = logging.getLogger(__name__)

class WeightScheme(enum.Enum):
    LINKS = "links"
    LOG_LINKS = "log_links"
    BACKLINK = "backlink"
    OUTLINK = "outlink"
    GRAPH_BACKLINK = "graph_backlink"
    GRAPH_OUTLINK = "graph_outlink"
    PAGE = "page"

    def __str__(self) -> str:
        return self.value

def _divide(
    numerator: Any,
    denominator: Any,
    endpoints: Any,
    graph: AttributedWebgraph,
) -> FloatArray:
    zero = denominator == 0
    if zero.any():
        domains = sorted({graph.domains[i] for i in endpoints[zero]})
        errmsg = f"Zero weight denominator for: {', '.join(domains)}"
        raise ZeroDenominatorError(errmsg)

    return numerator / denominator

def weightEdges(graph: AttributedWebgraph, scheme: WeightScheme) -> FloatArray:
    """Compute one nonnegative weight per edge, indexed by edge id.

    links           A_ij
    log_links       ln(A_ij)
    backlink        A_ij / provider backlink total of j
    outlink         A_ij / provider outlink total of i
    graph_backlink  A_ij / in-graph backlink sum of j
    graph_outlink   A_ij / in-graph outlink sum of i
    page            ref_pages(i -> j) / sum over k of ref_pages(k -> j)

    :raises MissingProviderTotalError:
        if the backlink or outlink scheme needs a provider total that is
        unknown for some edge endpoint
    :raises ZeroDenominatorError:
        if a denominator is 0
    """
    links = graph.links.astype(np.float64)
    sources = graph.sources
    targets = graph.targets

    if scheme is WeightScheme.LINKS:
        weights = links
    elif scheme is WeightScheme.LOG_LINKS:
        weights = np.log(links)
    elif scheme is WeightScheme.BACKLINK:
        unknown = ~graph.backlinkKnown[targets]
        if unknown.any():
            domains = (graph.domains[i] for i in targets[unknown])
            raise MissingProviderTotalError("backlink", domains)

        denominator = graph.backlinkTotals[targets].astype(np.float64)
        weights = _divide(links, denominator, targets, graph)
    elif scheme is WeightScheme.OUTLINK:
        unknown = ~graph.outlinkKnown[sources]
        if unknown.any():
            domains = (graph.domains[i] for i in sources[unknown])
            raise MissingProviderTotalError("outlink", domains)

        denominator = graph.outlinkTotals[sources].astype(np.float64)
        weights = _divide(links, denominator, sources, graph)
    elif scheme is WeightScheme.GRAPH_BACKLINK:
        denominator = graph.graphBacklinks[targets].astype(np.float64)
        weights = _divide(links, denominator, targets, graph)
    elif scheme is WeightScheme.GRAPH_OUTLINK:
        denominator = graph.graphOutlinks[sources].astype(np.float64)
        weights = _divide(links, denominator, sources, graph)
    elif scheme is WeightScheme.PAGE:
        refPages = graph.refPages.astype(np.float64)
        perTarget = np.bincount(
            targets,
            weights=refPages,
            minlength=graph.nodeCount,
        )

        weights = _divide(refPages, perTarget[targets], targets, graph)
    else:
        raise ValueError(f"Unsupported weight scheme: {scheme!r}")

    logger.debug("Weighted %d edges with %s", graph.edgeCount, scheme)
    return weights
