__all__ = ["truncateTopN"]

import logging

import numpy as np

from newsgraph.typing import *
from newsgraph.utils import normalizeDomain
from newsgraph.webgraph import AttributedWebgraph, LinkKind

logger = logging.getLogger(__name__)

def truncateTopN(
    graph: AttributedWebgraph,
    n: int,
    kind: LinkKind,
    labeled: Optional[Iterable[str]] = None,
) -> AttributedWebgraph:
    """Keep only the n strongest edges of one kind around each labeled node.

    With kind=BACKLINK, the group of a node is the set of edges into it that
    were observed by the backlink pull; with kind=OUTLINK, the edges out of
    it observed by the outlink pull. Within a group, edges are ranked by
    descending link count, with ties broken by the domain at the other end
    of the edge in lexicographic order. Edges ranked below n are removed.
    Edges outside every group are left alone. If labeled is None, every
    node is treated as labeled.

    :raises ValueError: if n < 1, or kind is not a single pull
    """
    if n < 1:
        raise ValueError(f"n must be at least 1 (got {n})")

    if kind is LinkKind.BACKLINK:
        owners, others = graph.targets, graph.sources
    elif kind is LinkKind.OUTLINK:
        owners, others = graph.sources, graph.targets
    else:
        raise ValueError(f"Truncation needs a single link kind, not {kind}")

    grouped = np.ones(graph.nodeCount, dtype=np.bool_)
    if labeled is not None:
        grouped[:] = False
        for domain in labeled:
            i = graph.nodeIndex.get(normalizeDomain(domain))
            if i is not None:
                grouped[i] = True

    eligible = ((graph.kinds & kind.value) != 0) & grouped[owners]

    order = sorted(range(graph.nodeCount), key=graph.domains.__getitem__)
    domainRank = np.empty(graph.nodeCount, dtype=np.int64)
    domainRank[order] = np.arange(graph.nodeCount)

    candidates = np.flatnonzero(eligible)
    ranked = candidates[np.lexsort((
        domainRank[others[candidates]],
        -graph.links[candidates],
        owners[candidates],
    ))]

    groupOwners = owners[ranked]
    starts = np.ones(len(ranked), dtype=np.bool_)
    starts[1:] = groupOwners[1:] != groupOwners[:-1]
    startIndex = np.maximum.accumulate(
        np.where(starts, np.arange(len(ranked)), 0)
    )

    position = np.arange(len(ranked)) - startIndex

    keep = np.ones(graph.edgeCount, dtype=np.bool_)
    keep[ranked[position >= n]] = False

    logger.debug(
        "Top-%d %s truncation removed %d of %d edges",
        n, kind, graph.edgeCount - int(keep.sum()), graph.edgeCount,
    )

    return graph.withEdges(keep)
