__all__ = [
    "LinkScheme", "LinkSchemeCriteria", "identifyLinkSchemes", "unreliableDomains",
]

import dataclasses
import logging

import numpy as np

from newsgraph.ingest.labels import BinaryLabels, Reliability
from newsgraph.typing import *
from newsgraph.webgraph import AttributedWebgraph

logger = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True)
class LinkSchemeCriteria:
    """alphaMin bounds the total links into unreliable targets (depth), and
    betaMin the number of distinct unreliable targets (breadth)."""

    alphaMin: int = 0
    betaMin: int = 0

    def __post_init__(self) -> None:
        if self.alphaMin < 0 or self.betaMin < 0:
            errmsg = (
                "Link scheme criteria must be nonnegative"
                f" (alphaMin={self.alphaMin}, betaMin={self.betaMin})"
            )

            raise ValueError(errmsg)

class LinkScheme(NamedTuple):
    domain: str
    breadth: int
    depth: int

def unreliableDomains(labels: Mapping[str, BinaryLabels]) -> List[str]:
    return sorted(
        domain for domain, label in labels.items()
        if label.reliability is Reliability.UNRELIABLE
    )

def identifyLinkSchemes(
    graph: AttributedWebgraph,
    labels: Mapping[str, BinaryLabels],
    criteria: LinkSchemeCriteria = LinkSchemeCriteria(),
    strict: bool = False,
) -> List[LinkScheme]:
    """Flag the sources that link broadly and heavily into unreliable domains.

    A candidate is any source with at least one edge into a domain labeled
    unreliable. Its breadth counts those unreliable targets and its depth
    sums the links on those edges; it is kept iff breadth >= betaMin and
    depth >= alphaMin. With strict set, breadth and depth instead count
    every target of the candidate, reliable or not.

    Results are ordered by breadth, then depth, both descending, then by
    domain.
    """
    flagged = np.zeros(graph.nodeCount, dtype=np.bool_)
    for domain in unreliableDomains(labels):
        i = graph.nodeIndex.get(domain)
        if i is not None:
            flagged[i] = True

    intoUnreliable = flagged[graph.targets]
    candidate = np.zeros(graph.nodeCount, dtype=np.bool_)
    candidate[graph.sources[intoUnreliable]] = True

    counted = candidate[graph.sources] if strict else intoUnreliable
    sources = graph.sources[counted]

    breadth = np.bincount(sources, minlength=graph.nodeCount)
    depth = np.bincount(
        sources,
        weights=graph.links[counted],
        minlength=graph.nodeCount,
    ).astype(np.int64)

    keep = candidate & (breadth >= criteria.betaMin) & (depth >= criteria.alphaMin)

    schemes = [
        LinkScheme(graph.domains[i], int(breadth[i]), int(depth[i]))
        for i in np.flatnonzero(keep)
    ]

    schemes.sort(key=lambda s: (-s.breadth, -s.depth, s.domain))

    logger.info(
        "%d of %d candidate sources meet alpha >= %d, beta >= %d",
        len(schemes), int(candidate.sum()), criteria.alphaMin, criteria.betaMin,
    )

    return schemes
