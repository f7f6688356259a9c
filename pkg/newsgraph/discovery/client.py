__all__ = ["DomainMetrics", "FixtureLinkClient", "LinkDataClient", "collectMetrics"]

import logging

import numpy as np

from newsgraph.exception import *
from newsgraph.typing import *
from newsgraph.utils import normalizeDomain, typename
from newsgraph.webgraph import AttributeManifest, EdgeRecord, LinkKind, NodeRecord
from newsgraph.webgraph.io import readEdges, readNodes

logger = logging.getLogger(__name__)

class LinkDataClient:
    """Source of top-N link pulls and per-domain metrics.

    Every method raises LinkDataUnavailable for a domain the source knows
    nothing about. manifest names the attributes returned by getMetrics().
    """

    manifest: AttributeManifest

    def getBacklinks(self, domain: str, n: int) -> List[EdgeRecord]:
        """The n edges into domain with the most links."""
        raise NotImplementedError()

    def getOutlinks(self, domain: str, n: int) -> List[EdgeRecord]:
        """The n edges out of domain with the most links."""
        raise NotImplementedError()

    def getMetrics(self, domain: str) -> NodeRecord:
        raise NotImplementedError()

def _checkCount(n: int) -> None:
    if n < 1:
        raise ValueError(f"Link pulls need n >= 1 (got {n})")

@final
class FixtureLinkClient(LinkDataClient):
    """Replay nodes and edges recorded in the delimited-text formats.

    Records for the same (source, target) pair are merged by summing links
    and reference pages. Pull results are ordered by links, most first,
    with ties broken by the other endpoint's domain. Edges may name domains
    that have no node record; such domains appear in pulls, but their own
    pulls and metrics are unavailable.
    """

    def __init__(self,
        nodes: Iterable[NodeRecord],
        edges: Iterable[EdgeRecord],
        manifest: AttributeManifest,
    ) -> None:
        self.manifest = manifest
        self.metrics: Dict[str, NodeRecord] = {}
        for node in nodes:
            domain = normalizeDomain(node.domain)
            self.metrics[domain] = node._replace(domain=domain)

        merged: Dict[Tuple[str, str], Tuple[int, int]] = {}
        for edge in edges:
            key = (normalizeDomain(edge.source), normalizeDomain(edge.target))
            if key[0] == key[1]:
                continue

            links, refPages = merged.get(key, (0, 0))
            merged[key] = (links + edge.links, refPages + edge.refPages)

        self.backlinks: Dict[str, List[EdgeRecord]] = {}
        self.outlinks: Dict[str, List[EdgeRecord]] = {}
        for (source, target), (links, refPages) in merged.items():
            self.backlinks.setdefault(target, []).append(
                EdgeRecord(source, target, LinkKind.BACKLINK, links, refPages)
            )

            self.outlinks.setdefault(source, []).append(
                EdgeRecord(source, target, LinkKind.OUTLINK, links, refPages)
            )

        for records in self.backlinks.values():
            records.sort(key=lambda e: (-e.links, e.source))

        for records in self.outlinks.values():
            records.sort(key=lambda e: (-e.links, e.target))

    def __repr__(self) -> str:
        edges = sum(len(records) for records in self.outlinks.values())
        return f"<{typename(self)}: {len(self.metrics)} domains, {edges} edges>"

    @classmethod
    def load(cls, nodesPath: PathLike, edgesPath: PathLike) -> "FixtureLinkClient":
        nodes, manifest = readNodes(nodesPath)
        return cls(nodes, readEdges(edgesPath), manifest)

    @property
    def domains(self) -> List[str]:
        return sorted(self.metrics)

    def _lookup(self, domain: str) -> str:
        key = normalizeDomain(domain)
        if key not in self.metrics:
            raise LinkDataUnavailable(f"No link data for {key}")

        return key

    def getBacklinks(self, domain: str, n: int) -> List[EdgeRecord]:
        _checkCount(n)
        return self.backlinks.get(self._lookup(domain), [])[:n]

    def getOutlinks(self, domain: str, n: int) -> List[EdgeRecord]:
        _checkCount(n)
        return self.outlinks.get(self._lookup(domain), [])[:n]

    def getMetrics(self, domain: str) -> NodeRecord:
        return self.metrics[self._lookup(domain)]

class DomainMetrics(NamedTuple):
    domains: List[str]
    attributes: FloatArray
    backlinkTotals: List[Optional[int]]
    unavailable: List[str]

def collectMetrics(client: LinkDataClient, domains: Iterable[str]) -> DomainMetrics:
    """Fetch metrics for each domain, setting aside those the client lacks.

    attributes has one row per available domain, in the client's manifest
    order, with NaN wherever the provider reported no value.
    """
    found: List[str] = []
    rows: List[Tuple[float, ...]] = []
    totals: List[Optional[int]] = []
    unavailable: List[str] = []

    for domain in domains:
        try:
            record = client.getMetrics(domain)
        except LinkDataUnavailable:
            unavailable.append(domain)
            continue

        found.append(record.domain)
        rows.append(record.attributes)
        totals.append(record.providerBacklinkTotal)

    if unavailable:
        logger.warning("No metrics for %d domain(s)", len(unavailable))

    attributes = np.array(rows, dtype=np.float64).reshape(len(rows), len(client.manifest))
    return DomainMetrics(found, attributes, totals, unavailable)
