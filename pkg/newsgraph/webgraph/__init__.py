__all__ = [
    "AttributeManifest", "AttributedWebgraph", "CANONICAL_ATTRIBUTES",
    "DomainNode", "EdgeRecord", "LinkEdge", "LinkKind", "NodeRecord",
    "buildGraph",
]

import enum
import logging

import numpy as np
import scipy.sparse

from newsgraph.exception import *
from newsgraph.typing import *
from newsgraph.utils import normalizeDomain, typename

logger = logging.getLogger(__name__)

CANONICAL_ATTRIBUTES = (
    "backlinks",
    "refpages",
    "refdomains",
    "edu",
    "gov",
    "ugc",
    "domain_rating",
)

class LinkKind(enum.Flag):
    """Which top-N pull observed an edge.

    An edge reported by both the backlink pull of its target and the outlink
    pull of its source carries BACKLINK | OUTLINK.
    """

    BACKLINK = 1
    OUTLINK = 2

    @classmethod
    def parse(cls, text: str) -> "LinkKind":
        kind = cls(0)
        for part in text.split("|"):
            try:
                kind |= cls[part.strip().upper()]
            except KeyError as err:
                errmsg = f"Unknown link kind: {text!r}"
                raise ValueError(errmsg) from err

        if not kind:
            raise ValueError(f"Unknown link kind: {text!r}")

        return kind

    def __str__(self) -> str:
        parts = [
            member.name.lower()
            for member in (LinkKind.BACKLINK, LinkKind.OUTLINK)
            if member in self
        ]

        return "|".join(parts)

@final
class AttributeManifest:
    def __init__(self, names: Iterable[str]) -> None:
        self.names = tuple(names)

        seen: Set[str] = set()
        duplicates = [n for n in self.names if n in seen or seen.add(n)]
        if duplicates:
            errmsg = f"Duplicate attribute names: {', '.join(duplicates)}"
            raise ValidationError(errmsg)

        self._index = {name: i for i, name in enumerate(self.names)}

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AttributeManifest):
            return NotImplemented

        return self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"{typename(self)}({self.names!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError as err:
            raise ValueError(f"Unknown attribute: {name!r}") from err

    def missingCanonical(self) -> Tuple[str, ...]:
        return tuple(n for n in CANONICAL_ATTRIBUTES if n not in self._index)

class NodeRecord(NamedTuple):
    domain: str
    providerBacklinkTotal: Optional[int]
    providerOutlinkTotal: Optional[int]
    attributes: Tuple[float, ...]

class EdgeRecord(NamedTuple):
    source: str
    target: str
    kind: LinkKind
    links: int
    refPages: int

class DomainNode(NamedTuple):
    id: int
    domain: str
    attributes: Tuple[float, ...]
    providerBacklinkTotal: Optional[int]
    providerOutlinkTotal: Optional[int]

class LinkEdge(NamedTuple):
    id: int
    source: int
    target: int
    links: int
    refPages: int
    kind: LinkKind

def _frozen(array: Any, dtype: Any) -> Any:
    array = np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array

@final
class AttributedWebgraph:
    """An immutable directed domain graph with per-node SEO attributes.

    Nodes are numbered 0..nodeCount-1 and edges 0..edgeCount-1; edges are
    unique per (source, target) and sorted by that pair. All array
    attributes are read-only views. Provider totals are stored alongside a
    boolean mask, so that an unknown total is never confused with 0.
    """

    def __init__(self,
        domains: Sequence[str],
        attributes: Any,
        backlinkTotals: Any,
        backlinkKnown: Any,
        outlinkTotals: Any,
        outlinkKnown: Any,
        sources: Any,
        targets: Any,
        links: Any,
        refPages: Any,
        kinds: Any,
        manifest: AttributeManifest,
    ) -> None:
        self.domains = tuple(domains)
        self.manifest = manifest
        self.nodeIndex = {domain: i for i, domain in enumerate(self.domains)}

        n = len(self.domains)
        self.attributes = _frozen(
            np.reshape(attributes, (n, len(manifest))),
            np.float64,
        )

        self.backlinkTotals = _frozen(backlinkTotals, np.int64)
        self.backlinkKnown = _frozen(backlinkKnown, np.bool_)
        self.outlinkTotals = _frozen(outlinkTotals, np.int64)
        self.outlinkKnown = _frozen(outlinkKnown, np.bool_)

        self.sources = _frozen(sources, np.int64)
        self.targets = _frozen(targets, np.int64)
        self.links = _frozen(links, np.int64)
        self.refPages = _frozen(refPages, np.int64)
        self.kinds = _frozen(kinds, np.int64)

        self.graphBacklinks = _frozen(
            np.bincount(self.targets, weights=self.links, minlength=n),
            np.int64,
        )

        self.graphOutlinks = _frozen(
            np.bincount(self.sources, weights=self.links, minlength=n),
            np.int64,
        )

    def __repr__(self) -> str:
        return (
            f"<{typename(self)}: {self.nodeCount} nodes,"
            f" {self.edgeCount} edges, {len(self.manifest)} attributes>"
        )

    @property
    def nodeCount(self) -> int:
        return len(self.domains)

    @property
    def edgeCount(self) -> int:
        return len(self.sources)

    def node(self, key: Union[int, str]) -> DomainNode:
        i = self.nodeIndex[key] if isinstance(key, str) else int(key)

        return DomainNode(
            i,
            self.domains[i],
            tuple(float(x) for x in self.attributes[i]),
            int(self.backlinkTotals[i]) if self.backlinkKnown[i] else None,
            int(self.outlinkTotals[i]) if self.outlinkKnown[i] else None,
        )

    def edge(self, i: int) -> LinkEdge:
        return LinkEdge(
            i,
            int(self.sources[i]),
            int(self.targets[i]),
            int(self.links[i]),
            int(self.refPages[i]),
            LinkKind(int(self.kinds[i])),
        )

    @property
    def nodes(self) -> List[DomainNode]:
        return [self.node(i) for i in range(self.nodeCount)]

    @property
    def edges(self) -> List[LinkEdge]:
        return [self.edge(i) for i in range(self.edgeCount)]

    def checkDegrees(self) -> None:
        """Recompute the in-graph degree sums from the edges and compare."""
        n = self.nodeCount
        backlinks = np.zeros(n, dtype=np.int64)
        outlinks = np.zeros(n, dtype=np.int64)
        np.add.at(backlinks, self.targets, self.links)
        np.add.at(outlinks, self.sources, self.links)

        if not (np.array_equal(backlinks, self.graphBacklinks)
        and np.array_equal(outlinks, self.graphOutlinks)):
            raise NewsgraphLibraryBug("Degree cache disagrees with the edges")

    def withEdges(self, keep: Any) -> "AttributedWebgraph":
        """Copy the graph, keeping every node but only the selected edges."""
        keep = np.asarray(keep, dtype=np.bool_)
        return AttributedWebgraph(
            self.domains,
            self.attributes,
            self.backlinkTotals,
            self.backlinkKnown,
            self.outlinkTotals,
            self.outlinkKnown,
            self.sources[keep],
            self.targets[keep],
            self.links[keep],
            self.refPages[keep],
            self.kinds[keep],
            self.manifest,
        )

    def network(self, kind: LinkKind) -> "AttributedWebgraph":
        """Extract the backlink, outlink, or combined network.

        An edge belongs to the network if it was observed by any of the pulls
        named in kind, so BACKLINK | OUTLINK returns the whole graph.
        """
        return self.withEdges((self.kinds & kind.value) != 0)

    def adjacencyMatrix(self, weights: Optional[Any] = None) -> scipy.sparse.csr_matrix:
        """Build the n x n sparse matrix with entry (source, target) per edge.

        The default entry is the edge's link count.
        """
        n = self.nodeCount
        data = self.links if weights is None else np.asarray(weights)
        return scipy.sparse.csr_matrix(
            (data.astype(np.float64), (self.sources, self.targets)),
            shape=(n, n),
        )

    def featureMatrix(self) -> FloatArray:
        return np.array(self.attributes)

def buildGraph(
    nodes: Iterable[NodeRecord],
    edges: Iterable[EdgeRecord],
    manifest: AttributeManifest,
) -> AttributedWebgraph:
    """Validate node and edge records and assemble an AttributedWebgraph.

    Domains are normalized before any join. Node ids follow the order of the
    node records. Edge records with the same (source, target) pair are
    merged into one edge by summing links and reference pages, and the
    kinds of the merged records are combined. Self-links are skipped.

    :raises ManifestMismatchError:
        if an attribute vector does not match the manifest length
    :raises DanglingEdgeError:
        if an edge endpoint is not declared as a node
    :raises ValidationError:
        for duplicate domains, negative totals, non-positive link or
        reference page counts, or a provider total below the in-graph sum
    """
    width = len(manifest)

    domains: List[str] = []
    index: Dict[str, int] = {}
    attributes: List[Tuple[float, ...]] = []
    backlinkTotals: List[int] = []
    backlinkKnown: List[bool] = []
    outlinkTotals: List[int] = []
    outlinkKnown: List[bool] = []

    for record in nodes:
        domain = normalizeDomain(record.domain)
        if domain in index:
            raise ValidationError(f"Duplicate node domain: {domain}")

        if len(record.attributes) != width:
            errmsg = (
                f"{domain} has {len(record.attributes)} attributes,"
                f" but the manifest declares {width}"
            )

            raise ManifestMismatchError(errmsg)

        for total in (record.providerBacklinkTotal, record.providerOutlinkTotal):
            if total is not None and total < 0:
                errmsg = f"{domain} has a negative provider total ({total})"
                raise ValidationError(errmsg)

        index[domain] = len(domains)
        domains.append(domain)
        attributes.append(tuple(record.attributes))

        backlinkKnown.append(record.providerBacklinkTotal is not None)
        backlinkTotals.append(record.providerBacklinkTotal or 0)
        outlinkKnown.append(record.providerOutlinkTotal is not None)
        outlinkTotals.append(record.providerOutlinkTotal or 0)

    merged: Dict[Tuple[int, int], List[int]] = {}
    dangling: List[str] = []
    selfLinks = 0

    for record in edges:
        source = normalizeDomain(record.source)
        target = normalizeDomain(record.target)

        if source not in index or target not in index:
            dangling.extend(d for d in (source, target) if d not in index)
            continue

        if record.links < 1 or record.refPages < 1:
            errmsg = (
                f"Edge {source} -> {target} must have links >= 1 and"
                f" ref_pages >= 1 (got {record.links}, {record.refPages})"
            )

            raise ValidationError(errmsg)

        if source == target:
            selfLinks += 1
            continue

        key = (index[source], index[target])
        try:
            entry = merged[key]
        except KeyError:
            merged[key] = [record.links, record.refPages, record.kind.value]
        else:
            entry[0] += record.links
            entry[1] += record.refPages
            entry[2] |= record.kind.value

    if dangling:
        raise DanglingEdgeError(dangling)

    if selfLinks:
        logger.warning("Skipped %d self-link record(s)", selfLinks)

    keys = sorted(merged)
    values = np.array([merged[key] for key in keys], dtype=np.int64)
    values = values.reshape(len(keys), 3)
    pairs = np.array(keys, dtype=np.int64).reshape(len(keys), 2)

    graph = AttributedWebgraph(
        domains,
        np.array(attributes, dtype=np.float64).reshape(len(domains), width),
        backlinkTotals,
        backlinkKnown,
        outlinkTotals,
        outlinkKnown,
        pairs[:, 0],
        pairs[:, 1],
        values[:, 0],
        values[:, 1],
        values[:, 2],
        manifest,
    )

    short = [
        graph.domains[i] for i in range(graph.nodeCount)
        if (graph.backlinkKnown[i]
            and graph.backlinkTotals[i] < graph.graphBacklinks[i])
        or (graph.outlinkKnown[i]
            and graph.outlinkTotals[i] < graph.graphOutlinks[i])
    ]

    if short:
        errmsg = (
            "Provider totals are below the in-graph link sums for: "
            + ", ".join(short)
        )

        raise ValidationError(errmsg)

    logger.debug("Built %r", graph)
    return graph
