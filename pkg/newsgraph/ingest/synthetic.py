__all__ = [
    "SyntheticConfig", "SyntheticWebgraph", "classLabels",
    "generateSyntheticWebgraph",
]

import dataclasses
import logging

import numpy as np

from newsgraph.exception import *
from newsgraph.ingest.labels import BinaryLabels, Grade, Source, binarize
from newsgraph.typing import *
from newsgraph.webgraph import *

logger = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True)
class SyntheticConfig:
    """Parameters of a planted-partition webgraph.

    homophily is the probability that an edge stays within its source's
    class. Each informative attribute shifts the mean of one class by
    attributeSignal; noise attributes are standard normal for every class.
    """

    nodeCount: int = 500
    classCount: int = 2
    homophily: float = 0.9
    attributeSignal: float = 1.0
    meanDegree: float = 8.0
    seed: int = 0
    informativeAttributes: int = 4
    noiseAttributes: int = 4
    meanLinks: float = 20.0
    unlabeledFraction: float = 0.0
    outlinkFraction: float = 0.0
    providerExtraMean: float = 50.0

    def __post_init__(self) -> None:
        problems = []
        if self.classCount < 1:
            problems.append("classCount must be at least 1")
        if self.nodeCount < self.classCount:
            problems.append("nodeCount must be at least classCount")
        if not 0.0 <= self.homophily <= 1.0:
            problems.append("homophily must lie in [0, 1]")
        if self.attributeSignal < 0.0:
            problems.append("attributeSignal must be nonnegative")
        if not 0.0 < self.meanDegree < self.nodeCount:
            problems.append("meanDegree must lie strictly between 0 and nodeCount")
        if self.meanLinks < 1.0:
            problems.append("meanLinks must be at least 1")
        if self.informativeAttributes < 0 or self.noiseAttributes < 0:
            problems.append("attribute counts must be nonnegative")
        if not 0.0 <= self.unlabeledFraction < 1.0:
            problems.append("unlabeledFraction must lie in [0, 1)")
        if not 0.0 <= self.outlinkFraction <= 1.0:
            problems.append("outlinkFraction must lie in [0, 1]")
        if self.providerExtraMean < 1.0:
            problems.append("providerExtraMean must be at least 1")

        if problems:
            raise ValidationError("Infeasible synthetic config: " + "; ".join(problems))

    def replace(self, **changes: Any) -> "SyntheticConfig":
        return dataclasses.replace(self, **changes)

class SyntheticWebgraph(NamedTuple):
    graph: AttributedWebgraph
    labels: Dict[str, BinaryLabels]
    classes: IntArray

def classLabels(cls: int) -> BinaryLabels:
    """Class 0 is reliable, center and left; every other class is
    unreliable, extreme and right."""
    if cls == 0:
        return binarize(Grade.HIGH, -1, Source.OTHER)
    else:
        return binarize(Grade.LOW, 2, Source.OTHER)

def _sampleEdges(
    config: SyntheticConfig,
    classes: IntArray,
    rng: np.random.Generator,
) -> List[Tuple[int, int]]:
    n = config.nodeCount
    wanted = int(round(n * config.meanDegree / 2))

    members = [np.flatnonzero(classes == c) for c in range(config.classCount)]
    outsiders = [np.flatnonzero(classes != c) for c in range(config.classCount)]
    position = np.empty(n, dtype=np.int64)
    for group in members:
        position[group] = np.arange(len(group))

    edges: Set[Tuple[int, int]] = set()
    ordered: List[Tuple[int, int]] = []
    attempts = 0
    limit = 50 * wanted + 1000

    while len(ordered) < wanted:
        batch = wanted - len(ordered)
        sources = rng.integers(0, n, size=batch)
        intra = rng.random(batch) < config.homophily
        picks = rng.random(batch)

        for source, same, u in zip(sources.tolist(), intra.tolist(), picks.tolist()):
            attempts += 1
            if attempts > limit:
                errmsg = (
                    f"Unable to place {wanted} distinct edges;"
                    " lower meanDegree or adjust homophily"
                )

                raise ValidationError(errmsg)

            c = classes[source]
            if same:
                group = members[c]
                if len(group) < 2:
                    continue

                k = int(u * (len(group) - 1))
                if k >= position[source]:
                    k += 1

                target = int(group[k])
            else:
                group = outsiders[c]
                if len(group) == 0:
                    continue

                target = int(group[int(u * len(group))])

            if (source, target) not in edges:
                edges.add((source, target))
                ordered.append((source, target))

    return ordered

def generateSyntheticWebgraph(config: SyntheticConfig) -> SyntheticWebgraph:
    """Sample a planted-partition webgraph with class-conditional attributes.

    Classes are balanced and assigned by a seeded permutation. Link counts
    are geometric with mean meanLinks; reference pages are uniform on
    [1, links]. Provider totals are the in-graph sums plus a geometric
    excess, so they always dominate the in-graph sums. Labels are returned
    for every node except a random unlabeledFraction of them.
    """
    rng = np.random.default_rng(config.seed)
    n = config.nodeCount

    classes = rng.permutation(np.arange(n) % config.classCount)
    pairs = _sampleEdges(config, classes, rng)
    m = len(pairs)

    links = rng.geometric(1.0 / config.meanLinks, size=m)
    refPages = rng.integers(1, links + 1)
    outlinkObserved = rng.random(m) < config.outlinkFraction

    means = np.zeros((n, config.informativeAttributes))
    for j in range(config.informativeAttributes):
        means[:, j] = config.attributeSignal * (classes == j % config.classCount)

    informative = means + rng.standard_normal((n, config.informativeAttributes))
    noise = rng.standard_normal((n, config.noiseAttributes))
    attributes = np.hstack((informative, noise))

    names = [f"signal_{j}" for j in range(config.informativeAttributes)]
    names += [f"noise_{j}" for j in range(config.noiseAttributes)]
    manifest = AttributeManifest(names)

    sources = np.array([s for s, _ in pairs], dtype=np.int64)
    targets = np.array([t for _, t in pairs], dtype=np.int64)
    inSums = np.bincount(targets, weights=links, minlength=n).astype(np.int64)
    outSums = np.bincount(sources, weights=links, minlength=n).astype(np.int64)

    extraP = 1.0 / config.providerExtraMean
    backlinkTotals = inSums + rng.geometric(extraP, size=n) - 1
    outlinkTotals = outSums + rng.geometric(extraP, size=n) - 1

    width = len(str(n - 1))
    domains = [f"site{i:0{width}d}.example" for i in range(n)]

    nodes = [
        NodeRecord(
            domains[i],
            int(backlinkTotals[i]),
            int(outlinkTotals[i]),
            tuple(attributes[i].tolist()),
        )
        for i in range(n)
    ]

    edges = [
        EdgeRecord(
            domains[s],
            domains[t],
            LinkKind.OUTLINK if observed else LinkKind.BACKLINK,
            int(k),
            int(r),
        )
        for s, t, k, r, observed in zip(
            sources.tolist(), targets.tolist(), links, refPages, outlinkObserved,
        )
    ]

    graph = buildGraph(nodes, edges, manifest)

    unlabeled = rng.random(n) < config.unlabeledFraction
    labels = {
        domains[i]: classLabels(int(classes[i]))
        for i in range(n) if not unlabeled[i]
    }

    logger.info(
        "Generated synthetic webgraph: %d nodes, %d edges, %d labeled",
        graph.nodeCount, graph.edgeCount, len(labels),
    )

    return SyntheticWebgraph(graph, labels, classes)
