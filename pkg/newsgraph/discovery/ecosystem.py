__all__ = [
    "ECOSYSTEM_ATTRIBUTES", "EcosystemConfig", "PlantedEcosystem",
    "generatePlantedEcosystem",
]

import dataclasses
import logging

import numpy as np

from newsgraph.discovery.client import FixtureLinkClient
from newsgraph.exception import *
from newsgraph.ingest.labels import BinaryLabels, Reliability
from newsgraph.ingest.synthetic import classLabels
from newsgraph.typing import *
from newsgraph.webgraph import AttributeManifest, EdgeRecord, LinkKind, NodeRecord

logger = logging.getLogger(__name__)

ECOSYSTEM_ATTRIBUTES = ("domain_rating", "refdomains", "edu", "gov", "ugc", "noise")

# group name -> domain prefix
GROUPS = {
    "seed_unreliable": "seedu",
    "seed_reliable": "seedr",
    "hidden_unreliable": "hidden",
    "reliable_news": "news",
    "link_schemes": "scheme",
    "benign_backlinkers": "benign",
    "random": "random",
}

@dataclasses.dataclass(frozen=True)
class EcosystemConfig:
    """Group sizes and wiring of a planted discovery ecosystem.

    Link schemes point heavily at seedsPerScheme unreliable seeds and at
    hidden unreliable news sites, and lightly at a few random domains.
    Benign backlinkers point at one seed of each kind, at reliable news,
    and at random domains. Attribute means shift by signal standard
    deviations on domain_rating and refdomains for every news site, and on
    edu, gov and ugc for unreliable sites, seeds and hidden alike. noise
    carries no signal. Unreliable seeds are also labeled extreme, so the
    bias filter learns from the same edu, gov and ugc shift.
    """

    seedUnreliable: int = 30
    seedReliable: int = 20
    hiddenUnreliable: int = 60
    reliableNews: int = 80
    schemes: int = 10
    benignBacklinkers: int = 40
    randomDomains: int = 150
    seedsPerScheme: int = 8
    hiddenPerScheme: int = 6
    randomPerScheme: int = 3
    signal: float = 4.0
    seed: int = 0

    def __post_init__(self) -> None:
        sizes = (
            self.seedUnreliable, self.seedReliable, self.hiddenUnreliable,
            self.reliableNews, self.schemes, self.benignBacklinkers,
            self.randomDomains,
        )

        if min(sizes) < 1:
            raise ValidationError("Every ecosystem group needs at least one domain")
        if self.reliableNews < 4 or self.randomDomains < 4:
            raise ValidationError("reliableNews and randomDomains must be at least 4")
        if not 1 <= self.seedsPerScheme <= self.seedUnreliable:
            raise ValidationError("seedsPerScheme must lie in [1, seedUnreliable]")
        if not 0 <= self.hiddenPerScheme <= self.hiddenUnreliable:
            raise ValidationError("hiddenPerScheme must lie in [0, hiddenUnreliable]")
        if not 0 <= self.randomPerScheme <= self.randomDomains:
            raise ValidationError("randomPerScheme must lie in [0, randomDomains]")

    def replace(self, **changes: Any) -> "EcosystemConfig":
        return dataclasses.replace(self, **changes)

class PlantedEcosystem(NamedTuple):
    client: FixtureLinkClient
    labels: Dict[str, BinaryLabels]
    oracle: Dict[str, Reliability]
    groups: Dict[str, List[str]]

    @property
    def newsDomains(self) -> List[str]:
        """Labeled news sites, the positives for the news classifier."""
        return self.groups["seed_unreliable"] + self.groups["seed_reliable"]

    @property
    def nonNewsDomains(self) -> List[str]:
        return self.groups["random"]

def generatePlantedEcosystem(config: EcosystemConfig = EcosystemConfig()) -> PlantedEcosystem:
    """Build a link-data fixture in which link schemes hide unreliable news.

    Seeds are labeled; the oracle knows the hidden unreliable sites and
    the reliable news sites. Every hidden site receives heavy links from at
    least one link scheme. Provider backlink totals of news sites exceed
    20000, and those of other domains stay far below 10000.
    """
    rng = np.random.default_rng(config.seed)
    sizes = {
        "seed_unreliable": config.seedUnreliable,
        "seed_reliable": config.seedReliable,
        "hidden_unreliable": config.hiddenUnreliable,
        "reliable_news": config.reliableNews,
        "link_schemes": config.schemes,
        "benign_backlinkers": config.benignBacklinkers,
        "random": config.randomDomains,
    }

    groups = {
        name: [f"{GROUPS[name]}{i:03d}.example" for i in range(size)]
        for name, size in sizes.items()
    }

    seedsU = groups["seed_unreliable"]
    seedsR = groups["seed_reliable"]
    hidden = groups["hidden_unreliable"]
    news = groups["reliable_news"]
    randoms = groups["random"]

    edges: List[EdgeRecord] = []

    def link(source: str, target: str, low: int, high: int) -> None:
        links = int(rng.integers(low, high + 1))
        pages = int(rng.integers(1, links + 1))
        edges.append(EdgeRecord(source, target, LinkKind.OUTLINK, links, pages))

    def pick(pool: Sequence[str], k: int, avoid: Collection[str] = ()) -> List[str]:
        choices = [d for d in pool if d not in avoid]
        return [choices[i] for i in sorted(rng.choice(len(choices), k, replace=False))]

    for s, scheme in enumerate(groups["link_schemes"]):
        for target in pick(seedsU, config.seedsPerScheme):
            link(scheme, target, 100, 500)

        assigned = hidden[s::config.schemes]
        for target in assigned:
            link(scheme, target, 50, 400)

        extra = min(config.hiddenPerScheme, len(hidden) - len(assigned))
        for target in pick(hidden, extra, set(assigned)):
            link(scheme, target, 50, 400)

        for target in pick(randoms, config.randomPerScheme):
            link(scheme, target, 1, 5)

    for benign in groups["benign_backlinkers"]:
        link(benign, pick(seedsU, 1)[0], 1, 20)
        link(benign, pick(seedsR, 1)[0], 1, 20)
        for target in pick(news, 3):
            link(benign, target, 10, 100)
        for target in pick(randoms, 3):
            link(benign, target, 1, 20)

    for site in news:
        for target in pick(news, 2, {site}):
            link(site, target, 5, 50)
        link(site, pick(seedsR, 1)[0], 5, 50)

    for site in randoms:
        link(site, pick(randoms, 1, {site})[0], 1, 10)

    domains = [d for name in sizes for d in groups[name]]
    isNews = set(seedsU + seedsR + hidden + news)
    isUnreliable = set(seedsU + hidden)

    indicators = np.array([
        [d in isNews, d in isNews, d in isUnreliable, d in isUnreliable, d in isUnreliable, False]
        for d in domains
    ], dtype=np.float64)

    attributes = config.signal * indicators + rng.standard_normal(indicators.shape)

    inSums = dict.fromkeys(domains, 0)
    outSums = dict.fromkeys(domains, 0)
    for edge in edges:
        inSums[edge.target] += edge.links
        outSums[edge.source] += edge.links

    nodes = []
    for i, domain in enumerate(domains):
        if domain in isNews:
            extra = 20000 + int(rng.geometric(1.0 / 5000))
        else:
            extra = int(rng.geometric(1.0 / 200))

        nodes.append(NodeRecord(
            domain,
            inSums[domain] + extra,
            outSums[domain] + int(rng.geometric(1.0 / 100)),
            tuple(attributes[i].tolist()),
        ))

    labels = {d: classLabels(1) for d in seedsU}
    labels.update({d: classLabels(0) for d in seedsR})

    oracle = {d: Reliability.UNRELIABLE for d in hidden}
    oracle.update({d: Reliability.RELIABLE for d in news})

    client = FixtureLinkClient(nodes, edges, AttributeManifest(ECOSYSTEM_ATTRIBUTES))
    logger.info("Planted ecosystem: %d domains, %d edges", len(domains), len(edges))

    return PlantedEcosystem(client, dict(sorted(labels.items())), oracle, groups)
