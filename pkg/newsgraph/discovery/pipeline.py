__all__ = [
    "BacklinkPull", "CandidateRecord", "CandidateSet", "Discovery",
    "DiscoveryModels", "PipelineConfig", "STAGES", "SUMMARY_COLUMNS",
    "StageRecord", "StageReport", "fitTaskModel", "loadDiscoveryModels",
    "pullBacklinks", "runDiscovery", "trainDiscoveryModels",
]

import dataclasses
import logging
import os

import numpy as np
import pandas as pd

from newsgraph.baselines.models import (
    Family, FittedModel, FlatModelSpec, fitFlatModel, loadFittedModel, predictFlat,
)
from newsgraph.discovery.client import LinkDataClient, collectMetrics
from newsgraph.discovery.expand import OutlinkExpansion, expandOutlinks
from newsgraph.discovery.news import trainNewsClassifier
from newsgraph.discovery.schemes import (
    LinkScheme, LinkSchemeCriteria, identifyLinkSchemes, unreliableDomains,
)
from newsgraph.exception import *
from newsgraph.features import alignFeatures, imputeMissing
from newsgraph.ingest.labels import BinaryLabels, Task, taskTargets
from newsgraph.ingest.survival import DEFAULT_THRESHOLD, filterByBacklinks
from newsgraph.typing import *
from newsgraph.utils import canonicalJson, typename
from newsgraph.webgraph import (
    AttributeManifest, AttributedWebgraph, EdgeRecord, NodeRecord, buildGraph,
)

logger = logging.getLogger(__name__)

STAGES = (
    "backlink_pull",
    "link_schemes",
    "outlink_expansion",
    "backlink_filter",
    "news",
    "absolute_bias",
    "reliability",
)

SUMMARY_COLUMNS = (
    "seed", "backlinks", "alpha_min", "beta_min", "link_schemes", "outlinks",
    "candidates", "news", "misinfo", "biased",
)

@dataclasses.dataclass(frozen=True)
class PipelineConfig:
    backlinksPerSeed: int = 100
    criteria: LinkSchemeCriteria = LinkSchemeCriteria()
    outlinksPerScheme: int = 100
    backlinkFilterThreshold: int = DEFAULT_THRESHOLD
    newsCheckpoint: Optional[str] = None
    absoluteBiasCheckpoint: Optional[str] = None
    reliabilityCheckpoint: Optional[str] = None
    newsThreshold: float = 0.5
    absoluteBiasThreshold: float = 0.5
    reliabilityThreshold: float = 0.5
    strict: bool = False

    def __post_init__(self) -> None:
        if self.backlinksPerSeed < 1 or self.outlinksPerScheme < 1:
            raise ValidationError("Backlink and outlink pull sizes must be positive")
        if self.backlinkFilterThreshold < 0:
            raise ValidationError("backlinkFilterThreshold must be nonnegative")

    def replace(self, **changes: Any) -> "PipelineConfig":
        return dataclasses.replace(self, **changes)

class DiscoveryModels(NamedTuple):
    news: FittedModel
    absoluteBias: FittedModel
    reliability: FittedModel

def loadDiscoveryModels(config: PipelineConfig) -> DiscoveryModels:
    """:raises PipelineError: if any checkpoint is unset, missing or invalid"""
    paths = {
        "news": config.newsCheckpoint,
        "absolute bias": config.absoluteBiasCheckpoint,
        "reliability": config.reliabilityCheckpoint,
    }

    unresolved = [
        name for name, path in paths.items()
        if path is None or not os.path.isfile(path)
    ]

    if unresolved:
        errmsg = f"Unresolved classifier checkpoint(s): {', '.join(unresolved)}"
        raise PipelineError(errmsg)

    try:
        models = [loadFittedModel(cast(str, path)) for path in paths.values()]
    except CheckpointError as err:
        raise PipelineError(f"Unable to load a classifier: {err}") from err

    return DiscoveryModels(*models)

def _features(client: LinkDataClient, domains: Sequence[str]) -> Tuple[List[str], FloatArray]:
    metrics = collectMetrics(client, domains)
    return metrics.domains, metrics.attributes

def fitTaskModel(
    client: LinkDataClient,
    labels: Mapping[str, BinaryLabels],
    task: Task,
    seed: int = 0,
) -> FittedModel:
    """Fit the GBDT baseline for one task on the labeled domains' metrics."""
    targets = taskTargets(labels, task)
    domains, X = _features(client, sorted(targets))
    imputed = imputeMissing(X, client.manifest.names)
    y = np.array([targets[d] for d in domains], dtype=np.int64)

    spec = FlatModelSpec.default(Family.GBDT, seed=seed)
    return fitFlatModel(spec, imputed.matrix, y, AttributeManifest(imputed.names))

def trainDiscoveryModels(
    client: LinkDataClient,
    labels: Mapping[str, BinaryLabels],
    newsDomains: Sequence[str],
    nonNewsDomains: Sequence[str],
    seed: int = 0,
) -> DiscoveryModels:
    """Fit the three filters from the client's metrics.

    The news classifier contrasts newsDomains with a sample of
    nonNewsDomains; the bias and reliability classifiers are fit on the
    labeled domains.
    """
    _, positives = _features(client, newsDomains)
    _, negatives = _features(client, nonNewsDomains)
    news = trainNewsClassifier(
        positives, negatives, seed=seed, names=client.manifest.names,
    )

    return DiscoveryModels(
        news.model,
        fitTaskModel(client, labels, Task.ABSOLUTE_BIAS, seed),
        fitTaskModel(client, labels, Task.RELIABILITY, seed),
    )

class StageRecord(NamedTuple):
    name: str
    inCount: int
    outCount: int
    parameters: Mapping[str, Any]

@final
class StageReport:
    """Counts entering and leaving each executed stage."""

    def __init__(self) -> None:
        self.stages: List[StageRecord] = []
        self.summary: Dict[str, Any] = {}

    def __repr__(self) -> str:
        return f"<{typename(self)}: {len(self.stages)} stages>"

    def record(self,
        name: str,
        inCount: int,
        outCount: int,
        **parameters: Any,
    ) -> None:
        self.stages.append(StageRecord(name, inCount, outCount, parameters))
        logger.info("Stage %s: %d in, %d out", name, inCount, outCount)

    def toFrame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "name": [s.name for s in self.stages],
            "in_count": [s.inCount for s in self.stages],
            "out_count": [s.outCount for s in self.stages],
            "parameters": [canonicalJson(dict(s.parameters)) for s in self.stages],
        })

    def summaryRow(self) -> pd.DataFrame:
        return pd.DataFrame([{c: self.summary.get(c) for c in SUMMARY_COLUMNS}])

@dataclasses.dataclass
class CandidateRecord:
    """One raw candidate and how far it made it down the pipeline.

    Scores are probabilities, or None where the stage never scored it.
    """

    domain: str
    provenance: Tuple[str, ...]
    providerBacklinkTotal: Optional[int] = None
    passedBacklinkFilter: bool = False
    newsScore: Optional[float] = None
    passedNews: bool = False
    absoluteBiasScore: Optional[float] = None
    passedAbsoluteBias: bool = False
    reliabilityScore: Optional[float] = None
    passedReliability: bool = False

    @property
    def linkSchemeOutlink(self) -> bool:
        """Whether at least one link scheme emitted this domain."""
        return bool(self.provenance)

CANDIDATE_COLUMNS = {
    "domain": "domain",
    "link_scheme_outlink": "linkSchemeOutlink",
    "provider_backlink_total": "providerBacklinkTotal",
    "passed_backlink_filter": "passedBacklinkFilter",
    "news_score": "newsScore",
    "passed_news": "passedNews",
    "abs_bias_score": "absoluteBiasScore",
    "passed_abs_bias": "passedAbsoluteBias",
    "reliability_score": "reliabilityScore",
    "passed_reliability": "passedReliability",
}

@final
class CandidateSet:
    """Candidate records in domain order."""

    def __init__(self, records: Iterable[CandidateRecord]) -> None:
        self.records = sorted(records, key=lambda r: r.domain)

    def __iter__(self) -> Iterator[CandidateRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __repr__(self) -> str:
        return f"<{typename(self)}: {len(self.records)} candidates>"

    @property
    def domains(self) -> List[str]:
        return [r.domain for r in self.records]

    @property
    def discovered(self) -> List[str]:
        """Candidates that passed every filter."""
        return [r.domain for r in self.records if r.passedReliability]

    def passing(self, flag: str) -> List[str]:
        return [r.domain for r in self.records if getattr(r, flag)]

    def toFrame(self) -> pd.DataFrame:
        frame = pd.DataFrame({
            column: [getattr(r, attribute) for r in self.records]
            for column, attribute in CANDIDATE_COLUMNS.items()
        })

        frame["provider_backlink_total"] = pd.array(
            [r.providerBacklinkTotal for r in self.records],
            dtype="Int64",
        )

        frame["provenance"] = ["|".join(r.provenance) for r in self.records]
        return frame

class BacklinkPull(NamedTuple):
    seeds: List[str]
    edges: List[EdgeRecord]
    missing: List[str]
    graph: AttributedWebgraph

def pullBacklinks(
    labels: Mapping[str, BinaryLabels],
    client: LinkDataClient,
    n: int,
) -> BacklinkPull:
    """Pull the top n backlinks of every unreliable seed into one graph.

    The graph has a node for every domain seen and no attributes. Seeds the
    client cannot resolve are listed in missing.
    """
    seeds = unreliableDomains(labels)
    edges: List[EdgeRecord] = []
    missing = []
    for seed in seeds:
        try:
            edges.extend(client.getBacklinks(seed, n))
        except LinkDataUnavailable:
            missing.append(seed)

    if missing:
        logger.warning("No backlink data for %d seed(s)", len(missing))

    domains = dict.fromkeys(seeds)
    for edge in edges:
        domains.setdefault(edge.source)
        domains.setdefault(edge.target)

    nodes = [NodeRecord(domain, None, None, ()) for domain in domains]
    graph = buildGraph(nodes, edges, AttributeManifest(()))
    return BacklinkPull(seeds, edges, missing, graph)

class Discovery(NamedTuple):
    candidates: CandidateSet
    report: StageReport
    schemes: List[LinkScheme]
    expansion: OutlinkExpansion

def _score(
    model: FittedModel,
    attributes: FloatArray,
    manifest: AttributeManifest,
) -> FloatArray:
    if len(attributes) == 0:
        return np.zeros(0)

    assert model.manifest is not None
    X = alignFeatures(attributes, manifest.names, model.manifest.names)
    return predictFlat(model, X).probabilities

def runDiscovery(
    labels: Mapping[str, BinaryLabels],
    client: LinkDataClient,
    config: PipelineConfig = PipelineConfig(),
    models: Optional[DiscoveryModels] = None,
) -> Discovery:
    """Run the discovery pipeline from labeled seeds to filtered candidates.

    Stages run in order: backlink pull per unreliable seed, link-scheme
    identification, outlink expansion (excluding every labeled domain and
    the schemes), provider backlink filter, then the news, absolute-bias
    and reliability classifiers. A domain passes a classifier when its
    probability exceeds the configured threshold, and is only scored by a
    classifier if it passed the stages before it; reliability is scored for
    every news domain so that the summary can count misinformation sources
    regardless of bias.

    Without models, the classifiers are loaded from the config's
    checkpoints.

    :raises PipelineError: before any stage if a checkpoint is unresolved
    """
    if models is None:
        models = loadDiscoveryModels(config)

    for model in models:
        if model.manifest is None:
            raise PipelineError(f"{model} has no feature manifest")

    report = StageReport()
    criteria = config.criteria

    pull = pullBacklinks(labels, client, config.backlinksPerSeed)
    report.record(
        "backlink_pull", len(pull.seeds), len(pull.edges),
        backlinks_per_seed=config.backlinksPerSeed,
        missing_seeds=len(pull.missing),
    )

    schemes = identifyLinkSchemes(pull.graph, labels, criteria, config.strict)
    report.record(
        "link_schemes", len(set(pull.graph.sources.tolist())), len(schemes),
        alpha_min=criteria.alphaMin,
        beta_min=criteria.betaMin,
        strict=config.strict,
    )

    expansion = expandOutlinks(
        schemes, client, config.outlinksPerScheme, exclude=labels.keys(),
    )

    report.record(
        "outlink_expansion", len(schemes), len(expansion.candidates),
        outlinks_per_scheme=config.outlinksPerScheme,
        skipped_schemes=len(expansion.skipped),
    )

    records = {
        domain: CandidateRecord(domain, expansion.provenance[domain])
        for domain in expansion.candidates
    }

    metrics = collectMetrics(client, expansion.candidates)
    totals: Dict[str, Optional[int]] = {d: None for d in metrics.unavailable}
    totals.update(zip(metrics.domains, metrics.backlinkTotals))
    for domain, total in totals.items():
        records[domain].providerBacklinkTotal = total

    kept = set(filterByBacklinks(totals, config.backlinkFilterThreshold).kept)
    report.record(
        "backlink_filter", len(expansion.candidates), len(kept),
        threshold=config.backlinkFilterThreshold,
    )

    rows = np.array([d in kept for d in metrics.domains], dtype=np.bool_)
    domains = [d for d in metrics.domains if d in kept]
    attributes = metrics.attributes[rows]

    newsScores = _score(models.news, attributes, client.manifest)
    isNews = newsScores > config.newsThreshold
    for domain, score, passed in zip(domains, newsScores, isNews):
        record = records[domain]
        record.passedBacklinkFilter = True
        record.newsScore = float(score)
        record.passedNews = bool(passed)

    report.record(
        "news", len(domains), int(isNews.sum()),
        threshold=config.newsThreshold,
    )

    newsDomains = [d for d, passed in zip(domains, isNews) if passed]
    newsAttributes = attributes[isNews]

    biasScores = _score(models.absoluteBias, newsAttributes, client.manifest)
    reliabilityScores = _score(models.reliability, newsAttributes, client.manifest)
    isExtreme = biasScores > config.absoluteBiasThreshold
    isUnreliable = reliabilityScores > config.reliabilityThreshold

    for i, domain in enumerate(newsDomains):
        record = records[domain]
        record.absoluteBiasScore = float(biasScores[i])
        record.passedAbsoluteBias = bool(isExtreme[i])
        if isExtreme[i]:
            record.reliabilityScore = float(reliabilityScores[i])
            record.passedReliability = bool(isUnreliable[i])

    report.record(
        "absolute_bias", len(newsDomains), int(isExtreme.sum()),
        threshold=config.absoluteBiasThreshold,
    )

    report.record(
        "reliability", int(isExtreme.sum()), int((isExtreme & isUnreliable).sum()),
        threshold=config.reliabilityThreshold,
    )

    report.summary = {
        "seed": len(pull.seeds),
        "backlinks": len(pull.edges),
        "alpha_min": criteria.alphaMin,
        "beta_min": criteria.betaMin,
        "link_schemes": len(schemes),
        "outlinks": len(expansion.candidates),
        "candidates": len(kept),
        "news": int(isNews.sum()),
        "misinfo": int(isUnreliable.sum()),
        "biased": int((isUnreliable & isExtreme).sum()),
    }

    return Discovery(CandidateSet(records.values()), report, schemes, expansion)
