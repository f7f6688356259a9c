__all__ = [
    "MisinfoRate", "PartialF1", "SWEEP_COLUMNS", "misinfoRate", "partialF1",
    "sweepOutlinks",
]

import logging

import numpy as np
import pandas as pd

from newsgraph.baselines.models import FittedModel, predictFlat
from newsgraph.discovery.client import LinkDataClient, collectMetrics
from newsgraph.discovery.expand import expandOutlinks
from newsgraph.discovery.schemes import LinkSchemeCriteria, identifyLinkSchemes
from newsgraph.features import alignFeatures
from newsgraph.ingest.labels import BinaryLabels, Reliability
from newsgraph.typing import *
from newsgraph.utils import normalizeDomain
from newsgraph.webgraph import AttributedWebgraph

logger = logging.getLogger(__name__)

class PartialF1(NamedTuple):
    precision: float
    recall: float
    f1: float
    truePositives: int
    falsePositives: int
    unknown: int
    oracleUnreliable: int
    undefined: bool

def _oracleValue(value: Union[Reliability, str]) -> Reliability:
    return value if isinstance(value, Reliability) else Reliability(value)

def partialF1(
    discovered: Iterable[str],
    oracle: Mapping[str, Union[Reliability, str]],
) -> PartialF1:
    """Score discoveries against an incomplete reliability oracle.

    Discoveries the oracle labels unreliable are true positives and those it
    labels reliable are false positives. Discoveries it does not know are
    counted but ignored by precision. Recall is relative to every domain
    the oracle labels unreliable. When a denominator is 0 the affected
    ratio is 0 and undefined is set.

    :raises ValueError: if the oracle is empty
    """
    if not oracle:
        raise ValueError("Partial F1 needs a non-empty oracle")

    truth = {normalizeDomain(d): _oracleValue(v) for d, v in oracle.items()}
    found = {normalizeDomain(d) for d in discovered}

    tp = fp = unknown = 0
    for domain in found:
        value = truth.get(domain, Reliability.UNKNOWN)
        if value is Reliability.UNRELIABLE:
            tp += 1
        elif value is Reliability.RELIABLE:
            fp += 1
        else:
            unknown += 1

    positives = sum(v is Reliability.UNRELIABLE for v in truth.values())

    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / positives if positives else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    undefined = tp + fp == 0 or positives == 0 or precision + recall == 0

    return PartialF1(precision, recall, f1, tp, fp, unknown, positives, undefined)

class MisinfoRate(NamedTuple):
    rate: Optional[float]
    unreliable: int
    classified: int
    excluded: List[str]
    undefined: bool

def misinfoRate(
    domains: Iterable[str],
    model: FittedModel,
    client: LinkDataClient,
    threshold: float = 0.5,
) -> MisinfoRate:
    """Fraction of domains the reliability model calls unreliable.

    Domains without metrics are excluded and listed. With nothing left to
    classify, the rate is None and undefined is set.
    """
    assert model.manifest is not None
    metrics = collectMetrics(client, sorted({normalizeDomain(d) for d in domains}))

    if not metrics.domains:
        return MisinfoRate(None, 0, 0, metrics.unavailable, True)

    X = alignFeatures(metrics.attributes, client.manifest.names, model.manifest.names)
    unreliable = int(np.sum(predictFlat(model, X).probabilities > threshold))
    classified = len(metrics.domains)

    return MisinfoRate(
        unreliable / classified, unreliable, classified, metrics.unavailable, False,
    )

SWEEP_COLUMNS = (
    "alpha_min", "beta_min", "outlinks", "link_schemes", "candidates",
    "true_positives", "false_positives", "unknown", "precision", "recall", "f1",
)

def sweepOutlinks(
    backlinkGraph: AttributedWebgraph,
    labels: Mapping[str, BinaryLabels],
    client: LinkDataClient,
    oracle: Mapping[str, Union[Reliability, str]],
    outlinkCounts: Sequence[int],
    betaMins: Sequence[int] = (0,),
    alphaMin: int = 0,
) -> pd.DataFrame:
    """Partial F1 of the raw outlink candidates over a grid of settings.

    Every labeled domain is excluded from the candidates, as in the
    pipeline. Rows are ordered by beta_min, then outlinks.
    """
    rows = []
    for betaMin in betaMins:
        criteria = LinkSchemeCriteria(alphaMin, betaMin)
        schemes = identifyLinkSchemes(backlinkGraph, labels, criteria)

        for n in outlinkCounts:
            expansion = expandOutlinks(schemes, client, n, exclude=labels.keys())
            score = partialF1(expansion.candidates, oracle)
            rows.append((
                alphaMin, betaMin, n, len(schemes), len(expansion.candidates),
                score.truePositives, score.falsePositives, score.unknown,
                score.precision, score.recall, score.f1,
            ))

    return pd.DataFrame(rows, columns=list(SWEEP_COLUMNS))
