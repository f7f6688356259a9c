__all__ = ["NewsModel", "holdoutSplit", "trainNewsClassifier"]

import logging
import math

import numpy as np

from newsgraph.baselines.models import (
    Family, FittedModel, FlatModelSpec, fitFlatModel, predictFlat,
)
from newsgraph.evaluation.metrics import MetricsReport, classificationMetrics
from newsgraph.exception import *
from newsgraph.features import imputeMissing
from newsgraph.typing import *
from newsgraph.utils import deriveSeed
from newsgraph.webgraph import AttributeManifest

logger = logging.getLogger(__name__)

class NewsModel(NamedTuple):
    model: FittedModel
    metrics: MetricsReport
    sampledNegatives: IntArray

def holdoutSplit(
    n: int,
    testFraction: float = 0.2,
    seed: int = 0,
) -> Tuple[IntArray, IntArray]:
    """Random train and test row indices with round(testFraction * n) test rows."""
    testSize = int(math.floor(testFraction * n + 0.5))
    if testSize < 1 or testSize >= n:
        raise ValidationError(f"A {testFraction} holdout of {n} rows leaves an empty set")

    order = np.random.default_rng(seed).permutation(n)
    return np.sort(order[testSize:]), np.sort(order[:testSize])

def trainNewsClassifier(
    positives: Any,
    negativePool: Any,
    ratio: float = 1.0,
    seed: int = 0,
    names: Optional[Sequence[str]] = None,
    testFraction: float = 0.2,
) -> NewsModel:
    """Fit the news/non-news GBDT on news domains and sampled non-news domains.

    round(ratio * len(positives)) rows are drawn from negativePool without
    replacement; with ratio 1 and pools of equal size, every negative is
    used. Missing attribute values are imputed with indicator columns, and
    the model's manifest lists the imputed column names. The model is fit
    on a random split and scored on the held-out rows.

    :raises ValidationError:
        if a pool is empty or the negative pool is too small for ratio
    """
    positives = np.atleast_2d(np.asarray(positives, dtype=np.float64))
    negativePool = np.atleast_2d(np.asarray(negativePool, dtype=np.float64))

    if len(positives) == 0 or len(negativePool) == 0:
        raise ValidationError("News classifier needs non-empty positive and negative pools")

    if ratio <= 0:
        raise ValueError(f"ratio must be positive (got {ratio})")

    wanted = int(math.floor(ratio * len(positives) + 0.5))
    if wanted > len(negativePool):
        errmsg = (
            f"Ratio {ratio} needs {wanted} negatives,"
            f" but the pool holds {len(negativePool)}"
        )

        raise ValidationError(errmsg)

    rng = np.random.default_rng(deriveSeed(seed, "negatives"))
    sampled = np.sort(rng.choice(len(negativePool), wanted, replace=False))

    raw = np.vstack((positives, negativePool[sampled]))
    y = np.concatenate((np.ones(len(positives)), np.zeros(wanted))).astype(np.int64)
    imputed = imputeMissing(raw, names)

    train, test = holdoutSplit(len(y), testFraction, deriveSeed(seed, "holdout"))
    spec = FlatModelSpec.default(Family.GBDT, seed=seed)
    model = fitFlatModel(
        spec,
        imputed.matrix[train],
        y[train],
        AttributeManifest(imputed.names),
    )

    predicted = predictFlat(model, imputed.matrix[test]).labels
    metrics = classificationMetrics(
        predicted, y[test],
        positive=1,
        task="news",
        modelId=spec.family.value,
        seed=seed,
    )

    logger.info(
        "News classifier on %d positives, %d negatives: held-out accuracy %.4f, F1 %.4f",
        len(positives), wanted, metrics.accuracy, metrics.f1,
    )

    return NewsModel(model, metrics, sampled)
