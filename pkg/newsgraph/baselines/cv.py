__all__ = ["CvResult", "FoldResult", "foldIndices", "kfoldCv"]

import logging
import math

import numpy as np

from newsgraph.baselines.models import FittedModel, FlatModelSpec, fitFlatModel, predictFlat
from newsgraph.evaluation.metrics import MetricsReport, classificationMetrics
from newsgraph.typing import *
from newsgraph.utils import deriveSeed
from newsgraph.webgraph import AttributeManifest

logger = logging.getLogger(__name__)

class FoldResult(NamedTuple):
    fold: int
    trainIndex: IntArray
    testIndex: IntArray
    metrics: MetricsReport
    model: FittedModel

class CvResult(NamedTuple):
    folds: List[FoldResult]
    meanAccuracy: float
    stdAccuracy: float
    meanF1: float
    stdF1: float

def foldIndices(
    n: int,
    k: int = 5,
    testFraction: float = 0.2,
    seed: int = 0,
    mode: str = "repeated",
) -> List[Tuple[IntArray, IntArray]]:
    """Train and test row indices for each fold.

    In "repeated" mode every fold is an independent random split whose test
    set holds round(testFraction * n) rows. In "kfold" mode one permutation
    is cut into k nearly equal test blocks, and testFraction is ignored.

    :raises ValueError: if k < 2, mode is unknown, or a set would be empty
    """
    if k < 2:
        raise ValueError(f"Cross-validation needs k >= 2 (got {k})")

    folds = []
    if mode == "repeated":
        if not 0.0 < testFraction < 1.0:
            raise ValueError(f"testFraction must lie in (0, 1) (got {testFraction})")

        testSize = int(math.floor(testFraction * n + 0.5))
        if testSize < 1 or testSize >= n:
            raise ValueError(f"A {testFraction} test split of {n} rows leaves an empty set")

        for fold in range(k):
            order = np.random.default_rng(deriveSeed(seed, "fold", fold)).permutation(n)
            folds.append((np.sort(order[testSize:]), np.sort(order[:testSize])))
    elif mode == "kfold":
        if n < k:
            raise ValueError(f"Cannot cut {n} rows into {k} folds")

        order = np.random.default_rng(deriveSeed(seed, "kfold")).permutation(n)
        for block in np.array_split(order, k):
            test = np.zeros(n, dtype=np.bool_)
            test[block] = True
            folds.append((np.flatnonzero(~test), np.flatnonzero(test)))
    else:
        raise ValueError(f"Unknown cross-validation mode: {mode!r}")

    return folds

def kfoldCv(
    spec: FlatModelSpec,
    X: Any,
    y: Any,
    k: int = 5,
    testFraction: float = 0.2,
    seed: int = 0,
    mode: str = "repeated",
    manifest: Optional[AttributeManifest] = None,
    task: str = "",
) -> CvResult:
    """Fit and score spec on each fold; summarize accuracy and F1.

    Standard deviations are population deviations over folds.

    :raises DegenerateLabelsError: if a training fold lacks a class
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.int64)

    results = []
    for fold, (train, test) in enumerate(foldIndices(len(y), k, testFraction, seed, mode)):
        model = fitFlatModel(spec, X[train], y[train], manifest)
        predicted = predictFlat(model, X[test]).labels
        metrics = classificationMetrics(
            predicted, y[test],
            positive=1,
            task=task,
            modelId=spec.family.value,
            seed=seed,
        )

        logger.debug(
            "Fold %d of %s: accuracy %.4f, F1 %.4f",
            fold, spec.family, metrics.accuracy, metrics.f1,
        )

        results.append(FoldResult(fold, train, test, metrics, model))

    accuracy = np.array([r.metrics.accuracy for r in results])
    f1 = np.array([r.metrics.f1 for r in results])

    logger.info(
        "%s %d-fold %s CV: accuracy %.4f +/- %.4f, F1 %.4f +/- %.4f",
        spec.family, k, mode, accuracy.mean(), accuracy.std(), f1.mean(), f1.std(),
    )

    return CvResult(
        results,
        float(accuracy.mean()),
        float(accuracy.std()),
        float(f1.mean()),
        float(f1.std()),
    )
