__all__ = ["GradientBoosting", "RandomForest"]

import logging
import math

import numpy as np
import scipy.special

from newsgraph.baselines.estimator import Estimator
from newsgraph.baselines.tree import LEAF, Tree, fitTree
from newsgraph.typing import *
from newsgraph.utils import deriveSeed, typename

logger = logging.getLogger(__name__)

def _packTrees(trees: Sequence[Tree], **scalars: Any) -> Dict[str, Any]:
    arrays: Dict[str, Any] = {"tree_count": np.array(len(trees))}
    for i, tree in enumerate(trees):
        arrays.update(tree.arrays(f"t{i}_"))

    for name, value in scalars.items():
        arrays[name] = np.asarray(value)

    return arrays

def _unpackTrees(arrays: Mapping[str, Any]) -> List[Tree]:
    count = int(arrays["tree_count"])
    return [Tree.fromArrays(arrays, f"t{i}_") for i in range(count)]

def _maxFeatures(setting: Union[str, int, None], d: int) -> Optional[int]:
    if setting is None:
        return None
    elif setting == "sqrt":
        return max(1, int(math.sqrt(d)))
    elif setting == "log2":
        return max(1, int(math.log2(d))) if d > 1 else 1
    elif isinstance(setting, int) and setting >= 1:
        return setting
    else:
        raise ValueError(f"Invalid max_features: {setting!r}")

@final
class RandomForest(Estimator):
    """Bagged trees, each grown on a bootstrap sample with per-node
    feature subsampling. The score is the mean of the trees' leaf
    fractions."""

    FAMILY = "random_forest"

    def __init__(self, trees: Sequence[Tree]) -> None:
        self.trees = list(trees)

    def __repr__(self) -> str:
        return f"<{typename(self)}: {len(self.trees)} trees>"

    @classmethod
    def fit(cls,
        X: FloatArray,
        y: Any,
        seed: int = 0,
        n_estimators: int = 50,
        max_depth: Optional[int] = None,
        min_samples_split: int = 2,
        max_features: Union[str, int, None] = "sqrt",
        bootstrap: bool = True,
    ) -> "RandomForest":
        if n_estimators < 1:
            raise ValueError(f"n_estimators must be at least 1 (got {n_estimators})")

        X = np.asarray(X, dtype=np.float64)
        n, d = X.shape
        features = _maxFeatures(max_features, d)

        trees = []
        for i in range(n_estimators):
            rng = np.random.default_rng(deriveSeed(seed, "tree", i))
            rows = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
            trees.append(fitTree(
                X, y, max_depth, min_samples_split, features, rng, rows,
            ))

        return cls(trees)

    def score(self, X: FloatArray) -> FloatArray:
        return np.mean([tree.predict(X) for tree in self.trees], axis=0)

    def importances(self, featureCount: int) -> FloatArray:
        return np.sum([t.importances(featureCount) for t in self.trees], axis=0)

    def arrays(self) -> Dict[str, Any]:
        return _packTrees(self.trees)

    @classmethod
    def fromArrays(cls, arrays: Mapping[str, Any]) -> "RandomForest":
        return cls(_unpackTrees(arrays))

def _logLoss(F: FloatArray, y: FloatArray) -> float:
    return float(np.mean(np.logaddexp(0.0, F) - y * F))

@final
class GradientBoosting(Estimator):
    """Additive logistic model built from shallow regression trees.

    Each round fits a tree to the residuals y - p, replaces its leaf values
    with one Newton step on the log-loss, halves the step until the training
    loss does not increase, and shrinks it by the learning rate. The score
    is the log-odds of the positive class.
    """

    FAMILY = "gbdt"
    THRESHOLD = 0.0

    def __init__(self,
        prior: float,
        trees: Sequence[Tree],
        lossHistory: Sequence[float] = (),
    ) -> None:
        self.prior = float(prior)
        self.trees = list(trees)
        self.lossHistory = list(lossHistory)

    def __repr__(self) -> str:
        return f"<{typename(self)}: {len(self.trees)} rounds>"

    @classmethod
    def fit(cls,
        X: FloatArray,
        y: Any,
        seed: int = 0,
        n_estimators: int = 100,
        learning_rate: float = 0.1,
        max_depth: int = 3,
        min_samples_split: int = 2,
    ) -> "GradientBoosting":
        if n_estimators < 0:
            raise ValueError(f"n_estimators must be nonnegative (got {n_estimators})")
        if not 0.0 < learning_rate <= 1.0:
            raise ValueError(f"learning_rate must lie in (0, 1] (got {learning_rate})")

        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)

        rate = float(np.clip(y.mean(), 1e-6, 1.0 - 1e-6))
        prior = math.log(rate / (1.0 - rate))

        F = np.full(len(y), prior)
        history = [_logLoss(F, y)]
        trees = []

        for _ in range(n_estimators):
            p = scipy.special.expit(F)
            residual = y - p
            tree = fitTree(X, residual, max_depth, min_samples_split)

            leaves = tree.apply(X)
            numerator = np.bincount(leaves, weights=residual, minlength=tree.nodeCount)
            denominator = np.bincount(leaves, weights=p * (1.0 - p), minlength=tree.nodeCount)

            steps = np.zeros(tree.nodeCount)
            usable = denominator > 1e-12
            steps[usable] = numerator[usable] / denominator[usable]

            isLeaf = tree.feature == LEAF
            for leaf in np.flatnonzero(isLeaf & usable):
                rows = leaves == leaf
                before = _logLoss(F[rows], y[rows])
                for halving in range(30):
                    if _logLoss(F[rows] + steps[leaf], y[rows]) <= before:
                        break
                    steps[leaf] /= 2.0
                else:
                    steps[leaf] = 0.0

            tree.value = np.where(isLeaf, learning_rate * steps, 0.0)
            F = F + tree.value[leaves]
            trees.append(tree)
            history.append(_logLoss(F, y))

        logger.debug(
            "Boosted %d rounds: training loss %.6f -> %.6f",
            n_estimators, history[0], history[-1],
        )

        return cls(prior, trees, history)

    def score(self, X: FloatArray) -> FloatArray:
        F = np.full(len(X), self.prior)
        for tree in self.trees:
            F += tree.predict(X)

        return F

    def probability(self, X: FloatArray) -> FloatArray:
        return scipy.special.expit(self.score(X))

    def importances(self, featureCount: int) -> FloatArray:
        if not self.trees:
            return np.zeros(featureCount)

        return np.sum([t.importances(featureCount) for t in self.trees], axis=0)

    def arrays(self) -> Dict[str, Any]:
        return _packTrees(self.trees, prior=self.prior, loss_history=self.lossHistory)

    @classmethod
    def fromArrays(cls, arrays: Mapping[str, Any]) -> "GradientBoosting":
        history = np.asarray(arrays.get("loss_history", [])).tolist()
        return cls(float(arrays["prior"]), _unpackTrees(arrays), history)
