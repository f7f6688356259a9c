__all__ = ["DecisionTree", "Tree", "fitTree"]

import numpy as np

from newsgraph.baselines.estimator import Estimator
from newsgraph.typing import *
from newsgraph.utils import typename

LEAF = -1

@final
class Tree:
    """A binary tree stored as parallel node arrays.

    Node 0 is the root. Internal nodes send a row left when
    x[feature] <= threshold. Leaves have feature == -1. gain holds the
    reduction in the sum of squared deviations achieved by each split,
    which for a 0/1 target is half the reduction in Gini impurity times
    the node size.
    """

    FIELDS = ("feature", "threshold", "left", "right", "value", "gain", "samples")

    def __init__(self,
        feature: Any,
        threshold: Any,
        left: Any,
        right: Any,
        value: Any,
        gain: Any,
        samples: Any,
    ) -> None:
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.gain = np.asarray(gain, dtype=np.float64)
        self.samples = np.asarray(samples, dtype=np.int64)

    def __repr__(self) -> str:
        return f"<{typename(self)}: {self.nodeCount} nodes, depth {self.depth}>"

    @property
    def nodeCount(self) -> int:
        return len(self.feature)

    @property
    def depth(self) -> int:
        depths = np.zeros(self.nodeCount, dtype=np.int64)
        for node in range(self.nodeCount):
            if self.feature[node] != LEAF:
                depths[self.left[node]] = depths[node] + 1
                depths[self.right[node]] = depths[node] + 1

        return int(depths.max()) if self.nodeCount else 0

    def apply(self, X: FloatArray) -> IntArray:
        """Return the index of the leaf that each row of X falls into."""
        X = np.asarray(X, dtype=np.float64)
        nodes = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))

        active = self.feature[nodes] != LEAF
        while active.any():
            at = nodes[active]
            goLeft = X[rows[active], self.feature[at]] <= self.threshold[at]
            nodes[active] = np.where(goLeft, self.left[at], self.right[at])
            active = self.feature[nodes] != LEAF

        return nodes

    def predict(self, X: FloatArray) -> FloatArray:
        return self.value[self.apply(X)]

    def importances(self, featureCount: int) -> FloatArray:
        internal = self.feature != LEAF
        return np.bincount(
            self.feature[internal],
            weights=self.gain[internal],
            minlength=featureCount,
        )

    def arrays(self, prefix: str = "") -> Dict[str, Any]:
        return {prefix + name: getattr(self, name) for name in self.FIELDS}

    @classmethod
    def fromArrays(cls, arrays: Mapping[str, Any], prefix: str = "") -> "Tree":
        return cls(*(arrays[prefix + name] for name in cls.FIELDS))

def _bestSplit(
    X: FloatArray,
    y: FloatArray,
    rows: IntArray,
    features: Iterable[int],
) -> Optional[Tuple[int, float, float, IntArray, IntArray]]:
    ys = y[rows]
    n = len(rows)
    total = ys.sum()
    totalSq = (ys * ys).sum()
    parent = totalSq - total * total / n
    tolerance = 1e-12 * max(1.0, abs(parent))

    best = None
    bestGain = -np.inf

    leftSizes = np.arange(1, n, dtype=np.float64)
    rightSizes = n - leftSizes

    for f in features:
        xs = X[rows, f]
        order = np.argsort(xs, kind="stable")
        xsorted = xs[order]
        valid = xsorted[:-1] < xsorted[1:]
        if not valid.any():
            continue

        ysorted = ys[order]
        csum = np.cumsum(ysorted)[:-1]
        csq = np.cumsum(ysorted * ysorted)[:-1]

        sseLeft = csq - csum * csum / leftSizes
        sseRight = (totalSq - csq) - (total - csum) ** 2 / rightSizes
        gains = np.where(valid, parent - sseLeft - sseRight, -np.inf)

        k = int(np.argmax(gains))
        if gains[k] > bestGain + tolerance:
            low, high = xsorted[k], xsorted[k + 1]
            threshold = (low + high) / 2.0
            if not low <= threshold < high:
                threshold = low

            bestGain = gains[k]
            best = (int(f), float(threshold), max(float(gains[k]), 0.0))

    if best is None:
        return None

    f, threshold, gain = best
    goLeft = X[rows, f] <= threshold
    return f, threshold, gain, rows[goLeft], rows[~goLeft]

def fitTree(
    X: FloatArray,
    y: FloatArray,
    maxDepth: Optional[int] = None,
    minSamplesSplit: int = 2,
    maxFeatures: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    rows: Optional[IntArray] = None,
) -> Tree:
    """Grow a regression tree on y by exhaustive threshold search.

    Every impure node with at least minSamplesSplit rows is split, even when
    the best split does not reduce impurity, until maxDepth is reached or no
    feature separates the rows. Candidate thresholds are midpoints between
    consecutive distinct values. Among equally good splits, the lowest
    feature index wins. With maxFeatures < d, each node draws its candidate
    features from rng without replacement.

    rows selects (with repetition) the training rows; the default is every
    row once.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    d = X.shape[1]

    if rows is None:
        rows = np.arange(len(X))

    subsample = maxFeatures is not None and maxFeatures < d
    if subsample and rng is None:
        raise ValueError("Feature subsampling needs a random generator")

    nodes: Dict[str, List[Any]] = {name: [] for name in Tree.FIELDS}

    def newNode(members: IntArray) -> int:
        nodes["feature"].append(LEAF)
        nodes["threshold"].append(np.nan)
        nodes["left"].append(LEAF)
        nodes["right"].append(LEAF)
        nodes["value"].append(float(y[members].mean()) if len(members) else 0.0)
        nodes["gain"].append(0.0)
        nodes["samples"].append(len(members))
        return len(nodes["feature"]) - 1

    stack = [(newNode(rows), rows, 0)]
    while stack:
        node, members, depth = stack.pop()

        if maxDepth is not None and depth >= maxDepth:
            continue

        if len(members) < minSamplesSplit or np.ptp(y[members]) == 0.0:
            continue

        if subsample:
            assert rng is not None and maxFeatures is not None
            features: Iterable[int] = np.sort(rng.choice(d, maxFeatures, replace=False))
        else:
            features = range(d)

        split = _bestSplit(X, y, members, features)
        if split is None:
            continue

        feature, threshold, gain, leftRows, rightRows = split
        nodes["feature"][node] = feature
        nodes["threshold"][node] = threshold
        nodes["gain"][node] = gain

        left = newNode(leftRows)
        right = newNode(rightRows)
        nodes["left"][node] = left
        nodes["right"][node] = right

        stack.append((right, rightRows, depth + 1))
        stack.append((left, leftRows, depth + 1))

    return Tree(*(nodes[name] for name in Tree.FIELDS))

@final
class DecisionTree(Estimator):
    """Scores are the fraction of positive training rows in the leaf."""

    FAMILY = "decision_tree"

    def __init__(self, tree: Tree) -> None:
        self.tree = tree

    @classmethod
    def fit(cls,
        X: FloatArray,
        y: Any,
        seed: int = 0,
        max_depth: Optional[int] = None,
        min_samples_split: int = 2,
    ) -> "DecisionTree":
        return cls(fitTree(X, y, max_depth, min_samples_split))

    def score(self, X: FloatArray) -> FloatArray:
        return self.tree.predict(X)

    def importances(self, featureCount: int) -> FloatArray:
        return self.tree.importances(featureCount)

    def arrays(self) -> Dict[str, Any]:
        return self.tree.arrays()

    @classmethod
    def fromArrays(cls, arrays: Mapping[str, Any]) -> "DecisionTree":
        return cls(Tree.fromArrays(arrays))
