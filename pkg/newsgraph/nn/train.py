__all__ = [
    "EpochRecord", "GcnResult", "SplitMasks", "TrainConfig", "makeSplit",
    "prepareFeatures", "taskVector", "trainGcn",
]

import dataclasses
import logging
import math

import numpy as np

from newsgraph.evaluation.metrics import MetricsReport, classificationMetrics
from newsgraph.exception import *
from newsgraph.features import Standardizer, imputeMissing
from newsgraph.ingest.labels import BinaryLabels, Task, taskTargets
from newsgraph.nn.gcn import GcnModel, gcnForward, lossAndGrad, normalizeAdjacency
from newsgraph.nn.layers import nllLoss
from newsgraph.nn.optim import Adam, EarlyStopping
from newsgraph.typing import *
from newsgraph.utils import deriveSeed
from newsgraph.webgraph import AttributedWebgraph
from newsgraph.webgraph.weights import WeightScheme

logger = logging.getLogger(__name__)

@dataclasses.dataclass(frozen=True)
class TrainConfig:
    learningRate: float = 0.05
    patience: int = 30
    minDelta: float = 1e-4
    maxEpochs: int = 1000
    seed: int = 0
    adamBeta1: float = 0.9
    adamBeta2: float = 0.999
    adamEps: float = 1e-8
    hidden: int = 64
    dropout: float = 0.5

    def __post_init__(self) -> None:
        if self.patience < 1:
            raise ValidationError("patience must be at least 1")
        if self.minDelta < 0:
            raise ValidationError("minDelta must be nonnegative")
        if self.maxEpochs < 1:
            raise ValidationError("maxEpochs must be at least 1")
        if self.learningRate <= 0:
            raise ValidationError("learningRate must be positive")
        if self.hidden < 1:
            raise ValidationError("hidden must be at least 1")
        if not 0.0 <= self.dropout < 1.0:
            raise ValidationError("dropout must lie in [0, 1)")

    def replace(self, **changes: Any) -> "TrainConfig":
        return dataclasses.replace(self, **changes)

class SplitMasks(NamedTuple):
    train: BoolArray
    val: BoolArray
    test: BoolArray
    unlabeled: BoolArray

def makeSplit(
    labeled: Any,
    nodeCount: int,
    ratios: Tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> SplitMasks:
    """Randomly partition the labeled node ids into train, val and test.

    Set sizes are round(0.8 m) and round(0.1 m), rounding halves up, and the
    test set takes the remainder. Nodes that are not labeled land in the
    unlabeled mask.

    :raises ValidationError: if fewer than 10 nodes are labeled
    :raises ValueError: if the ratios are negative or do not sum to 1
    """
    ids = np.unique(np.asarray(labeled, dtype=np.int64))
    if len(ids) < 10:
        raise ValidationError(f"A split needs at least 10 labeled nodes, got {len(ids)}")

    if min(ratios) < 0 or not math.isclose(sum(ratios), 1.0, abs_tol=1e-9):
        raise ValueError(f"Split ratios must be nonnegative and sum to 1: {ratios}")

    m = len(ids)
    trainSize = int(math.floor(ratios[0] * m + 0.5))
    valSize = int(math.floor(ratios[1] * m + 0.5))
    valSize = min(valSize, m - trainSize)

    order = np.random.default_rng(seed).permutation(ids)

    masks = [np.zeros(nodeCount, dtype=np.bool_) for _ in range(4)]
    masks[0][order[:trainSize]] = True
    masks[1][order[trainSize:trainSize + valSize]] = True
    masks[2][order[trainSize + valSize:]] = True
    masks[3][:] = True
    masks[3][ids] = False

    return SplitMasks(*masks)

class EpochRecord(NamedTuple):
    epoch: int
    trainLoss: float
    valLoss: float

class GcnResult(NamedTuple):
    model: GcnModel
    history: List[EpochRecord]
    split: SplitMasks
    metrics: MetricsReport
    bestEpoch: int
    stoppedEpoch: int
    standardizer: Standardizer
    featureNames: Tuple[str, ...]

def taskVector(
    graph: AttributedWebgraph,
    labels: Mapping[str, BinaryLabels],
    task: Task,
) -> IntArray:
    """Per-node task targets, with -1 for nodes without a usable label."""
    y = np.full(graph.nodeCount, -1, dtype=np.int64)
    for domain, target in taskTargets(labels, task).items():
        i = graph.nodeIndex.get(domain)
        if i is not None:
            y[i] = target

    return y

def prepareFeatures(graph: AttributedWebgraph) -> Tuple[FloatArray, Standardizer, Tuple[str, ...]]:
    """Impute gaps and standardize every node's attributes together."""
    imputed = imputeMissing(graph.attributes, graph.manifest.names)
    standardizer = Standardizer.fit(imputed.matrix)
    return standardizer.transform(imputed.matrix), standardizer, imputed.names

def trainGcn(
    graph: AttributedWebgraph,
    labels: Mapping[str, BinaryLabels],
    task: Task,
    scheme: Optional[WeightScheme],
    config: TrainConfig = TrainConfig(),
    split: Optional[SplitMasks] = None,
) -> GcnResult:
    """Fit a GCN by full-batch Adam with early stopping on validation loss.

    Unlabeled nodes contribute features through propagation but never enter
    the loss. The parameters of the best validation epoch are returned,
    with test-set metrics.

    :raises DegenerateLabelsError: if some class has fewer than 3 nodes
    :raises TrainingDiverged: if the training loss becomes non-finite
    """
    y = taskVector(graph, labels, task)
    labeled = np.flatnonzero(y >= 0)

    counts = np.bincount(y[labeled], minlength=2)
    if len(labeled) == 0 or counts.min() < 3:
        errmsg = f"Task {task} needs at least 3 labeled nodes per class, got {counts.tolist()}"
        raise DegenerateLabelsError(errmsg)

    X, standardizer, names = prepareFeatures(graph)
    S = normalizeAdjacency(graph, scheme)

    if split is None:
        split = makeSplit(labeled, graph.nodeCount, seed=config.seed)

    model = GcnModel.initialize(
        X.shape[1],
        2,
        hidden=config.hidden,
        dropout=config.dropout,
        seed=deriveSeed(config.seed, "init"),
    )

    rng = np.random.default_rng(deriveSeed(config.seed, "dropout"))
    optimizer = Adam(
        model.params,
        config.learningRate,
        config.adamBeta1,
        config.adamBeta2,
        config.adamEps,
    )

    stopping = EarlyStopping(config.patience, config.minDelta)
    history: List[EpochRecord] = []
    lastLoss: Optional[float] = None

    logger.info(
        "Training GCN on %d nodes (%d train, %d val, %d test), task %s, scheme %s",
        graph.nodeCount, int(split.train.sum()), int(split.val.sum()),
        int(split.test.sum()), task, scheme,
    )

    epoch = 0
    for epoch in range(1, config.maxEpochs + 1):
        loss, grads = lossAndGrad(model, S, X, y, split.train, True, rng)
        if not np.isfinite(loss):
            raise TrainingDiverged(epoch, lastLoss)

        lastLoss = loss
        optimizer.step(grads)

        valLoss, _ = nllLoss(gcnForward(model, S, X).logProbs, y, split.val)
        if not np.isfinite(valLoss):
            raise TrainingDiverged(epoch, lastLoss)

        history.append(EpochRecord(epoch, loss, valLoss))
        logger.debug("epoch %d: train %.6f, val %.6f", epoch, loss, valLoss)

        if stopping.update(epoch, valLoss, model.params):
            break

    best = GcnModel(stopping.bestParams, model.dropout)
    predicted = gcnForward(best, S, X).logProbs.argmax(axis=1)
    metrics = classificationMetrics(
        predicted[split.test],
        y[split.test],
        positive=1,
        task=task.value,
        modelId="gcn",
        seed=config.seed,
    )

    logger.info(
        "GCN best epoch %d of %d: test accuracy %.4f, F1 %.4f",
        stopping.bestEpoch, epoch, metrics.accuracy, metrics.f1,
    )

    return GcnResult(
        best, history, split, metrics, stopping.bestEpoch, epoch,
        standardizer, names,
    )
