__all__ = ["MlpClassifier"]

import logging

import numpy as np

from newsgraph.baselines.estimator import Estimator
from newsgraph.exception import *
from newsgraph.nn.layers import Dense, Layer, Relu, Sequential, logSoftmax, nllLoss
from newsgraph.nn.optim import Adam
from newsgraph.typing import *
from newsgraph.utils import typename

logger = logging.getLogger(__name__)

def _network(dense: Sequence[Dense]) -> Sequential:
    layers: List[Layer] = []
    for i, layer in enumerate(dense):
        if i > 0:
            layers.append(Relu())
        layers.append(layer)

    return Sequential(layers)

@final
class MlpClassifier(Estimator):
    """A fully connected relu network with a two-way softmax output.

    Training is full-batch Adam on the mean cross-entropy plus an L2 penalty
    of alpha / (2 n) on the weights. The score is the softmax probability of
    the positive class.
    """

    FAMILY = "mlp"

    def __init__(self, dense: Sequence[Dense]) -> None:
        self.dense = list(dense)
        self.network = _network(self.dense)

    def __repr__(self) -> str:
        sizes = [self.dense[0].weight.shape[0]] + [d.weight.shape[1] for d in self.dense]
        return f"<{typename(self)}: {' -> '.join(map(str, sizes))}>"

    @classmethod
    def fit(cls,
        X: FloatArray,
        y: Any,
        seed: int = 0,
        hidden_layer_sizes: Sequence[int] = (200, 200),
        learning_rate: float = 1e-3,
        alpha: float = 1e-4,
        epochs: int = 200,
    ) -> "MlpClassifier":
        if epochs < 1:
            raise ValueError(f"epochs must be at least 1 (got {epochs})")

        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n = len(X)

        rng = np.random.default_rng(seed)
        sizes = [X.shape[1], *hidden_layer_sizes, 2]
        dense = [Dense.initialize(rng, a, b) for a, b in zip(sizes[:-1], sizes[1:])]

        model = cls(dense)
        params = model.network.parameters()
        optimizer = Adam(params, learning_rate)
        everyRow = np.ones(n, dtype=np.bool_)

        loss = float("nan")
        for epoch in range(1, epochs + 1):
            logits = model.network.forward(X, training=True)
            loss, dlogits = nllLoss(logSoftmax(logits), y, everyRow)
            if not np.isfinite(loss):
                raise TrainingDiverged(epoch, None)

            model.network.backward(dlogits)
            grads = model.network.gradients()
            for name, grad in grads.items():
                if name.endswith(".weight"):
                    grad += alpha * params[name] / n

            optimizer.step(grads)

        logger.debug("MLP training loss after %d epochs: %.6f", epochs, loss)
        return model

    def score(self, X: FloatArray) -> FloatArray:
        logits = self.network.forward(np.asarray(X, dtype=np.float64))
        return np.exp(logSoftmax(logits)[:, 1])

    def arrays(self) -> Dict[str, Any]:
        arrays = {}
        for i, layer in enumerate(self.dense):
            arrays[f"dense{i}_weight"] = layer.weight
            arrays[f"dense{i}_bias"] = layer.bias

        return arrays

    @classmethod
    def fromArrays(cls, arrays: Mapping[str, Any]) -> "MlpClassifier":
        dense = []
        while f"dense{len(dense)}_weight" in arrays:
            i = len(dense)
            dense.append(Dense(
                np.asarray(arrays[f"dense{i}_weight"], dtype=np.float64),
                np.asarray(arrays[f"dense{i}_bias"], dtype=np.float64),
            ))

        if not dense:
            raise ValueError("No dense layers in the stored arrays")

        return cls(dense)
