__all__ = [
    "Dense", "Dropout", "Layer", "Relu", "Sequential", "dropoutMask",
    "logSoftmax", "nllLoss", "uniformInit",
]

import numpy as np
import scipy.special

from newsgraph.typing import *
from newsgraph.utils import typename

def uniformInit(
    rng: np.random.Generator,
    fanIn: int,
    fanOut: int,
) -> FloatArray:
    """Draw a fanIn x fanOut matrix from U(-1/sqrt(fanIn), 1/sqrt(fanIn))."""
    bound = 1.0 / np.sqrt(max(fanIn, 1))
    return rng.uniform(-bound, bound, size=(fanIn, fanOut))

def dropoutMask(
    rng: np.random.Generator,
    shape: Tuple[int, ...],
    rate: float,
) -> FloatArray:
    """Inverted dropout: kept units are scaled by 1 / (1 - rate)."""
    if rate <= 0.0:
        return np.ones(shape)

    return (rng.random(shape) >= rate) / (1.0 - rate)

def logSoftmax(logits: FloatArray) -> FloatArray:
    return scipy.special.log_softmax(logits, axis=1)

def nllLoss(
    logProbs: FloatArray,
    labels: Any,
    mask: Any,
) -> Tuple[float, FloatArray]:
    """Mean negative log-likelihood over the masked rows.

    Returns the loss and its gradient with respect to the logits that
    produced logProbs (the softmax minus the one-hot target, divided by the
    number of masked rows; unmasked rows get zero).

    :raises ValueError: if the mask selects no rows
    """
    rows = np.flatnonzero(mask)
    if len(rows) == 0:
        raise ValueError("Loss mask selects no rows")

    labels = np.asarray(labels)
    targets = labels[rows]
    loss = -float(np.mean(logProbs[rows, targets]))

    grad = np.zeros_like(logProbs)
    grad[rows] = np.exp(logProbs[rows])
    grad[rows, targets] -= 1.0
    grad /= len(rows)
    return loss, grad

class Layer:
    """A differentiable stage that caches what its backward pass needs.

    backward() receives the gradient of the loss with respect to the layer's
    output, stores parameter gradients in self.gradients, and returns the
    gradient with respect to the layer's input.
    """

    def parameters(self) -> Dict[str, FloatArray]:
        return {}

    def forward(self, x: FloatArray, training: bool = False) -> FloatArray:
        raise NotImplementedError()

    def backward(self, grad: FloatArray) -> FloatArray:
        raise NotImplementedError()

@final
class Dense(Layer):
    def __init__(self, weight: FloatArray, bias: FloatArray) -> None:
        self.weight = weight
        self.bias = bias
        self.gradients: Dict[str, FloatArray] = {}
        self.x: Optional[FloatArray] = None

    def __repr__(self) -> str:
        return f"{typename(self)}({self.weight.shape[0]}, {self.weight.shape[1]})"

    @classmethod
    def initialize(cls,
        rng: np.random.Generator,
        fanIn: int,
        fanOut: int,
    ) -> "Dense":
        return cls(uniformInit(rng, fanIn, fanOut), np.zeros(fanOut))

    def parameters(self) -> Dict[str, FloatArray]:
        return {"weight": self.weight, "bias": self.bias}

    def forward(self, x: FloatArray, training: bool = False) -> FloatArray:
        self.x = x
        return x @ self.weight + self.bias

    def backward(self, grad: FloatArray) -> FloatArray:
        assert self.x is not None
        self.gradients = {
            "weight": self.x.T @ grad,
            "bias": grad.sum(axis=0),
        }

        return grad @ self.weight.T

@final
class Relu(Layer):
    def __init__(self) -> None:
        self.active: Optional[BoolArray] = None

    def forward(self, x: FloatArray, training: bool = False) -> FloatArray:
        self.active = x > 0
        return np.where(self.active, x, 0.0)

    def backward(self, grad: FloatArray) -> FloatArray:
        assert self.active is not None
        return grad * self.active

@final
class Dropout(Layer):
    def __init__(self, rate: float, rng: np.random.Generator) -> None:
        self.rate = rate
        self.rng = rng
        self.mask: Optional[FloatArray] = None

    def forward(self, x: FloatArray, training: bool = False) -> FloatArray:
        if not training or self.rate <= 0.0:
            self.mask = None
            return x

        self.mask = dropoutMask(self.rng, x.shape, self.rate)
        return x * self.mask

    def backward(self, grad: FloatArray) -> FloatArray:
        return grad if self.mask is None else grad * self.mask

@final
class Sequential(Layer):
    def __init__(self, layers: Sequence[Layer]) -> None:
        self.layers = list(layers)

    def parameters(self) -> Dict[str, FloatArray]:
        params = {}
        for i, layer in enumerate(self.layers):
            for name, value in layer.parameters().items():
                params[f"{i}.{name}"] = value

        return params

    def gradients(self) -> Dict[str, FloatArray]:
        grads = {}
        for i, layer in enumerate(self.layers):
            for name, value in getattr(layer, "gradients", {}).items():
                grads[f"{i}.{name}"] = value

        return grads

    def forward(self, x: FloatArray, training: bool = False) -> FloatArray:
        for layer in self.layers:
            x = layer.forward(x, training)

        return x

    def backward(self, grad: FloatArray) -> FloatArray:
        for layer in reversed(self.layers):
            grad = layer.backward(grad)

        return grad
