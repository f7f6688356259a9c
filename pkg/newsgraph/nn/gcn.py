__all__ = [
    "ForwardPass", "GcnModel", "PARAMETER_NAMES", "backward", "gcnForward",
    "lossAndGrad", "normalizeAdjacency",
]

import numpy as np
import scipy.sparse

from newsgraph.nn.layers import dropoutMask, logSoftmax, nllLoss, uniformInit
from newsgraph.typing import *
from newsgraph.utils import typename
from newsgraph.webgraph import AttributedWebgraph
from newsgraph.webgraph.weights import WeightScheme, weightEdges

PARAMETER_NAMES = ("W0", "b0", "W1", "b1", "Wh", "bh")

def normalizeAdjacency(
    graph: AttributedWebgraph,
    scheme: Optional[WeightScheme] = None,
) -> scipy.sparse.csr_matrix:
    """Build the propagation operator D^-1/2 (W_sym + I) D^-1/2.

    W holds the scheme's edge weights (1 per edge if scheme is None) at
    (source, target), and W_sym = (W + W^T) / 2. The self-loop weight is
    always 1, so every node has a positive degree.
    """
    n = graph.nodeCount
    if scheme is None:
        weights = np.ones(graph.edgeCount)
    else:
        weights = weightEdges(graph, scheme)

    W = graph.adjacencyMatrix(weights)
    A = (W + W.T) * 0.5 + scipy.sparse.identity(n, format="csr")

    degree = np.asarray(A.sum(axis=1)).ravel()
    scale = scipy.sparse.diags(1.0 / np.sqrt(degree))
    return (scale @ A @ scale).tocsr()

@final
class GcnModel:
    """Two graph-convolution layers and a linear head.

    logits = relu(S relu(S X W0 + b0) W1 + b1) Wh + bh, with dropout after
    each relu during training.
    """

    def __init__(self,
        params: Mapping[str, FloatArray],
        dropout: float = 0.5,
    ) -> None:
        missing = [name for name in PARAMETER_NAMES if name not in params]
        if missing:
            raise ValueError(f"Missing parameters: {', '.join(missing)}")

        self.params = {
            name: np.array(params[name], dtype=np.float64)
            for name in PARAMETER_NAMES
        }

        self.dropout = dropout

        W0, b0 = self.params["W0"], self.params["b0"]
        W1, b1 = self.params["W1"], self.params["b1"]
        Wh, bh = self.params["Wh"], self.params["bh"]

        if not (b0.shape == (W0.shape[1],)
        and W1.shape[0] == W0.shape[1]
        and b1.shape == (W1.shape[1],)
        and Wh.shape[0] == W1.shape[1]
        and bh.shape == (Wh.shape[1],)):
            shapes = {name: p.shape for name, p in self.params.items()}
            raise ValueError(f"Inconsistent parameter shapes: {shapes}")

        if not 0.0 <= dropout < 1.0:
            raise ValueError(f"dropout must lie in [0, 1) (got {dropout})")

    def __repr__(self) -> str:
        return (
            f"<{typename(self)}: {self.inputDim} -> {self.hidden}"
            f" -> {self.hidden} -> {self.classCount}>"
        )

    @classmethod
    def initialize(cls,
        inputDim: int,
        classCount: int,
        hidden: int = 64,
        dropout: float = 0.5,
        seed: int = 0,
    ) -> "GcnModel":
        rng = np.random.default_rng(seed)
        params = {
            "W0": uniformInit(rng, inputDim, hidden),
            "b0": np.zeros(hidden),
            "W1": uniformInit(rng, hidden, hidden),
            "b1": np.zeros(hidden),
            "Wh": uniformInit(rng, hidden, classCount),
            "bh": np.zeros(classCount),
        }

        return cls(params, dropout)

    @property
    def inputDim(self) -> int:
        return self.params["W0"].shape[0]

    @property
    def hidden(self) -> int:
        return self.params["W0"].shape[1]

    @property
    def classCount(self) -> int:
        return self.params["Wh"].shape[1]

    def copy(self) -> "GcnModel":
        return GcnModel(self.params, self.dropout)

class ForwardPass(NamedTuple):
    logProbs: FloatArray
    logits: FloatArray
    SX: FloatArray
    Z0: FloatArray
    D1: FloatArray
    P1: FloatArray
    Z1: FloatArray
    D2: FloatArray
    mask1: Optional[FloatArray]
    mask2: Optional[FloatArray]

def gcnForward(
    model: GcnModel,
    S: Any,
    X: FloatArray,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> ForwardPass:
    """Run the model on every node and cache the activations.

    :raises ValueError:
        if X is not finite, if its shape disagrees with S or the model, or
        if training is requested without a random generator for dropout
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != S.shape[0] or X.shape[1] != model.inputDim:
        errmsg = (
            f"Feature matrix of shape {X.shape} does not fit an operator of"
            f" shape {S.shape} and a model with {model.inputDim} inputs"
        )

        raise ValueError(errmsg)

    if not np.isfinite(X).all():
        raise ValueError("Feature matrix contains non-finite values")

    useDropout = training and model.dropout > 0.0
    if useDropout and rng is None:
        raise ValueError("Training mode needs a random generator for dropout")

    p = model.params
    SX = np.asarray(S @ X)
    Z0 = SX @ p["W0"] + p["b0"]
    H1 = np.maximum(Z0, 0.0)

    mask1 = dropoutMask(rng, H1.shape, model.dropout) if useDropout else None
    D1 = H1 if mask1 is None else H1 * mask1

    P1 = np.asarray(S @ D1)
    Z1 = P1 @ p["W1"] + p["b1"]
    H2 = np.maximum(Z1, 0.0)

    mask2 = dropoutMask(rng, H2.shape, model.dropout) if useDropout else None
    D2 = H2 if mask2 is None else H2 * mask2

    logits = D2 @ p["Wh"] + p["bh"]
    return ForwardPass(
        logSoftmax(logits), logits, SX, Z0, D1, P1, Z1, D2, mask1, mask2,
    )

def backward(
    model: GcnModel,
    S: Any,
    cache: ForwardPass,
    dlogits: FloatArray,
) -> Dict[str, FloatArray]:
    """Propagate d(loss)/d(logits) back to every parameter."""
    p = model.params

    dWh = cache.D2.T @ dlogits
    dbh = dlogits.sum(axis=0)

    dH2 = dlogits @ p["Wh"].T
    if cache.mask2 is not None:
        dH2 = dH2 * cache.mask2

    dZ1 = dH2 * (cache.Z1 > 0)
    dW1 = cache.P1.T @ dZ1
    db1 = dZ1.sum(axis=0)

    dD1 = np.asarray(S.T @ (dZ1 @ p["W1"].T))
    if cache.mask1 is not None:
        dD1 = dD1 * cache.mask1

    dZ0 = dD1 * (cache.Z0 > 0)
    dW0 = cache.SX.T @ dZ0
    db0 = dZ0.sum(axis=0)

    return {"W0": dW0, "b0": db0, "W1": dW1, "b1": db1, "Wh": dWh, "bh": dbh}

def lossAndGrad(
    model: GcnModel,
    S: Any,
    X: FloatArray,
    labels: Any,
    mask: Any,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[float, Dict[str, FloatArray]]:
    """Masked mean cross-entropy and its gradient for every parameter.

    :raises ValueError: if the mask selects no node
    """
    if not np.any(mask):
        raise ValueError("Loss mask selects no nodes")

    cache = gcnForward(model, S, X, training, rng)
    loss, dlogits = nllLoss(cache.logProbs, labels, mask)
    return loss, backward(model, S, cache, dlogits)
