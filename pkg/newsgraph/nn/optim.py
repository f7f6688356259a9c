__all__ = ["Adam", "EarlyStopping"]

import logging

import numpy as np

from newsgraph.typing import *

logger = logging.getLogger(__name__)

@final
class Adam:
    """Adam with bias-corrected moment estimates.

    Parameters are updated in place, so callers can hold on to the arrays in
    the params mapping.
    """

    def __init__(self,
        params: Mapping[str, FloatArray],
        learningRate: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ) -> None:
        self.params = params
        self.learningRate = learningRate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {name: np.zeros_like(p) for name, p in params.items()}
        self.v = {name: np.zeros_like(p) for name, p in params.items()}

    def step(self, grads: Mapping[str, FloatArray]) -> None:
        self.t += 1
        correction1 = 1.0 - self.beta1 ** self.t
        correction2 = 1.0 - self.beta2 ** self.t

        for name, param in self.params.items():
            g = grads[name]
            m = self.m[name]
            v = self.v[name]

            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g

            mhat = m / correction1
            vhat = v / correction2
            param -= self.learningRate * mhat / (np.sqrt(vhat) + self.eps)

@final
class EarlyStopping:
    """Track the best validation loss and decide when to stop.

    An epoch improves on the best loss only if it is lower by more than
    minDelta. Training stops once patience consecutive epochs fail to
    improve. A copy of the parameters from the best epoch is retained.
    """

    def __init__(self, patience: int = 30, minDelta: float = 1e-4) -> None:
        if patience < 1:
            raise ValueError(f"patience must be at least 1 (got {patience})")

        if minDelta < 0:
            raise ValueError(f"minDelta must be nonnegative (got {minDelta})")

        self.patience = patience
        self.minDelta = minDelta
        self.best: Optional[float] = None
        self.bestEpoch = 0
        self.bestParams: Dict[str, FloatArray] = {}
        self.stale = 0

    def update(self,
        epoch: int,
        loss: float,
        params: Mapping[str, FloatArray],
    ) -> bool:
        """Record one epoch; return True if training should stop."""
        if self.best is None or loss < self.best - self.minDelta:
            self.best = loss
            self.bestEpoch = epoch
            self.bestParams = {name: p.copy() for name, p in params.items()}
            self.stale = 0
            return False

        self.stale += 1
        if self.stale >= self.patience:
            logger.info(
                "Early stop at epoch %d (best epoch %d, loss %.6g)",
                epoch, self.bestEpoch, self.best,
            )

            return True

        return False
