__all__ = ["LinearSvm", "svmObjective"]

import logging

import numpy as np
import scipy.special

from newsgraph.baselines.estimator import Estimator
from newsgraph.typing import *

logger = logging.getLogger(__name__)

def svmObjective(
    weights: FloatArray,
    bias: float,
    X: FloatArray,
    y: Any,
    regularization: float,
) -> float:
    """regularization / 2 * |[w, b]|^2 + mean hinge loss, for 0/1 targets."""
    signs = 2.0 * np.asarray(y, dtype=np.float64) - 1.0
    margins = signs * (X @ weights + bias)
    hinge = np.maximum(0.0, 1.0 - margins).mean()
    norm = weights @ weights + bias * bias
    return float(0.5 * regularization * norm + hinge)

@final
class LinearSvm(Estimator):
    """Soft-margin linear SVM fit by projected subgradient descent.

    The regularization strength is 1 / (C n). Steps have length 1 / (lambda t)
    and every iterate is projected onto the ball of radius 1 / sqrt(lambda),
    which contains the minimizer. The returned parameters are the iterate or
    running average with the lowest objective seen. The score is the signed
    margin.
    """

    FAMILY = "linear_svm"
    THRESHOLD = 0.0

    def __init__(self, weights: FloatArray, bias: float) -> None:
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)

    @classmethod
    def fit(cls,
        X: FloatArray,
        y: Any,
        seed: int = 0,
        C: float = 1.0,
        epochs: int = 2000,
    ) -> "LinearSvm":
        if C <= 0:
            raise ValueError(f"C must be positive (got {C})")
        if epochs < 1:
            raise ValueError(f"epochs must be at least 1 (got {epochs})")

        X = np.asarray(X, dtype=np.float64)
        n, d = X.shape
        signs = 2.0 * np.asarray(y, dtype=np.float64) - 1.0

        lam = 1.0 / (C * n)
        radius = 1.0 / np.sqrt(lam)

        # the bias rides along as the last coordinate of theta
        Xb = np.hstack((X, np.ones((n, 1))))
        targets = signs > 0
        theta = np.zeros(d + 1)
        average = np.zeros(d + 1)
        best = theta.copy()
        bestObjective = svmObjective(best[:-1], best[-1], X, targets, lam)

        for t in range(1, epochs + 1):
            violated = signs * (Xb @ theta) < 1.0
            grad = lam * theta - (signs[violated] @ Xb[violated]) / n

            theta = theta - grad / (lam * t)
            norm = np.linalg.norm(theta)
            if norm > radius:
                theta *= radius / norm

            average += (theta - average) / t

            for candidate in (theta, average):
                objective = svmObjective(candidate[:-1], candidate[-1], X, targets, lam)
                if objective < bestObjective:
                    best = candidate.copy()
                    bestObjective = objective

        logger.debug("Linear SVM objective after %d epochs: %.6f", epochs, bestObjective)
        return cls(best[:-1], best[-1])

    def score(self, X: FloatArray) -> FloatArray:
        return np.asarray(X, dtype=np.float64) @ self.weights + self.bias

    def probability(self, X: FloatArray) -> FloatArray:
        return scipy.special.expit(self.score(X))

    def arrays(self) -> Dict[str, Any]:
        return {"weights": self.weights, "bias": np.array(self.bias)}

    @classmethod
    def fromArrays(cls, arrays: Mapping[str, Any]) -> "LinearSvm":
        return cls(arrays["weights"], float(arrays["bias"]))
