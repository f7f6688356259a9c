__all__ = ["Estimator"]

from newsgraph.typing import *

class Estimator:
    """A fitted binary classifier over flat feature vectors.

    score() is monotone in the estimated odds of the positive class, and a
    row is labeled positive iff its score exceeds THRESHOLD. The learned
    state round-trips through arrays() and fromArrays().
    """

    FAMILY: ClassVar[str]
    THRESHOLD: ClassVar[float] = 0.5

    @classmethod
    def fit(cls, X: FloatArray, y: Any, seed: int = 0, **hyperparameters: Any) -> "Estimator":
        raise NotImplementedError()

    def score(self, X: FloatArray) -> FloatArray:
        raise NotImplementedError()

    def probability(self, X: FloatArray) -> FloatArray:
        """Scores mapped onto [0, 1] with THRESHOLD mapped onto 0.5."""
        return self.score(X)

    def arrays(self) -> Dict[str, Any]:
        raise NotImplementedError()

    @classmethod
    def fromArrays(cls, arrays: Mapping[str, Any]) -> "Estimator":
        raise NotImplementedError()
