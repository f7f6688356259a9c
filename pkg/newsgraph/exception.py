__all__ = [
    "CheckpointError",
    "DanglingEdgeError",
    "DataUnavailable",
    "DegenerateLabelsError",
    "LinkDataUnavailable",
    "ManifestMismatchError",
    "MissingProviderTotalError",
    "NewsgraphException",
    "NewsgraphLibraryBug",
    "PipelineError",
    "TrainingDiverged",
    "UnmappableGradeError",
    "ValidationError",
    "ZeroDenominatorError",
]

from newsgraph.typing import *

class NewsgraphException(Exception):
    """Base class for all run-time exceptions in this library."""
    pass

class NewsgraphLibraryBug(AssertionError):
    """Base class for logic errors in the code of this library."""
    pass

class ValidationError(NewsgraphException):
    """Input data or configuration violates a documented precondition."""
    pass

class DanglingEdgeError(ValidationError):
    def __init__(self, domains: Iterable[str]) -> None:
        self.domains = tuple(sorted(set(domains)))
        errmsg = f"Edge endpoints not declared as nodes: {', '.join(self.domains)}"
        super().__init__(errmsg)

class ManifestMismatchError(ValidationError):
    pass

class UnmappableGradeError(ValidationError):
    pass

class MissingProviderTotalError(ValidationError):
    def __init__(self, kind: str, domains: Iterable[str]) -> None:
        self.kind = kind
        self.domains = tuple(sorted(set(domains)))
        errmsg = (
            f"Provider {kind} total is unknown for: {', '.join(self.domains)}"
        )
        super().__init__(errmsg)

class DegenerateLabelsError(ValidationError):
    pass

class CheckpointError(ValidationError):
    pass

class ZeroDenominatorError(NewsgraphException):
    pass

class TrainingDiverged(NewsgraphException):
    """The training loss became NaN or infinite.

    The epoch attribute holds the (1-based) epoch at which the non-finite
    value appeared, and lastLoss holds the most recent finite training loss,
    or None if the very first epoch diverged.
    """

    def __init__(self, epoch: int, lastLoss: Optional[float]) -> None:
        self.epoch = epoch
        self.lastLoss = lastLoss
        errmsg = f"Non-finite training loss at epoch {epoch}"
        if lastLoss is not None:
            errmsg += f" (last finite loss {lastLoss:.6g})"

        super().__init__(errmsg)

class DataUnavailable(NewsgraphException):
    """A client has no record for the requested domain."""
    pass

class LinkDataUnavailable(DataUnavailable):
    pass

class PipelineError(NewsgraphException):
    pass
