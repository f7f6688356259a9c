__all__ = [
    "Imputed", "MISSING_SUFFIX", "Standardizer", "alignFeatures", "imputeMissing",
]

import numpy as np

from newsgraph.exception import *
from newsgraph.typing import *

MISSING_SUFFIX = "_missing"

class Imputed(NamedTuple):
    matrix: FloatArray
    names: Tuple[str, ...]

def imputeMissing(
    X: Any,
    names: Optional[Sequence[str]] = None,
) -> Imputed:
    """Replace NaN with 0 and append one indicator column per gappy column.

    Indicator columns are appended in the order of the columns they describe,
    and are named by appending "_missing" to the original column name. A
    column with no NaN values gets no indicator.

    :raises ValidationError: if X contains an infinite value
    """
    X = np.array(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"Expected a 2-d feature matrix, got {X.ndim} dims")

    if names is None:
        names = [f"x{j}" for j in range(X.shape[1])]
    elif len(names) != X.shape[1]:
        errmsg = f"{len(names)} names for a matrix with {X.shape[1]} columns"
        raise ManifestMismatchError(errmsg)

    if np.isinf(X).any():
        raise ValidationError("Feature matrix contains infinite values")

    missing = np.isnan(X)
    gappy = np.flatnonzero(missing.any(axis=0))

    filled = np.where(missing, 0.0, X)
    indicators = missing[:, gappy].astype(np.float64)

    matrix = np.hstack((filled, indicators))
    allNames = tuple(names) + tuple(names[j] + MISSING_SUFFIX for j in gappy)
    return Imputed(matrix, allNames)

def alignFeatures(
    X: Any,
    sourceNames: Sequence[str],
    targetNames: Sequence[str],
) -> FloatArray:
    """Rearrange raw attribute columns into the layout a model was fit on.

    Target columns ending in "_missing" are rebuilt as NaN indicators of the
    corresponding source column. Remaining NaN values are imputed to 0.

    :raises ManifestMismatchError: if a target column has no source
    """
    X = np.asarray(X, dtype=np.float64)
    index = {name: j for j, name in enumerate(sourceNames)}

    columns = []
    absent = []
    for name in targetNames:
        if name in index:
            column = X[:, index[name]]
            columns.append(np.where(np.isnan(column), 0.0, column))
        elif name.endswith(MISSING_SUFFIX) and name[:-len(MISSING_SUFFIX)] in index:
            base = index[name[:-len(MISSING_SUFFIX)]]
            columns.append(np.isnan(X[:, base]).astype(np.float64))
        else:
            absent.append(name)

    if absent:
        errmsg = f"Features unavailable in the source data: {', '.join(absent)}"
        raise ManifestMismatchError(errmsg)

    if not columns:
        return np.zeros((X.shape[0], 0))

    return np.column_stack(columns)

@final
class Standardizer:
    """Per-column z-scoring; constant columns are centered but not scaled."""

    def __init__(self, mean: FloatArray, scale: FloatArray) -> None:
        self.mean = np.asarray(mean, dtype=np.float64)
        self.scale = np.asarray(scale, dtype=np.float64)

    @classmethod
    def fit(cls, X: Any) -> "Standardizer":
        X = np.asarray(X, dtype=np.float64)
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0.0] = 1.0
        return cls(mean, scale)

    def transform(self, X: Any) -> FloatArray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.scale
