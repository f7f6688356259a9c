__all__ = [
    "Family", "FittedModel", "FlatModelSpec", "Prediction", "featureImportances",
    "fitFlatModel", "loadFittedModel", "predictFlat", "saveFittedModel",
]

import dataclasses
import enum
import logging

import numpy as np

from newsgraph.baselines.ensemble import GradientBoosting, RandomForest
from newsgraph.baselines.estimator import Estimator
from newsgraph.baselines.linear import LinearSvm
from newsgraph.baselines.mlp import MlpClassifier
from newsgraph.baselines.tree import DecisionTree
from newsgraph.exception import *
from newsgraph.features import Standardizer
from newsgraph.nn.checkpoint import readArchive, writeArchive
from newsgraph.typing import *
from newsgraph.utils import typename
from newsgraph.webgraph import AttributeManifest

logger = logging.getLogger(__name__)

class Family(enum.Enum):
    DECISION_TREE = "decision_tree"
    RANDOM_FOREST = "random_forest"
    GBDT = "gbdt"
    MLP = "mlp"
    LINEAR_SVM = "linear_svm"

    def __str__(self) -> str:
        return self.value

ESTIMATORS: Dict[Family, Type[Estimator]] = {
    Family.DECISION_TREE: DecisionTree,
    Family.RANDOM_FOREST: RandomForest,
    Family.GBDT: GradientBoosting,
    Family.MLP: MlpClassifier,
    Family.LINEAR_SVM: LinearSvm,
}

DEFAULTS: Dict[Family, Dict[str, Any]] = {
    Family.DECISION_TREE: {
        "max_depth": None,
        "min_samples_split": 2,
    },
    Family.RANDOM_FOREST: {
        "n_estimators": 50,
        "max_depth": None,
        "min_samples_split": 2,
        "max_features": "sqrt",
        "bootstrap": True,
    },
    Family.GBDT: {
        "n_estimators": 100,
        "learning_rate": 0.1,
        "max_depth": 3,
        "min_samples_split": 2,
    },
    Family.MLP: {
        "hidden_layer_sizes": (200, 200),
        "learning_rate": 1e-3,
        "alpha": 1e-4,
        "epochs": 200,
    },
    Family.LINEAR_SVM: {
        "C": 1.0,
        "epochs": 2000,
    },
}

# these families see z-scored inputs
STANDARDIZED = frozenset((Family.MLP, Family.LINEAR_SVM))
TREE_FAMILIES = frozenset((Family.DECISION_TREE, Family.RANDOM_FOREST, Family.GBDT))

@dataclasses.dataclass(frozen=True)
class FlatModelSpec:
    family: Family
    hyperparameters: Mapping[str, Any]
    seed: int = 0

    @classmethod
    def default(cls,
        family: Union[Family, str],
        seed: int = 0,
        **overrides: Any,
    ) -> "FlatModelSpec":
        """Build a complete spec from the family defaults.

        :raises ValidationError: if an override names an unknown hyperparameter
        """
        try:
            family = Family(family)
        except ValueError as err:
            raise ValidationError(f"Unknown model family: {family!r}") from err

        defaults = DEFAULTS[family]
        unknown = sorted(set(overrides) - set(defaults))
        if unknown:
            errmsg = f"Unknown {family} hyperparameters: {', '.join(unknown)}"
            raise ValidationError(errmsg)

        hyperparameters = dict(defaults)
        hyperparameters.update(overrides)
        return cls(family, hyperparameters, seed)

class Prediction(NamedTuple):
    labels: IntArray
    scores: FloatArray
    probabilities: FloatArray

@final
class FittedModel:
    def __init__(self,
        spec: FlatModelSpec,
        estimator: Estimator,
        featureCount: int,
        manifest: Optional[AttributeManifest] = None,
        standardizer: Optional[Standardizer] = None,
    ) -> None:
        self.spec = spec
        self.estimator = estimator
        self.featureCount = featureCount
        self.manifest = manifest
        self.standardizer = standardizer

    def __repr__(self) -> str:
        return f"<{typename(self)}: {self.family}, {self.featureCount} features>"

    @property
    def family(self) -> Family:
        return self.spec.family

    @property
    def threshold(self) -> float:
        return self.estimator.THRESHOLD

def _checkClasses(y: IntArray) -> None:
    if not np.isin(y, (0, 1)).all():
        raise ValidationError("Flat model targets must be 0 or 1")

    counts = np.bincount(y, minlength=2)
    if (counts > 0).sum() < 2:
        errmsg = f"Flat models need two classes, got counts {counts.tolist()}"
        raise DegenerateLabelsError(errmsg)

    if counts.min() < 2:
        errmsg = f"Each class needs at least 2 samples, got {counts.tolist()}"
        raise DegenerateLabelsError(errmsg)

def fitFlatModel(
    spec: FlatModelSpec,
    X: Any,
    y: Any,
    manifest: Optional[AttributeManifest] = None,
) -> FittedModel:
    """Fit one flat classifier on 0/1 targets.

    :raises ValidationError: if X holds a non-finite value
    :raises DegenerateLabelsError: if either class has fewer than 2 rows
    :raises ManifestMismatchError: if the manifest does not match X
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.int64)

    if X.ndim != 2 or len(X) != len(y):
        errmsg = f"Feature matrix of shape {X.shape} does not fit {len(y)} labels"
        raise ValidationError(errmsg)

    if not np.isfinite(X).all():
        raise ValidationError("Feature matrix contains non-finite values; impute first")

    if manifest is not None and len(manifest) != X.shape[1]:
        errmsg = f"Manifest lists {len(manifest)} features, matrix has {X.shape[1]}"
        raise ManifestMismatchError(errmsg)

    _checkClasses(y)

    standardizer = None
    if spec.family in STANDARDIZED:
        standardizer = Standardizer.fit(X)
        X = standardizer.transform(X)

    estimator = ESTIMATORS[spec.family].fit(X, y, spec.seed, **spec.hyperparameters)
    logger.debug("Fit %s on %d rows x %d features", spec.family, *X.shape)
    return FittedModel(spec, estimator, X.shape[1], manifest, standardizer)

def predictFlat(
    model: FittedModel,
    X: Any,
    manifest: Optional[AttributeManifest] = None,
) -> Prediction:
    """Label rows positive iff their score exceeds the family's threshold.

    :raises ManifestMismatchError:
        if X has the wrong width, or if both manifest and the model's
        manifest are known and differ
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.featureCount:
        errmsg = f"Model expects {model.featureCount} features, got shape {X.shape}"
        raise ManifestMismatchError(errmsg)

    if manifest is not None and model.manifest is not None and manifest != model.manifest:
        raise ManifestMismatchError("Feature manifest differs from the one the model was fit on")

    if model.standardizer is not None:
        X = model.standardizer.transform(X)

    scores = model.estimator.score(X)
    labels = (scores > model.threshold).astype(np.int64)
    return Prediction(labels, scores, model.estimator.probability(X))

def featureImportances(model: FittedModel) -> FloatArray:
    """Total split gain per feature, normalized to sum to 1.

    :raises ValueError:
        for families without split gains, or if the model never split
    """
    if model.family not in TREE_FAMILIES:
        raise ValueError(f"{model.family} models have no gain importances")

    gains = model.estimator.importances(model.featureCount)  # type: ignore[attr-defined]
    total = float(gains.sum())
    if total <= 0.0:
        raise ValueError("Model has no split with positive gain")

    return gains / total

STANDARDIZER_PREFIX = "standardizer_"

def _jsonable(value: Any) -> Any:
    if isinstance(value, tuple):
        return list(value)

    return value

def saveFittedModel(model: FittedModel, path: PathLike) -> None:
    arrays = dict(model.estimator.arrays())
    if model.standardizer is not None:
        arrays[STANDARDIZER_PREFIX + "mean"] = model.standardizer.mean
        arrays[STANDARDIZER_PREFIX + "scale"] = model.standardizer.scale

    metadata = {
        "family": model.family.value,
        "hyperparameters": {k: _jsonable(v) for k, v in model.spec.hyperparameters.items()},
        "seed": model.spec.seed,
        "feature_count": model.featureCount,
        "manifest": None if model.manifest is None else list(model.manifest.names),
    }

    writeArchive(path, "flat_model", arrays, metadata)

def loadFittedModel(path: PathLike) -> FittedModel:
    """:raises CheckpointError: if the file is not a readable flat model"""
    arrays, meta = readArchive(path, "flat_model")

    try:
        family = Family(meta["family"])
        hyperparameters = dict(meta["hyperparameters"])
        if "hidden_layer_sizes" in hyperparameters:
            hyperparameters["hidden_layer_sizes"] = tuple(hyperparameters["hidden_layer_sizes"])

        spec = FlatModelSpec(family, hyperparameters, meta["seed"])
        estimator = ESTIMATORS[family].fromArrays(arrays)

        standardizer = None
        if STANDARDIZER_PREFIX + "mean" in arrays:
            standardizer = Standardizer(
                arrays[STANDARDIZER_PREFIX + "mean"],
                arrays[STANDARDIZER_PREFIX + "scale"],
            )

        names = meta.get("manifest")
        manifest = None if names is None else AttributeManifest(names)
        return FittedModel(spec, estimator, int(meta["feature_count"]), manifest, standardizer)
    except (KeyError, ValueError, TypeError) as err:
        raise CheckpointError(f"{path} holds an invalid flat model: {err}") from err
