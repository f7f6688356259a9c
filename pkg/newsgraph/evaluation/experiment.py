__all__ = [
    "DEFAULTS", "FAILURE_COLUMNS", "IMPORTANCE_COLUMNS", "NETWORKS",
    "RESULT_COLUMNS", "UNWEIGHTED", "ExperimentConfig", "ExperimentResult",
    "runExperiment",
]

import copy
import importlib.metadata
import logging
import os

import numpy as np
import pandas as pd
import yaml

from newsgraph import __version__
from newsgraph.baselines.models import (
    Family, FlatModelSpec, TREE_FAMILIES, featureImportances, fitFlatModel,
    predictFlat,
)
from newsgraph.discovery.pipeline import PipelineConfig
from newsgraph.discovery.schemes import LinkSchemeCriteria
from newsgraph.evaluation.metrics import MetricsReport, classificationMetrics
from newsgraph.exception import *
from newsgraph.ingest.labels import BinaryLabels, Task, mergeAndBinarize, readLabels
from newsgraph.ingest.synthetic import SyntheticConfig, generateSyntheticWebgraph
from newsgraph.nn.train import (
    SplitMasks, TrainConfig, makeSplit, prepareFeatures, taskVector, trainGcn,
)
from newsgraph.typing import *
from newsgraph.utils import canonicalJson, stableHash, typename
from newsgraph.webgraph import AttributedWebgraph, LinkKind
from newsgraph.webgraph.io import readGraph
from newsgraph.webgraph.topn import truncateTopN
from newsgraph.webgraph.weights import WeightScheme

logger = logging.getLogger(__name__)

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "experiment": {
        "name": "experiment",
        "seed": 0,
        "repeats": 1,
        "tasks": ["reliability"],
    },
    "data": {
        "nodes": None,
        "edges": None,
        "labels": None,
    },
    "synthetic": {
        "node_count": 500,
        "class_count": 2,
        "homophily": 0.9,
        "attribute_signal": 1.0,
        "mean_degree": 8.0,
        "informative_attributes": 4,
        "noise_attributes": 4,
        "mean_links": 20.0,
        "unlabeled_fraction": 0.0,
        "outlink_fraction": 0.0,
        "provider_extra_mean": 50.0,
    },
    "sweep": {
        "networks": ["combined"],
        "schemes": ["links"],
        "topn": [],
        "topn_kind": "backlink",
    },
    "train": {
        "learning_rate": 0.05,
        "patience": 30,
        "min_delta": 1e-4,
        "max_epochs": 1000,
        "hidden": 64,
        "dropout": 0.5,
    },
    "flat": {
        "models": [],
    },
    "discovery": {
        "backlinks_per_seed": 100,
        "alpha_min": 0,
        "beta_min": 0,
        "outlinks_per_scheme": 100,
        "backlink_filter_threshold": 10000,
        "news_checkpoint": None,
        "absolute_bias_checkpoint": None,
        "reliability_checkpoint": None,
        "news_threshold": 0.5,
        "absolute_bias_threshold": 0.5,
        "reliability_threshold": 0.5,
        "strict": False,
    },
}

NETWORKS = {
    "backlink": LinkKind.BACKLINK,
    "outlink": LinkKind.OUTLINK,
    "combined": LinkKind.BACKLINK | LinkKind.OUTLINK,
}

UNWEIGHTED = "none"

RESULT_COLUMNS = (
    "network", "scheme", "topn", "task", "seed", "model", "metric", "value",
)

FAILURE_COLUMNS = (
    "network", "scheme", "topn", "task", "seed", "model", "error", "message",
)

IMPORTANCE_COLUMNS = ("task", "seed", "model", "feature", "importance")

def _camel(key: str) -> str:
    head, *rest = key.split("_")
    return head + "".join(word.capitalize() for word in rest)

def _checkValue(section: str, key: str, value: Any, default: Any) -> Any:
    """Return value, converted to float where default is a float.

    YAML reads exponent notation without a decimal point (1e-4) as a string,
    so float settings also accept strings that parse as numbers.
    """
    where = f"{section}.{key}"

    if isinstance(default, bool):
        ok = isinstance(value, bool)
    elif isinstance(default, int):
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif isinstance(default, float):
        if isinstance(value, str):
            try:
                value = float(value)
            except ValueError:
                pass

        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
        if ok:
            value = float(value)
    elif isinstance(default, list):
        ok = isinstance(value, list) and not any(isinstance(v, (list, dict)) for v in value)
    elif default is None or isinstance(default, str):
        ok = value is None or isinstance(value, str)
    else:
        ok = False

    if not ok:
        errmsg = f"Invalid value for {where}: {value!r}"
        raise ValidationError(errmsg)

    return value

class ExperimentConfig:
    """A fully defaulted experiment configuration.

    The document is a mapping of sections, each a flat mapping of scalars
    or lists of scalars. Keys left out take their defaults from DEFAULTS.
    Derived objects (synthetic, training and pipeline configs) are built
    eagerly, so any invalid value is reported when the config is created.

    :raises ValidationError: for an unknown section or key, a value of the
        wrong type, or a value the derived configs reject
    """

    def __init__(self, document: Optional[Mapping[str, Any]] = None) -> None:
        values = copy.deepcopy(DEFAULTS)

        for section, entries in (document or {}).items():
            if section not in DEFAULTS:
                raise ValidationError(f"Unknown configuration section: {section}")

            if entries is None:
                continue
            elif not isinstance(entries, Mapping):
                raise ValidationError(f"Section {section} must be a mapping")

            for key, value in entries.items():
                if key not in DEFAULTS[section]:
                    raise ValidationError(f"Unknown configuration key: {section}.{key}")

                default = DEFAULTS[section][key]
                values[section][key] = _checkValue(section, key, value, default)

        self.values = values

        try:
            self.tasks = tuple(Task(t) for t in values["experiment"]["tasks"])
            self.networks = tuple(values["sweep"]["networks"])
            self.schemes = tuple(
                None if s == UNWEIGHTED else WeightScheme(s)
                for s in values["sweep"]["schemes"]
            )

            self.topnKind = LinkKind.parse(values["sweep"]["topn_kind"])
            self.families = tuple(Family(f) for f in values["flat"]["models"])
        except ValueError as err:
            raise ValidationError(f"Invalid configuration: {err}") from err

        unknown = [n for n in self.networks if n not in NETWORKS]
        if unknown:
            raise ValidationError(f"Unknown network(s): {', '.join(map(str, unknown))}")

        topn = values["sweep"]["topn"]
        if any(not isinstance(n, int) or isinstance(n, bool) or n < 1 for n in topn):
            raise ValidationError(f"sweep.topn must list positive integers: {topn}")

        if values["experiment"]["repeats"] < 1:
            raise ValidationError("experiment.repeats must be at least 1")

        data = values["data"]
        if data["nodes"] is not None and (data["edges"] is None or data["labels"] is None):
            raise ValidationError("data.nodes needs data.edges and data.labels as well")

        self.syntheticConfig(self.seed)
        self.trainConfig(self.seed)
        self.pipelineConfig()

    def __repr__(self) -> str:
        return f"{typename(self)}({self.values!r})"

    @classmethod
    def load(cls, path: PathLike) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as f:
                document = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as err:
            errmsg = f"Unable to read configuration {path}: {err}"
            raise ValidationError(errmsg) from err

        if document is not None and not isinstance(document, Mapping):
            raise ValidationError(f"{path} does not hold a mapping of sections")

        return cls(document)

    def replace(self, section: str, **changes: Any) -> "ExperimentConfig":
        document = copy.deepcopy(self.values)
        document.setdefault(section, {}).update(changes)
        return ExperimentConfig(document)

    def withSeed(self, seed: int) -> "ExperimentConfig":
        return self.replace("experiment", seed=seed)

    @property
    def name(self) -> str:
        return self.values["experiment"]["name"]

    @property
    def seed(self) -> int:
        return self.values["experiment"]["seed"]

    @property
    def seeds(self) -> List[int]:
        return [self.seed + r for r in range(self.values["experiment"]["repeats"])]

    @property
    def topn(self) -> List[Optional[int]]:
        """Truncation sizes to sweep; None stands for the untruncated graph."""
        return list(self.values["sweep"]["topn"]) or [None]

    @property
    def configHash(self) -> str:
        return stableHash(self.values)

    def asDict(self) -> Dict[str, Dict[str, Any]]:
        return copy.deepcopy(self.values)

    def syntheticConfig(self, seed: int) -> SyntheticConfig:
        fields = {_camel(k): v for k, v in self.values["synthetic"].items()}
        return SyntheticConfig(seed=seed, **fields)

    def trainConfig(self, seed: int) -> TrainConfig:
        fields = {_camel(k): v for k, v in self.values["train"].items()}
        return TrainConfig(seed=seed, **fields)

    def pipelineConfig(self) -> PipelineConfig:
        fields = {_camel(k): v for k, v in self.values["discovery"].items()}

        try:
            criteria = LinkSchemeCriteria(fields.pop("alphaMin"), fields.pop("betaMin"))
        except ValueError as err:
            raise ValidationError(f"Invalid link scheme criteria: {err}") from err

        return PipelineConfig(criteria=criteria, **fields)

class ExperimentResult(NamedTuple):
    rows: pd.DataFrame
    failures: pd.DataFrame
    record: Dict[str, Any]
    importances: pd.DataFrame

def _versions() -> Dict[str, str]:
    versions = {"newsgraph": __version__}
    for package in ("numpy", "scipy", "networkx", "pandas"):
        try:
            versions[package] = importlib.metadata.version(package)
        except importlib.metadata.PackageNotFoundError:
            versions[package] = "unknown"

    return versions

def _loadData(
    config: ExperimentConfig,
    seed: int,
) -> Tuple[AttributedWebgraph, Dict[str, BinaryLabels]]:
    data = config.values["data"]
    if data["nodes"] is None:
        synthetic = generateSyntheticWebgraph(config.syntheticConfig(seed))
        return synthetic.graph, synthetic.labels

    graph = readGraph(data["nodes"], data["edges"])
    labels = mergeAndBinarize(readLabels(data["labels"]))
    return graph, labels

class _Collector:
    def __init__(self) -> None:
        self.rows: List[Tuple[Any, ...]] = []
        self.failures: List[Tuple[Any, ...]] = []
        self.importances: List[Tuple[Any, ...]] = []
        self.completed = 0

    def metrics(self, cell: Tuple[Any, ...], report: MetricsReport) -> None:
        for metric in ("accuracy", "f1"):
            self.rows.append(cell + (metric, getattr(report, metric)))

        self.completed += 1

    def failure(self, cell: Tuple[Any, ...], err: Exception) -> None:
        logger.warning("Experiment cell %s failed: %s", cell, err)
        self.failures.append(cell + (err.__class__.__name__, str(err)))

    def frames(self) -> Tuple[pd.DataFrame, pd.DataFrame, pd.DataFrame]:
        rows = pd.DataFrame(self.rows, columns=list(RESULT_COLUMNS))
        failures = pd.DataFrame(self.failures, columns=list(FAILURE_COLUMNS))
        for frame in (rows, failures):
            frame["topn"] = frame["topn"].astype("Int64")

        importances = pd.DataFrame(self.importances, columns=list(IMPORTANCE_COLUMNS))
        return rows, failures, importances

def _runGcnCells(
    config: ExperimentConfig,
    graph: AttributedWebgraph,
    labels: Mapping[str, BinaryLabels],
    task: Task,
    seed: int,
    split: SplitMasks,
    collector: _Collector,
) -> None:
    trainConfig = config.trainConfig(seed)

    for network in config.networks:
        networkGraph = graph.network(NETWORKS[network])

        for topn in config.topn:
            for scheme in config.schemes:
                schemeName = UNWEIGHTED if scheme is None else scheme.value
                cell = (network, schemeName, topn, task.value, seed, "gcn")

                try:
                    cellGraph = networkGraph
                    if topn is not None:
                        cellGraph = truncateTopN(networkGraph, topn, config.topnKind, labels)

                    result = trainGcn(cellGraph, labels, task, scheme, trainConfig, split)
                except (NewsgraphException, ValueError) as err:
                    collector.failure(cell, err)
                    continue

                logger.info("Cell %s: F1 %.4f", cell, result.metrics.f1)
                collector.metrics(cell, result.metrics)

def _runFlatCells(
    config: ExperimentConfig,
    graph: AttributedWebgraph,
    labels: Mapping[str, BinaryLabels],
    task: Task,
    seed: int,
    split: SplitMasks,
    collector: _Collector,
) -> None:
    if not config.families:
        return

    X, _, names = prepareFeatures(graph)
    y = taskVector(graph, labels, task)
    train = split.train | split.val

    for family in config.families:
        cell = ("", "", None, task.value, seed, family.value)

        try:
            spec = FlatModelSpec.default(family, seed=seed)
            model = fitFlatModel(spec, X[train], y[train])
            predicted = predictFlat(model, X[split.test]).labels.astype(np.int64)
            report = classificationMetrics(
                predicted, y[split.test],
                positive=1,
                task=task.value,
                modelId=family.value,
                seed=seed,
            )
        except (NewsgraphException, ValueError) as err:
            collector.failure(cell, err)
            continue

        collector.metrics(cell, report)

        if family in TREE_FAMILIES:
            try:
                importances = featureImportances(model)
            except ValueError as err:
                logger.warning("No importances for %s: %s", family, err)
                continue

            for name, value in zip(names, importances):
                collector.importances.append(
                    (task.value, seed, family.value, name, float(value))
                )

def _writeOutputs(
    outDir: PathLike,
    rows: pd.DataFrame,
    failures: pd.DataFrame,
    importances: pd.DataFrame,
    record: Mapping[str, Any],
) -> None:
    os.makedirs(outDir, exist_ok=True)

    tables = {
        "results.csv": rows,
        "failures.csv": failures,
        "importances.csv": importances,
    }

    for name, frame in tables.items():
        path = os.path.join(outDir, name)
        frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")

    with open(os.path.join(outDir, "run.json"), "w", encoding="utf-8") as f:
        f.write(canonicalJson(record))
        f.write("\n")

def runExperiment(
    config: ExperimentConfig,
    outDir: Optional[PathLike] = None,
) -> ExperimentResult:
    """Run every grid cell of an experiment and collect tidy result tables.

    For each seed the data is loaded (or generated), and for each task one
    train/val/test split is drawn and shared by every cell, so that cells
    differ only in network, top-N truncation and weighting scheme. Flat
    models are trained on the train and validation nodes of the same
    split. A cell that fails is recorded in the failures table and the
    run moves on. If outDir is given, results.csv, failures.csv,
    importances.csv and run.json are written there, even if the run is
    interrupted by an unexpected error.
    """
    collector = _Collector()
    record: Dict[str, Any] = {
        "name": config.name,
        "seeds": config.seeds,
        "config": config.asDict(),
        "config_hash": config.configHash,
        "versions": _versions(),
    }

    logger.info("Experiment %s (config %s)", config.name, config.configHash[:12])

    try:
        for seed in config.seeds:
            try:
                graph, labels = _loadData(config, seed)
            except NewsgraphException as err:
                collector.failure(("", "", None, "", seed, "data"), err)
                continue

            for task in config.tasks:
                labeled = np.flatnonzero(taskVector(graph, labels, task) >= 0)

                try:
                    split = makeSplit(labeled, graph.nodeCount, seed=seed)
                except ValidationError as err:
                    collector.failure(("", "", None, task.value, seed, "split"), err)
                    continue

                _runGcnCells(config, graph, labels, task, seed, split, collector)
                _runFlatCells(config, graph, labels, task, seed, split, collector)
    finally:
        rows, failures, importances = collector.frames()
        record["cells"] = collector.completed + len(failures)
        record["failures"] = len(failures)

        if outDir is not None:
            _writeOutputs(outDir, rows, failures, importances, record)

    return ExperimentResult(rows, failures, record, importances)
