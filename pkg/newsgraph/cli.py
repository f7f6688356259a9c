"""Command-line entry point: ``python -m newsgraph <command>``.

Every command writes UTF-8, comma-delimited tables with a header row into
--out-dir. The exit status is 0 on success, 2 when input data or arguments
fail validation, and 1 for any other failure.
"""

__all__ = ["buildParser", "main"]

import argparse
import logging
import os

import numpy as np
import pandas as pd

from newsgraph import __version__
from newsgraph.baselines.cv import kfoldCv
from newsgraph.baselines.models import (
    Family, FlatModelSpec, fitFlatModel, predictFlat, saveFittedModel,
)
from newsgraph.discovery.client import FixtureLinkClient, collectMetrics
from newsgraph.discovery.ecosystem import EcosystemConfig, generatePlantedEcosystem
from newsgraph.discovery.evaluate import partialF1, sweepOutlinks
from newsgraph.discovery.news import trainNewsClassifier
from newsgraph.discovery.pipeline import (
    loadDiscoveryModels, pullBacklinks, runDiscovery, trainDiscoveryModels,
)
from newsgraph.evaluation.experiment import (
    NETWORKS, UNWEIGHTED, ExperimentConfig, runExperiment,
)
from newsgraph.evaluation.metrics import (
    AnnotationSet, classificationMetrics, krippendorffAlpha,
)
from newsgraph.exception import *
from newsgraph.features import imputeMissing
from newsgraph.ingest.fetch import FixtureFetchClient, probeDomains
from newsgraph.ingest.labels import (
    BinaryLabels, LabelRecord, Reliability, Source, Task, mergeAndBinarize,
    readLabels, writeBinaryLabels, writeLabelRecords,
)
from newsgraph.ingest.parked import ParkedPatternSet
from newsgraph.ingest.survival import (
    DEFAULT_THRESHOLD, readProbeResults, survivalReport,
)
from newsgraph.ingest.synthetic import generateSyntheticWebgraph
from newsgraph.nn.checkpoint import saveGcnModel
from newsgraph.nn.train import makeSplit, taskVector, trainGcn
from newsgraph.typing import *
from newsgraph.utils import normalizeDomain
from newsgraph.webgraph import AttributeManifest, AttributedWebgraph, LinkKind
from newsgraph.webgraph.io import readGraph, readNodes, writeEdges, writeNodes
from newsgraph.webgraph.summary import graphSummary
from newsgraph.webgraph.topn import truncateTopN
from newsgraph.webgraph.weights import WeightScheme, weightEdges

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"

def configureLogging(level: str, logFile: Optional[str] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if logFile is not None:
        handlers.append(logging.FileHandler(logFile, encoding="utf-8"))

    logging.basicConfig(
        level=level.upper(),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )

def writeTable(frame: pd.DataFrame, args: argparse.Namespace, name: str) -> str:
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, name)
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    logger.info("Wrote %d row(s) to %s", len(frame), path)
    return path

def outPath(args: argparse.Namespace, name: str) -> str:
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, name)

def readDomainList(path: str) -> List[str]:
    """One domain per line; blank lines and lines starting with # are skipped."""
    try:
        with open(path, encoding="utf-8") as f:
            lines = [line.strip() for line in f]
    except OSError as err:
        raise ValidationError(f"Unable to read {path}: {err}") from err

    return [line for line in lines if line and not line.startswith("#")]

def readLabelFiles(paths: Sequence[str]) -> List[LabelRecord]:
    records: List[LabelRecord] = []
    for path in paths:
        records.extend(readLabels(path))

    return records

def loadLabels(paths: Sequence[str]) -> Dict[str, BinaryLabels]:
    return mergeAndBinarize(readLabelFiles(paths))

def oracleFromLabels(paths: Sequence[str]) -> Dict[str, Reliability]:
    return {
        domain: label.reliability
        for domain, label in loadLabels(paths).items()
        if label.reliability is not Reliability.UNKNOWN
    }

def parseScheme(text: str) -> Optional[WeightScheme]:
    return None if text == UNWEIGHTED else WeightScheme(text)

def parseCounts(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as err:
        raise ValueError(f"Expected comma-separated integers: {text!r}") from err

def labeledFeatures(
    graph: AttributedWebgraph,
    labels: Mapping[str, BinaryLabels],
    task: Task,
) -> Tuple[FloatArray, IntArray, IntArray, AttributeManifest]:
    """Imputed raw attributes and targets of the nodes labeled for task."""
    y = taskVector(graph, labels, task)
    labeled = np.flatnonzero(y >= 0)
    imputed = imputeMissing(graph.attributes, graph.manifest.names)
    return imputed.matrix, y, labeled, AttributeManifest(imputed.names)

# ingest

def runIngest(args: argparse.Namespace, config: ExperimentConfig) -> None:
    if args.labels:
        labels = loadLabels(args.labels)
        writeBinaryLabels(labels, outPath(args, "labels_binary.csv"))
        logger.info("Merged labels for %d domains", len(labels))

    if args.nodes:
        if not args.edges:
            raise ValidationError("--nodes needs --edges")

        graph = readGraph(args.nodes, args.edges)
        writeNodes(graph, outPath(args, "nodes.csv"))
        writeEdges(graph, outPath(args, "edges.csv"))
        logger.info("Validated %s", graph)

# audit

def runAudit(args: argparse.Namespace, config: ExperimentConfig) -> None:
    records = readLabelFiles(args.labels)

    if args.probes:
        probes = readProbeResults(args.probes, records)
    elif args.fetch:
        sources: Dict[str, List[Source]] = {}
        for record in records:
            sources.setdefault(normalizeDomain(record.domain), []).append(record.source)

        totals: Dict[str, Optional[int]] = {}
        if args.nodes:
            nodes, _ = readNodes(args.nodes)
            totals = {n.domain: n.providerBacklinkTotal for n in nodes}

        patterns = ParkedPatternSet.load(args.patterns) if args.patterns else None
        with FixtureFetchClient.load(args.fetch) as client:
            probes = probeDomains(client, sources, totals, patterns)
    else:
        raise ValidationError("audit needs --probes or --fetch")

    report = survivalReport(probes, args.threshold)
    writeTable(report.toFrame(), args, "survival.csv")

# graph

def runGraphSummarize(args: argparse.Namespace, config: ExperimentConfig) -> None:
    graph = readGraph(args.nodes, args.edges)
    networks = list(NETWORKS) if args.network == "all" else [args.network]

    rows = []
    for network in networks:
        summary = graphSummary(graph.network(NETWORKS[network]))
        rows.append({"network": network, **summary._asdict()})

    writeTable(pd.DataFrame(rows), args, "summary.csv")

def runGraphWeight(args: argparse.Namespace, config: ExperimentConfig) -> None:
    graph = readGraph(args.nodes, args.edges)
    scheme = WeightScheme(args.scheme)
    weights = weightEdges(graph, scheme)

    frame = pd.DataFrame({
        "source": [graph.domains[i] for i in graph.sources],
        "target": [graph.domains[i] for i in graph.targets],
        "links": graph.links,
        "weight": weights,
    })

    writeTable(frame, args, f"weights_{scheme.value}.csv")

def runGraphSynthesize(args: argparse.Namespace, config: ExperimentConfig) -> None:
    synthetic = generateSyntheticWebgraph(config.syntheticConfig(config.seed))
    writeNodes(synthetic.graph, outPath(args, "nodes.csv"))
    writeEdges(synthetic.graph, outPath(args, "edges.csv"))
    writeLabelRecords(synthetic.labels, outPath(args, "labels.csv"))
    logger.info("Synthesized %s", synthetic.graph)

# train

def runTrainGcn(args: argparse.Namespace, config: ExperimentConfig) -> None:
    graph = readGraph(args.nodes, args.edges).network(NETWORKS[args.network])
    labels = loadLabels(args.labels)
    task = Task(args.task)

    if args.topn is not None:
        graph = truncateTopN(graph, args.topn, LinkKind.BACKLINK, labels)

    trainConfig = config.trainConfig(config.seed)
    result = trainGcn(graph, labels, task, parseScheme(args.scheme), trainConfig)

    writeTable(pd.DataFrame([result.metrics.asDict()]), args, "metrics.csv")
    writeTable(pd.DataFrame(result.history), args, "history.csv")

    saveGcnModel(
        result.model,
        outPath(args, f"gcn_{task.value}.npz"),
        config=config.values["train"],
        seed=config.seed,
        task=task.value,
        scheme=args.scheme,
        network=args.network,
        feature_names=list(result.featureNames),
        best_epoch=result.bestEpoch,
    )

def runTrainFlat(args: argparse.Namespace, config: ExperimentConfig) -> None:
    graph = readGraph(args.nodes, args.edges)
    labels = loadLabels(args.labels)
    task = Task(args.task)
    family = Family(args.family)

    X, y, labeled, manifest = labeledFeatures(graph, labels, task)
    split = makeSplit(labeled, graph.nodeCount, seed=config.seed)
    train = split.train | split.val

    spec = FlatModelSpec.default(family, seed=config.seed)
    model = fitFlatModel(spec, X[train], y[train], manifest)
    predicted = predictFlat(model, X[split.test]).labels.astype(np.int64)

    metrics = classificationMetrics(
        predicted, y[split.test],
        positive=1,
        task=task.value,
        modelId=family.value,
        seed=config.seed,
    )

    writeTable(pd.DataFrame([metrics.asDict()]), args, "metrics.csv")
    saveFittedModel(model, outPath(args, f"{family.value}_{task.value}.npz"))

def runTrainNews(args: argparse.Namespace, config: ExperimentConfig) -> None:
    nodes, manifest = readNodes(args.nodes)
    client = FixtureLinkClient(nodes, [], manifest)

    positives = collectMetrics(client, readDomainList(args.news))
    negatives = collectMetrics(client, readDomainList(args.non_news))

    news = trainNewsClassifier(
        positives.attributes,
        negatives.attributes,
        ratio=args.ratio,
        seed=config.seed,
        names=manifest.names,
    )

    writeTable(pd.DataFrame([news.metrics.asDict()]), args, "metrics.csv")
    saveFittedModel(news.model, outPath(args, "news.npz"))

# cv

def runCv(args: argparse.Namespace, config: ExperimentConfig) -> None:
    graph = readGraph(args.nodes, args.edges)
    labels = loadLabels(args.labels)
    task = Task(args.task)

    X, y, labeled, manifest = labeledFeatures(graph, labels, task)
    spec = FlatModelSpec.default(Family(args.family), seed=config.seed)
    result = kfoldCv(
        spec, X[labeled], y[labeled],
        k=args.k,
        testFraction=args.test_fraction,
        seed=config.seed,
        mode=args.mode,
        manifest=manifest,
        task=task.value,
    )

    writeTable(
        pd.DataFrame([{"fold": f.fold, **f.metrics.asDict()} for f in result.folds]),
        args,
        "cv.csv",
    )

    logger.info(
        "%s on %s: accuracy %.4f +/- %.4f, F1 %.4f +/- %.4f",
        spec.family, task, result.meanAccuracy, result.stdAccuracy,
        result.meanF1, result.stdF1,
    )

# sweep

def runSweepGrid(args: argparse.Namespace, config: ExperimentConfig) -> None:
    result = runExperiment(config, args.out_dir)
    logger.info(
        "Experiment finished: %d result row(s), %d failure(s)",
        len(result.rows), len(result.failures),
    )

def runSweepOutlinks(args: argparse.Namespace, config: ExperimentConfig) -> None:
    client = FixtureLinkClient.load(args.nodes, args.edges)
    labels = loadLabels(args.labels)
    oracle = oracleFromLabels(args.oracle)

    pull = pullBacklinks(labels, client, args.backlinks)
    frame = sweepOutlinks(
        pull.graph, labels, client, oracle,
        parseCounts(args.outlinks),
        parseCounts(args.beta_min),
        args.alpha_min,
    )

    writeTable(frame, args, "outlink_sweep.csv")

# discover

def runDiscover(args: argparse.Namespace, config: ExperimentConfig) -> None:
    pipelineConfig = config.pipelineConfig()
    oracle: Optional[Mapping[str, Reliability]] = None

    if args.planted:
        ecosystem = generatePlantedEcosystem(EcosystemConfig(seed=config.seed))
        client, labels, oracle = ecosystem.client, ecosystem.labels, ecosystem.oracle
        models = trainDiscoveryModels(
            client, labels,
            ecosystem.newsDomains, ecosystem.nonNewsDomains,
            seed=config.seed,
        )
    else:
        if not (args.nodes and args.edges and args.labels):
            raise ValidationError("discover needs --nodes, --edges and --labels, or --planted")

        client = FixtureLinkClient.load(args.nodes, args.edges)
        labels = loadLabels(args.labels)
        if args.oracle:
            oracle = oracleFromLabels(args.oracle)

        if args.news_domains and args.non_news_domains:
            models = trainDiscoveryModels(
                client, labels,
                readDomainList(args.news_domains),
                readDomainList(args.non_news_domains),
                seed=config.seed,
            )
        else:
            models = loadDiscoveryModels(pipelineConfig)

    discovery = runDiscovery(labels, client, pipelineConfig, models)

    writeTable(discovery.candidates.toFrame(), args, "candidates.csv")
    writeTable(discovery.report.toFrame(), args, "stages.csv")
    writeTable(discovery.report.summaryRow(), args, "discovery_summary.csv")

    if oracle is not None:
        score = partialF1(discovery.candidates.discovered, oracle)
        writeTable(pd.DataFrame([score._asdict()]), args, "discovery_evaluation.csv")
        logger.info(
            "Partial precision %.4f, recall %.4f, F1 %.4f",
            score.precision, score.recall, score.f1,
        )

# metrics

def runMetricsClassify(args: argparse.Namespace, config: ExperimentConfig) -> None:
    frame = pd.read_csv(args.predictions, encoding="utf-8")
    missing = [c for c in ("predicted", "actual") if c not in frame.columns]
    if missing:
        raise ValidationError(f"{args.predictions} is missing column(s): {', '.join(missing)}")

    report = classificationMetrics(
        frame["predicted"].to_numpy(),
        frame["actual"].to_numpy(),
        positive=args.positive,
        task=args.task,
        modelId=args.model,
        seed=config.seed,
    )

    writeTable(pd.DataFrame([report.asDict()]), args, "metrics.csv")

def runMetricsAlpha(args: argparse.Namespace, config: ExperimentConfig) -> None:
    frame = pd.read_csv(args.annotations, dtype=str, encoding="utf-8", keep_default_na=False)
    missing = [c for c in ("item", "annotator", "label") if c not in frame.columns]
    if missing:
        raise ValidationError(f"{args.annotations} is missing column(s): {', '.join(missing)}")

    annotations = AnnotationSet.fromRecords(
        (item, annotator, label)
        for item, annotator, label in zip(frame["item"], frame["annotator"], frame["label"])
        if label != ""
    )

    result = krippendorffAlpha(annotations)
    writeTable(pd.DataFrame([result._asdict()]), args, "alpha.csv")

def buildParser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="newsgraph",
        description="Detect and discover unreliable news domains from webgraphs",
    )

    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, default=None,
        help="Override experiment.seed from the configuration")
    parser.add_argument("--config", default=None, help="YAML configuration file")
    parser.add_argument("--out-dir", default=".", help="Directory for output tables")
    parser.add_argument("--log-level", default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-file", default=None, help="Also write the log here")

    commands = parser.add_subparsers(dest="command", required=True)

    def graphInputs(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--nodes", required=True)
        sub.add_argument("--edges", required=True)

    def labeledInputs(sub: argparse.ArgumentParser) -> None:
        graphInputs(sub)
        sub.add_argument("--labels", required=True, nargs="+")
        sub.add_argument("--task", default=Task.RELIABILITY.value,
            choices=[t.value for t in Task])

    sub = commands.add_parser("ingest", help="Validate and merge data files")
    sub.add_argument("--labels", nargs="*", default=[])
    sub.add_argument("--nodes")
    sub.add_argument("--edges")
    sub.set_defaults(func=runIngest)

    sub = commands.add_parser("audit", help="Tabulate blocklist survival")
    sub.add_argument("--labels", required=True, nargs="+")
    sub.add_argument("--probes", help="Recorded probe results")
    sub.add_argument("--fetch", help="Recorded fetch responses (JSON lines)")
    sub.add_argument("--nodes", help="Provider totals for --fetch")
    sub.add_argument("--patterns", help="Parked-page pattern file")
    sub.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD)
    sub.set_defaults(func=runAudit)

    graph = commands.add_parser("graph", help="Summarize, weight or synthesize graphs")
    graphCommands = graph.add_subparsers(dest="graph_command", required=True)

    sub = graphCommands.add_parser("summarize")
    graphInputs(sub)
    sub.add_argument("--network", default="all", choices=[*NETWORKS, "all"])
    sub.set_defaults(func=runGraphSummarize)

    sub = graphCommands.add_parser("weight")
    graphInputs(sub)
    sub.add_argument("--scheme", required=True, choices=[s.value for s in WeightScheme])
    sub.set_defaults(func=runGraphWeight)

    sub = graphCommands.add_parser("synthesize")
    sub.set_defaults(func=runGraphSynthesize)

    train = commands.add_parser("train", help="Train a GCN or a flat model")
    trainCommands = train.add_subparsers(dest="train_command", required=True)

    sub = trainCommands.add_parser("gcn")
    labeledInputs(sub)
    sub.add_argument("--scheme", default=WeightScheme.LINKS.value,
        choices=[UNWEIGHTED, *(s.value for s in WeightScheme)])
    sub.add_argument("--network", default="combined", choices=list(NETWORKS))
    sub.add_argument("--topn", type=int, default=None)
    sub.set_defaults(func=runTrainGcn)

    sub = trainCommands.add_parser("flat")
    labeledInputs(sub)
    sub.add_argument("--family", default=Family.GBDT.value, choices=[f.value for f in Family])
    sub.set_defaults(func=runTrainFlat)

    sub = trainCommands.add_parser("news")
    sub.add_argument("--nodes", required=True)
    sub.add_argument("--news", required=True, help="File listing news domains")
    sub.add_argument("--non-news", required=True, help="File listing non-news domains")
    sub.add_argument("--ratio", type=float, default=1.0)
    sub.set_defaults(func=runTrainNews)

    sub = commands.add_parser("cv", help="Cross-validate a flat model")
    labeledInputs(sub)
    sub.add_argument("--family", default=Family.GBDT.value, choices=[f.value for f in Family])
    sub.add_argument("--k", type=int, default=5)
    sub.add_argument("--test-fraction", type=float, default=0.2)
    sub.add_argument("--mode", default="repeated", choices=["repeated", "kfold"])
    sub.set_defaults(func=runCv)

    sweep = commands.add_parser("sweep", help="Run experiment grids")
    sweepCommands = sweep.add_subparsers(dest="sweep_command", required=True)

    sub = sweepCommands.add_parser("grid", help="Network x scheme x top-N grid")
    sub.set_defaults(func=runSweepGrid)

    sub = sweepCommands.add_parser("outlinks", help="Partial F1 against outlinks per scheme")
    graphInputs(sub)
    sub.add_argument("--labels", required=True, nargs="+")
    sub.add_argument("--oracle", required=True, nargs="+")
    sub.add_argument("--backlinks", type=int, default=100)
    sub.add_argument("--outlinks", default="10,25,50,100")
    sub.add_argument("--beta-min", default="0")
    sub.add_argument("--alpha-min", type=int, default=0)
    sub.set_defaults(func=runSweepOutlinks)

    sub = commands.add_parser("discover", help="Run the discovery pipeline")
    sub.add_argument("--nodes")
    sub.add_argument("--edges")
    sub.add_argument("--labels", nargs="+")
    sub.add_argument("--oracle", nargs="+")
    sub.add_argument("--news-domains", help="Train the filters; file of news domains")
    sub.add_argument("--non-news-domains", help="File of non-news domains")
    sub.add_argument("--planted", action="store_true",
        help="Run on a generated ecosystem instead of data files")
    sub.set_defaults(func=runDiscover)

    metrics = commands.add_parser("metrics", help="Score predictions or annotations")
    metricCommands = metrics.add_subparsers(dest="metrics_command", required=True)

    sub = metricCommands.add_parser("classify")
    sub.add_argument("--predictions", required=True,
        help="Table with predicted and actual columns")
    sub.add_argument("--positive", type=int, default=1)
    sub.add_argument("--task", default="")
    sub.add_argument("--model", default="")
    sub.set_defaults(func=runMetricsClassify)

    sub = metricCommands.add_parser("alpha")
    sub.add_argument("--annotations", required=True,
        help="Table with item, annotator and label columns")
    sub.set_defaults(func=runMetricsAlpha)

    return parser

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = buildParser()
    args = parser.parse_args(argv)
    configureLogging(args.log_level, args.log_file)

    try:
        if args.config is None:
            config = ExperimentConfig()
        else:
            config = ExperimentConfig.load(args.config)

        if args.seed is not None:
            config = config.withSeed(args.seed)

        args.func(args, config)
    except (ValidationError, ValueError) as err:
        logger.error("%s", err)
        return 2
    except Exception as err:
        logger.error("%s: %s", err.__class__.__name__, err)
        return 1

    return 0
