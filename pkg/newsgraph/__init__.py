__all__ = [
    "__version__",
    "AttributedWebgraph", "buildGraph",
    "trainGcn", "runDiscovery",
    "ExperimentConfig", "runExperiment",
]

__version__ = "0.1.0"

from newsgraph.webgraph import AttributedWebgraph, buildGraph
from newsgraph.nn.train import trainGcn
from newsgraph.discovery.pipeline import runDiscovery
from newsgraph.evaluation.experiment import ExperimentConfig, runExperiment
