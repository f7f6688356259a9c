__all__ = ["Correlation", "attributeLabelCorrelation"]

import numpy as np
import scipy.stats

from newsgraph.ingest.labels import BinaryLabels, Reliability
from newsgraph.typing import *
from newsgraph.webgraph import AttributedWebgraph

class Correlation(NamedTuple):
    r: Optional[float]
    pValue: Optional[float]
    n: int
    undefined: bool = False

def attributeLabelCorrelation(
    graph: AttributedWebgraph,
    labels: Mapping[str, BinaryLabels],
    attribute: str,
) -> Correlation:
    """Pearson correlation between one attribute and reliability.

    Reliable nodes score 1 and unreliable nodes 0. Nodes without a known
    reliability, or with a missing attribute value, are left out. The result
    is flagged undefined when fewer than two nodes remain or either series
    is constant.

    :raises ValueError: if the attribute is not in the manifest
    """
    column = graph.manifest.index(attribute)

    xs, ys = [], []
    for domain, label in labels.items():
        i = graph.nodeIndex.get(domain)
        if i is None or label.reliability is Reliability.UNKNOWN:
            continue

        value = graph.attributes[i, column]
        if np.isnan(value):
            continue

        xs.append(value)
        ys.append(1.0 if label.reliability is Reliability.RELIABLE else 0.0)

    x = np.array(xs)
    y = np.array(ys)

    if len(x) < 2 or np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        return Correlation(None, None, len(x), undefined=True)

    result = scipy.stats.pearsonr(x, y)
    return Correlation(float(result[0]), float(result[1]), len(x))
