__all__ = [
    "AlphaResult", "AnnotationSet", "MetricsReport", "classificationMetrics",
    "krippendorffAlpha",
]

import dataclasses

import krippendorff
import numpy as np

from newsgraph.exception import *
from newsgraph.typing import *
from newsgraph.utils import typename

@dataclasses.dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    f1: float
    precision: float
    recall: float
    truePositives: int
    falsePositives: int
    falseNegatives: int
    trueNegatives: int
    f1Undefined: bool = False
    task: str = ""
    modelId: str = ""
    seed: Optional[int] = None

    @property
    def total(self) -> int:
        return (
            self.truePositives + self.falsePositives
            + self.falseNegatives + self.trueNegatives
        )

    def asDict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

def classificationMetrics(
    predicted: Any,
    actual: Any,
    positive: Any = 1,
    task: str = "",
    modelId: str = "",
    seed: Optional[int] = None,
) -> MetricsReport:
    """Accuracy, precision, recall and binary F1 for the given positive class.

    Any value other than positive counts as negative. When there is no
    positive in either vector, F1 is reported as 0 with f1Undefined set;
    precision and recall with a zero denominator are likewise 0.

    :raises ValueError: if the vectors are empty or differ in length
    """
    predicted = np.asarray(predicted)
    actual = np.asarray(actual)

    if predicted.shape != actual.shape or predicted.ndim != 1:
        errmsg = (
            f"Predicted and actual labels differ in shape:"
            f" {predicted.shape} vs {actual.shape}"
        )

        raise ValueError(errmsg)

    if len(actual) == 0:
        raise ValueError("Cannot score an empty prediction")

    p = predicted == positive
    a = actual == positive

    tp = int(np.sum(p & a))
    fp = int(np.sum(p & ~a))
    fn = int(np.sum(~p & a))
    tn = int(np.sum(~p & ~a))

    accuracy = (tp + tn) / len(actual)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0

    denominator = 2 * tp + fp + fn
    f1 = 2 * tp / denominator if denominator else 0.0

    return MetricsReport(
        accuracy, f1, precision, recall, tp, fp, fn, tn,
        f1Undefined=(denominator == 0),
        task=task,
        modelId=modelId,
        seed=seed,
    )

@final
class AnnotationSet:
    """Nominal labels from several annotators on a shared set of items.

    Rows are items and columns are annotators; None marks a missing label.
    Labels may be any hashable values and are compared only for equality.

    :raises ValidationError:
        if there are fewer than 2 annotators or the rows differ in length
    """

    def __init__(self,
        rows: Sequence[Sequence[Optional[Hashable]]],
        annotators: Optional[Sequence[str]] = None,
    ) -> None:
        rows = [list(row) for row in rows]
        width = len(rows[0]) if rows else len(annotators or ())

        if any(len(row) != width for row in rows):
            raise ValidationError("Every item needs one entry per annotator")

        if width < 2:
            raise ValidationError(f"Agreement needs at least 2 annotators, got {width}")

        if annotators is None:
            annotators = [f"annotator{j}" for j in range(width)]
        elif len(annotators) != width:
            errmsg = f"{len(annotators)} annotator names for {width} columns"
            raise ValidationError(errmsg)

        self.rows = rows
        self.annotators = tuple(annotators)

    def __repr__(self) -> str:
        return f"<{typename(self)}: {self.itemCount} items, {len(self.annotators)} annotators>"

    @classmethod
    def fromRecords(cls,
        records: Iterable[Tuple[Hashable, str, Hashable]],
    ) -> "AnnotationSet":
        """Collect (item, annotator, label) triples into a matrix.

        Items and annotators are ordered by first appearance.
        """
        items: Dict[Hashable, Dict[str, Hashable]] = {}
        annotators: Dict[str, None] = {}
        for item, annotator, label in records:
            items.setdefault(item, {})[annotator] = label
            annotators.setdefault(annotator, None)

        names = list(annotators)
        rows = [[labels.get(name) for name in names] for labels in items.values()]
        return cls(rows, names)

    @property
    def itemCount(self) -> int:
        return len(self.rows)

    def codes(self) -> FloatArray:
        """Annotators x items matrix of integer label codes, NaN if missing.

        Codes follow the sorted order of the labels' string forms.
        """
        values = {v for row in self.rows for v in row if v is not None}
        code = {v: i for i, v in enumerate(sorted(values, key=str))}

        matrix = np.full((len(self.annotators), self.itemCount), np.nan)
        for i, row in enumerate(self.rows):
            for j, value in enumerate(row):
                if value is not None:
                    matrix[j, i] = code[value]

        return matrix

class AlphaResult(NamedTuple):
    alpha: Optional[float]
    pairable: int
    undefined: bool

def krippendorffAlpha(annotations: AnnotationSet) -> AlphaResult:
    """Nominal Krippendorff's alpha over every pairable value.

    A value is pairable if its item has at least two labels. The result is
    undefined (alpha None) when fewer than two values are pairable or all
    pairable values are equal, since the expected disagreement is then 0.
    """
    data = annotations.codes()
    observed = ~np.isnan(data)
    perItem = observed.sum(axis=0)
    pairableItems = perItem >= 2
    pairable = int(perItem[pairableItems].sum())

    values = data[:, pairableItems][observed[:, pairableItems]]
    if pairable < 2 or len(np.unique(values)) < 2:
        return AlphaResult(None, pairable, True)

    alpha = krippendorff.alpha(
        reliability_data=data[:, pairableItems],
        level_of_measurement="nominal",
    )

    return AlphaResult(float(alpha), pairable, False)
