__all__ = [
    "AbsoluteBias", "BLOCKLIST_COLORS", "BinaryLabels", "Grade", "LabelRecord",
    "RelativeBias", "Reliability", "Source", "Task", "binarize", "parseGrade",
    "mergeAndBinarize", "readLabels", "taskTarget", "taskTargets",
    "writeBinaryLabels", "writeLabelRecords",
]

import datetime
import enum
import logging
import math

import pandas as pd

from newsgraph.exception import *
from newsgraph.typing import *
from newsgraph.utils import normalizeDomain

logger = logging.getLogger(__name__)

class Grade(enum.Enum):
    VERY_LOW = "very_low"
    LOW = "low"
    MIXED = "mixed"
    HIGH = "high"
    VERY_HIGH = "very_high"
    QUESTIONABLE = "questionable"
    NONE = "none"

class Source(enum.Enum):
    """Label providers, listed from highest to lowest priority."""

    MBFC = "mbfc"
    MBFC_Q = "mbfc_q"
    SNOPES = "snopes"
    BLOCKLIST = "blocklist"
    POLITICO = "politico"
    BUZZFEED = "buzzfeed"
    OTHER = "other"

    @property
    def priority(self) -> int:
        return list(Source).index(self)

class Reliability(enum.Enum):
    RELIABLE = "reliable"
    UNRELIABLE = "unreliable"
    UNKNOWN = "unknown"

class RelativeBias(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    DROPPED = "dropped"
    UNKNOWN = "unknown"

class AbsoluteBias(enum.Enum):
    CENTER = "center"
    EXTREME = "extreme"
    UNKNOWN = "unknown"

class Task(enum.Enum):
    RELIABILITY = "reliability"
    ABSOLUTE_BIAS = "abs_bias"
    RELATIVE_BIAS = "rel_bias"

    def __str__(self) -> str:
        return self.value

BLOCKLIST_COLORS = {
    "black": Grade.VERY_LOW,
    "red": Grade.LOW,
    "orange": Grade.MIXED,
    "yellow": Grade.MIXED,
}

UNRELIABLE_GRADES = frozenset((
    Grade.VERY_LOW, Grade.LOW, Grade.MIXED, Grade.QUESTIONABLE,
))

class LabelRecord(NamedTuple):
    domain: str
    grade: str
    biasScore: Optional[int]
    source: Source
    labelDate: datetime.date

class BinaryLabels(NamedTuple):
    reliability: Reliability
    relativeBias: RelativeBias
    absoluteBias: AbsoluteBias
    grade: Grade = Grade.NONE
    biasScore: Optional[int] = None
    source: Source = Source.OTHER

def parseGrade(text: str, source: Source) -> Grade:
    """Map a provider grade string onto the reliability scale.

    Blocklist color grades are only accepted from the blocklist source.

    :raises ValueError: if the grade is not recognized
    """
    key = text.strip().lower().replace(" ", "_").replace("-", "_")

    if source is Source.BLOCKLIST and key in BLOCKLIST_COLORS:
        return BLOCKLIST_COLORS[key]

    return Grade(key)

def binarize(
    grade: Grade,
    biasScore: Optional[int],
    source: Source = Source.OTHER,
) -> BinaryLabels:
    if grade in UNRELIABLE_GRADES:
        reliability = Reliability.UNRELIABLE
    elif grade is Grade.NONE:
        reliability = Reliability.UNKNOWN
    else:
        reliability = Reliability.RELIABLE

    if biasScore is None:
        relative = RelativeBias.UNKNOWN
        absolute = AbsoluteBias.UNKNOWN
    else:
        if biasScore == 0:
            relative = RelativeBias.DROPPED
        elif biasScore < 0:
            relative = RelativeBias.LEFT
        else:
            relative = RelativeBias.RIGHT

        if abs(biasScore) <= 1:
            absolute = AbsoluteBias.CENTER
        else:
            absolute = AbsoluteBias.EXTREME

    return BinaryLabels(reliability, relative, absolute, grade, biasScore, source)

def mergeAndBinarize(records: Iterable[LabelRecord]) -> Dict[str, BinaryLabels]:
    """Pick one record per domain and reduce it to binary task labels.

    The record with the latest label date wins; on a tie, the source with
    the higher priority wins. The result is independent of record order and
    is keyed by normalized domain, in sorted order.

    :raises UnmappableGradeError: naming the first record whose grade is
        not recognized
    :raises ValidationError: for a bias score outside [-2, 2], or more than
        one record for the same (domain, source) pair
    """
    winners: Dict[str, Tuple[LabelRecord, Grade]] = {}
    seen: Set[Tuple[str, Source]] = set()

    for record in records:
        domain = normalizeDomain(record.domain)

        if (domain, record.source) in seen:
            errmsg = f"More than one {record.source.value} label for {domain}"
            raise ValidationError(errmsg)

        seen.add((domain, record.source))

        try:
            grade = parseGrade(record.grade, record.source)
        except ValueError as err:
            errmsg = f"Unmappable grade {record.grade!r} in {record}"
            raise UnmappableGradeError(errmsg) from err

        if record.biasScore is not None and not -2 <= record.biasScore <= 2:
            errmsg = f"Bias score out of range [-2, 2] in {record}"
            raise ValidationError(errmsg)

        current = winners.get(domain)
        if current is None:
            winners[domain] = (record, grade)
        else:
            best = current[0]
            newer = (record.labelDate, -record.source.priority)
            if newer > (best.labelDate, -best.source.priority):
                winners[domain] = (record, grade)

    labels = {
        domain: binarize(grade, record.biasScore, record.source)
        for domain, (record, grade) in sorted(winners.items())
    }

    logger.info("Merged labels for %d domains", len(labels))
    return labels

def taskTarget(labels: BinaryLabels, task: Task) -> Optional[int]:
    """1 for unreliable, extreme, or right; 0 for the opposite; else None."""
    if task is Task.RELIABILITY:
        value = labels.reliability
        positive, negative = Reliability.UNRELIABLE, Reliability.RELIABLE
    elif task is Task.ABSOLUTE_BIAS:
        value = labels.absoluteBias
        positive, negative = AbsoluteBias.EXTREME, AbsoluteBias.CENTER
    elif task is Task.RELATIVE_BIAS:
        value = labels.relativeBias
        positive, negative = RelativeBias.RIGHT, RelativeBias.LEFT
    else:
        raise ValueError(f"Unsupported task: {task!r}")

    if value is positive:
        return 1
    elif value is negative:
        return 0
    else:
        return None

def taskTargets(labels: Mapping[str, BinaryLabels], task: Task) -> Dict[str, int]:
    targets = {}
    for domain, label in labels.items():
        target = taskTarget(label, task)
        if target is not None:
            targets[domain] = target

    return targets

def readLabels(path: PathLike) -> List[LabelRecord]:
    """Read a labels file: domain, reliability_grade, bias_score, source,
    label_date (ISO-8601)."""
    try:
        frame = pd.read_csv(
            path,
            dtype=str,
            encoding="utf-8",
            keep_default_na=False,
            na_values=[""],
        )
    except (pd.errors.ParserError, UnicodeDecodeError) as err:
        raise ValidationError(f"Unable to parse {path}: {err}") from err

    columns = ("domain", "reliability_grade", "bias_score", "source", "label_date")
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        errmsg = f"{path} is missing column(s): {', '.join(missing)}"
        raise ValidationError(errmsg)

    records = []
    for row, (domain, grade, bias, source, date) in enumerate(zip(
        *(frame[column] for column in columns)
    )):
        try:
            if isinstance(bias, float) and math.isnan(bias):
                biasScore = None
            else:
                biasScore = int(bias)

            record = LabelRecord(
                domain,
                "none" if isinstance(grade, float) else grade,
                biasScore,
                Source(source.strip().lower()),
                datetime.date.fromisoformat(date.strip()),
            )
        except (AttributeError, TypeError, ValueError) as err:
            errmsg = f"{path}, row {row}: {err}"
            raise ValidationError(errmsg) from err

        records.append(record)

    logger.info("Read %d label records from %s", len(records), path)
    return records

def writeBinaryLabels(labels: Mapping[str, BinaryLabels], path: PathLike) -> None:
    frame = pd.DataFrame({
        "domain": list(labels),
        "reliability": [l.reliability.value for l in labels.values()],
        "relative_bias": [l.relativeBias.value for l in labels.values()],
        "absolute_bias": [l.absoluteBias.value for l in labels.values()],
        "grade": [l.grade.value for l in labels.values()],
        "bias_score": pd.array(
            [l.biasScore for l in labels.values()],
            dtype="Int64",
        ),
        "source": [l.source.value for l in labels.values()],
    })

    frame.to_csv(path, index=False, lineterminator="\n")

def writeLabelRecords(
    labels: Mapping[str, BinaryLabels],
    path: PathLike,
    labelDate: datetime.date = datetime.date(2020, 1, 1),
) -> None:
    """Write labels back out in the format readLabels() accepts."""
    frame = pd.DataFrame({
        "domain": list(labels),
        "reliability_grade": [l.grade.value for l in labels.values()],
        "bias_score": pd.array(
            [l.biasScore for l in labels.values()],
            dtype="Int64",
        ),
        "source": [l.source.value for l in labels.values()],
        "label_date": labelDate.isoformat(),
    })

    frame.to_csv(path, index=False, lineterminator="\n")
