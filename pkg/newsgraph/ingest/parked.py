__all__ = [
    "HttpMetadata", "PAGE_FEATURE_NAMES", "ParkedEvaluation", "ParkedPage",
    "ParkedPattern", "ParkedPatternSet", "ParkedVerdict", "evaluateParkedMatcher",
    "matchParked", "pageFeatures", "readParkedCorpus", "trainParkedClassifier",
]

import enum
import json
import logging
import math
import os
import re

import numpy as np

from newsgraph.baselines.models import Family, FittedModel, FlatModelSpec, fitFlatModel
from newsgraph.evaluation.metrics import classificationMetrics
from newsgraph.exception import *
from newsgraph.typing import *
from newsgraph.webgraph import AttributeManifest

logger = logging.getLogger(__name__)

DEFAULT_PATTERNS = os.path.join(os.path.dirname(__file__), "patterns", "parked.txt")

class PatternKind(enum.Enum):
    SUBSTR = "substr"
    REGEX = "regex"
    URL = "url"

class HttpMetadata(NamedTuple):
    status: Optional[int] = None
    finalUrl: Optional[str] = None
    headers: Mapping[str, str] = {}

class ParkedVerdict(NamedTuple):
    parked: bool
    pattern: Optional[str] = None
    warning: Optional[str] = None

@final
class ParkedPattern:
    def __init__(self, name: str, kind: PatternKind, text: str) -> None:
        self.name = name
        self.kind = kind
        self.text = text.lower()

        if kind is PatternKind.REGEX:
            try:
                self.regex: Optional[re.Pattern] = re.compile(text, re.IGNORECASE)
            except re.error as err:
                errmsg = f"Invalid regular expression for pattern {name}: {err}"
                raise ValidationError(errmsg) from err
        else:
            self.regex = None

    def __repr__(self) -> str:
        return f"ParkedPattern({self.name!r}, {self.kind}, {self.text!r})"

    def matches(self, body: str, http: HttpMetadata) -> bool:
        if self.kind is PatternKind.URL:
            return http.finalUrl is not None and self.text in http.finalUrl.lower()
        elif self.regex is not None:
            return self.regex.search(body) is not None
        else:
            return self.text in body

@final
class ParkedPatternSet:
    """An ordered, versioned list of parked-page templates.

    The file format has one pattern per line, "NAME KIND PATTERN", where the
    pattern runs to the end of the line. Blank lines and lines starting with
    "#" are ignored, and a line "@version V" records the version.
    """

    def __init__(self, patterns: Sequence[ParkedPattern], version: str) -> None:
        self.patterns = tuple(patterns)
        self.version = version

    def __iter__(self) -> Iterator[ParkedPattern]:
        return iter(self.patterns)

    def __len__(self) -> int:
        return len(self.patterns)

    @classmethod
    def parse(cls, text: str) -> "ParkedPatternSet":
        version = "unversioned"
        patterns = []
        names: Set[str] = set()

        for number, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue

            if line.startswith("@version"):
                version = line[len("@version"):].strip()
                continue

            parts = line.split(None, 2)
            if len(parts) != 3:
                errmsg = f"Line {number}: expected NAME KIND PATTERN"
                raise ValidationError(errmsg)

            name, kind, pattern = parts
            try:
                patternKind = PatternKind(kind.lower())
            except ValueError as err:
                errmsg = f"Line {number}: unknown pattern kind {kind!r}"
                raise ValidationError(errmsg) from err

            if name in names:
                errmsg = f"Line {number}: duplicate pattern name {name!r}"
                raise ValidationError(errmsg)

            names.add(name)
            patterns.append(ParkedPattern(name, patternKind, pattern))

        return cls(patterns, version)

    @classmethod
    def load(cls, path: PathLike) -> "ParkedPatternSet":
        with open(path, encoding="utf-8") as f:
            return cls.parse(f.read())

    @classmethod
    def default(cls) -> "ParkedPatternSet":
        return cls.load(DEFAULT_PATTERNS)

_defaultPatterns: Optional[ParkedPatternSet] = None

def defaultPatterns() -> ParkedPatternSet:
    global _defaultPatterns
    if _defaultPatterns is None:
        _defaultPatterns = ParkedPatternSet.default()

    return _defaultPatterns

def decodeBody(html: Union[str, bytes]) -> Optional[str]:
    if isinstance(html, str):
        return html

    try:
        return html.decode("utf-8")
    except UnicodeDecodeError:
        return None

def matchParked(
    html: Union[str, bytes],
    http: HttpMetadata = HttpMetadata(),
    patterns: Optional[ParkedPatternSet] = None,
) -> ParkedVerdict:
    """Decide whether a page is a registrar parking or for-sale page.

    The page is parked if any pattern matches; the first match (in file
    order) is reported. A body that is not valid UTF-8 is reported as not
    parked, with a warning.
    """
    if patterns is None:
        patterns = defaultPatterns()

    body = decodeBody(html)
    if body is None:
        logger.warning("Undecodable page body (final URL %s)", http.finalUrl)
        return ParkedVerdict(False, warning="undecodable body")

    body = body.lower()
    for pattern in patterns:
        if pattern.matches(body, http):
            return ParkedVerdict(True, pattern.name)

    return ParkedVerdict(False)

PAGE_FEATURE_NAMES = (
    "log_length",
    "link_count",
    "script_count",
    "iframe_count",
    "paragraph_count",
    "log_word_count",
    "sale_terms",
    "domain_mentions",
    "title_length",
    "redirected",
    "status_ok",
)

_TAG = re.compile(r"<[^>]*>")
_TITLE = re.compile(r"<title[^>]*>(.*?)</title>", re.IGNORECASE | re.DOTALL)
_SALE = re.compile(r"\b(sale|buy|offer|purchase|auction|price)\b")

def pageFeatures(html: Union[str, bytes], http: HttpMetadata = HttpMetadata()) -> FloatArray:
    """Describe a page by structural counts, in PAGE_FEATURE_NAMES order."""
    body = (decodeBody(html) or "").lower()
    text = _TAG.sub(" ", body)
    title = _TITLE.search(body)

    return np.array([
        math.log1p(len(body)),
        body.count("<a "),
        body.count("<script"),
        body.count("<iframe"),
        body.count("<p"),
        math.log1p(len(text.split())),
        len(_SALE.findall(text)),
        text.count("domain"),
        len(title.group(1).strip()) if title else 0,
        float(http.finalUrl is not None),
        float(http.status == 200),
    ], dtype=np.float64)

class ParkedPage(NamedTuple):
    html: str
    http: HttpMetadata
    parked: bool

def readParkedCorpus(path: PathLike) -> List[ParkedPage]:
    """Read a JSON-lines corpus of {"html", "status", "final_url", "parked"}."""
    pages = []
    with open(path, encoding="utf-8") as f:
        for number, line in enumerate(f, 1):
            if not line.strip():
                continue

            try:
                obj = json.loads(line)
                pages.append(ParkedPage(
                    obj["html"],
                    HttpMetadata(obj.get("status"), obj.get("final_url")),
                    bool(obj["parked"]),
                ))
            except (KeyError, TypeError, ValueError) as err:
                errmsg = f"{path}, line {number}: {err}"
                raise ValidationError(errmsg) from err

    return pages

class ParkedEvaluation(NamedTuple):
    precision: float
    recall: float
    truePositives: int
    falsePositives: int
    falseNegatives: int
    trueNegatives: int

def evaluateParkedMatcher(
    pages: Sequence[ParkedPage],
    patterns: Optional[ParkedPatternSet] = None,
) -> ParkedEvaluation:
    predicted = [matchParked(p.html, p.http, patterns).parked for p in pages]
    report = classificationMetrics(
        predicted,
        [p.parked for p in pages],
        positive=True,
        task="parked",
        modelId="patterns",
    )

    return ParkedEvaluation(
        report.precision,
        report.recall,
        report.truePositives,
        report.falsePositives,
        report.falseNegatives,
        report.trueNegatives,
    )

def trainParkedClassifier(pages: Sequence[ParkedPage], seed: int = 0) -> FittedModel:
    """Fit the gradient-boosted tree baseline on page structure features.

    Returns a FittedModel whose manifest is PAGE_FEATURE_NAMES.
    """
    X = np.array([pageFeatures(p.html, p.http) for p in pages])
    y = np.array([int(p.parked) for p in pages])

    spec = FlatModelSpec.default(Family.GBDT, seed=seed)
    return fitFlatModel(spec, X, y, AttributeManifest(PAGE_FEATURE_NAMES))
