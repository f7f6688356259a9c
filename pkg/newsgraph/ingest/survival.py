__all__ = [
    "BacklinkFilter", "ProbeResult", "SURVIVAL_COLUMNS", "SurvivalReport",
    "SurvivalRow", "filterByBacklinks", "readProbeResults", "survivalReport",
]

import logging

import pandas as pd

from newsgraph.exception import *
from newsgraph.ingest.labels import LabelRecord, Source
from newsgraph.typing import *
from newsgraph.utils import normalizeDomain
from newsgraph.webgraph.io import optionalCount, readTable, requireColumns

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 10000

SURVIVAL_COLUMNS = ("source", "urls", "not_404", "not_parked", "both", "over_10k")

class BacklinkFilter(NamedTuple):
    kept: List[str]
    dropped: List[str]
    unknown: List[str]

def filterByBacklinks(
    totals: Mapping[str, Optional[int]],
    threshold: int = DEFAULT_THRESHOLD,
) -> BacklinkFilter:
    """Keep domains whose provider backlink total is at least threshold.

    Domains whose total is unknown (None) are never kept, and are reported
    in a list of their own.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be nonnegative (got {threshold})")

    kept, dropped, unknown = [], [], []
    for domain in sorted(totals):
        total = totals[domain]
        if total is None:
            unknown.append(domain)
        elif total >= threshold:
            kept.append(domain)
        else:
            dropped.append(domain)

    if unknown:
        logger.warning(
            "%d domain(s) have no provider backlink total and were excluded",
            len(unknown),
        )

    return BacklinkFilter(kept, dropped, unknown)

class ProbeResult(NamedTuple):
    domain: str
    httpStatus: Optional[int]
    parked: Optional[bool]
    providerBacklinkTotal: Optional[int]
    source: Source

    @property
    def not404(self) -> bool:
        return self.httpStatus is not None and self.httpStatus != 404

    @property
    def notParked(self) -> bool:
        return self.parked is False

class SurvivalRow(NamedTuple):
    source: str
    urls: int
    not404: float
    notParked: float
    both: float
    over10k: float

@final
class SurvivalReport:
    """Per-source survival percentages, plus a row of counts over all domains.

    The total row counts each domain once, however many sources list it.
    """

    def __init__(self, rows: Sequence[SurvivalRow], total: SurvivalRow) -> None:
        self.rows = tuple(rows)
        self.total = total

    def toFrame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [tuple(row) for row in self.rows + (self.total,)],
            columns=list(SURVIVAL_COLUMNS),
        )

def _counts(probes: Sequence[ProbeResult], threshold: int) -> Tuple[int, ...]:
    return (
        len(probes),
        sum(p.not404 for p in probes),
        sum(p.notParked for p in probes),
        sum(p.not404 and p.notParked for p in probes),
        sum(p.providerBacklinkTotal is not None
            and p.providerBacklinkTotal >= threshold for p in probes),
    )

def survivalReport(
    probes: Iterable[ProbeResult],
    threshold: int = DEFAULT_THRESHOLD,
) -> SurvivalReport:
    """Tabulate how many listed domains are still alive, per source.

    A domain passes "not 404" if its probe returned a status other than 404,
    and "not parked" if it was probed and found not to be parked; unknown
    probe results pass neither.
    """
    probes = list(probes)

    rows = []
    for source in Source:
        selected = [p for p in probes if p.source is source]
        if not selected:
            continue

        urls, *passed = _counts(selected, threshold)
        rows.append(SurvivalRow(
            source.value, urls, *(100.0 * k / urls for k in passed)
        ))

    unique: Dict[str, ProbeResult] = {}
    for probe in probes:
        unique.setdefault(probe.domain, probe)

    total = SurvivalRow("total", *_counts(list(unique.values()), threshold))
    return SurvivalReport(rows, total)

def readProbeResults(
    path: PathLike,
    labels: Iterable[LabelRecord],
) -> List[ProbeResult]:
    """Read a probe-results file and join it to the sources listing each domain.

    A domain listed by several sources yields one ProbeResult per source.
    Domains that no label record lists are skipped with a warning.
    """
    frame = readTable(path, dtype={"domain": str})
    columns = ("domain", "http_status", "parked", "provider_backlink_total")
    requireColumns(frame, columns, path)

    sources: Dict[str, List[Source]] = {}
    for record in labels:
        listed = sources.setdefault(normalizeDomain(record.domain), [])
        if record.source not in listed:
            listed.append(record.source)

    results = []
    unlisted = 0
    for row, (domain, status, parked, total) in enumerate(zip(
        *(frame[column] for column in columns)
    )):
        domain = normalizeDomain(domain)
        parkedFlag = optionalCount(parked, "parked", row)
        if parkedFlag not in (None, 0, 1):
            errmsg = f"{path}, row {row}: parked must be 0, 1, or empty"
            raise ValidationError(errmsg)

        if domain not in sources:
            unlisted += 1
            continue

        for source in sorted(sources[domain], key=lambda s: s.priority):
            results.append(ProbeResult(
                domain,
                optionalCount(status, "http_status", row),
                None if parkedFlag is None else bool(parkedFlag),
                optionalCount(total, "provider_backlink_total", row),
                source,
            ))

    if unlisted:
        logger.warning("Skipped %d probed domain(s) with no label", unlisted)

    return results
