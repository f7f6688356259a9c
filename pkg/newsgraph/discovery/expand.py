__all__ = ["OutlinkExpansion", "expandOutlinks"]

import logging

from newsgraph.discovery.client import LinkDataClient
from newsgraph.discovery.schemes import LinkScheme
from newsgraph.exception import *
from newsgraph.typing import *
from newsgraph.utils import normalizeDomain

logger = logging.getLogger(__name__)

class OutlinkExpansion(NamedTuple):
    candidates: List[str]
    provenance: Dict[str, Tuple[str, ...]]
    skipped: List[str]

def expandOutlinks(
    schemes: Iterable[Union[LinkScheme, str]],
    client: LinkDataClient,
    n: int,
    exclude: Iterable[str] = (),
) -> OutlinkExpansion:
    """Pool the top n outlink targets of every link scheme.

    Each scheme contributes the targets of its n heaviest outlinks; targets
    in exclude, and the schemes themselves, are then removed. Candidates are
    returned sorted, each with the sorted list of schemes that emitted it.
    A scheme whose outlinks are unavailable is listed in skipped.
    """
    if n < 1:
        raise ValueError(f"outlinks per scheme must be at least 1 (got {n})")

    domains = [s.domain if isinstance(s, LinkScheme) else normalizeDomain(s) for s in schemes]
    excluded = {normalizeDomain(d) for d in exclude} | set(domains)

    provenance: Dict[str, Set[str]] = {}
    skipped = []
    for scheme in domains:
        try:
            edges = client.getOutlinks(scheme, n)
        except LinkDataUnavailable as err:
            logger.warning("Skipping link scheme %s: %s", scheme, err)
            skipped.append(scheme)
            continue

        for edge in edges:
            target = normalizeDomain(edge.target)
            if target not in excluded:
                provenance.setdefault(target, set()).add(scheme)

    candidates = sorted(provenance)
    logger.info(
        "%d link scheme(s) yielded %d candidate(s); %d skipped",
        len(domains) - len(skipped), len(candidates), len(skipped),
    )

    return OutlinkExpansion(
        candidates,
        {domain: tuple(sorted(provenance[domain])) for domain in candidates},
        skipped,
    )
