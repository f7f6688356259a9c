__all__ = ["FetchClient", "FetchResponse", "FixtureFetchClient", "probeDomains"]

import base64
import json
import logging

from newsgraph.exception import *
from newsgraph.ingest.labels import Source
from newsgraph.ingest.parked import HttpMetadata, ParkedPatternSet, matchParked
from newsgraph.ingest.survival import ProbeResult
from newsgraph.typing import *
from newsgraph.utils import normalizeDomain, typename

logger = logging.getLogger(__name__)

class FetchResponse(NamedTuple):
    status: Optional[int]
    body: bytes = b""
    finalUrl: Optional[str] = None
    headers: Mapping[str, str] = {}

class FetchClient:
    """Retrieve the landing page of a domain.

    :raises DataUnavailable: if the client cannot produce a response
    """

    def fetch(self, domain: str) -> FetchResponse:
        raise NotImplementedError()

    def close(self) -> None:
        pass

    def __enter__(self) -> "FetchClient":
        return self

    def __exit__(self, *args: Any) -> None:
        self.close()

@final
class FixtureFetchClient(FetchClient):
    """Replay recorded responses; no network access is ever made."""

    def __init__(self, responses: Mapping[str, FetchResponse]) -> None:
        self.responses = {
            normalizeDomain(domain): response
            for domain, response in responses.items()
        }

    def __repr__(self) -> str:
        return f"<{typename(self)}: {len(self.responses)} responses>"

    @classmethod
    def load(cls, path: PathLike) -> "FixtureFetchClient":
        """Read JSON lines of {"domain", "status", "body" | "body_base64",
        "final_url", "headers"}."""
        responses = {}
        with open(path, encoding="utf-8") as f:
            for number, line in enumerate(f, 1):
                if not line.strip():
                    continue

                try:
                    obj = json.loads(line)
                    if "body_base64" in obj:
                        body = base64.b64decode(obj["body_base64"])
                    else:
                        body = obj.get("body", "").encode("utf-8")

                    responses[obj["domain"]] = FetchResponse(
                        obj.get("status"),
                        body,
                        obj.get("final_url"),
                        obj.get("headers", {}),
                    )
                except (KeyError, TypeError, ValueError) as err:
                    errmsg = f"{path}, line {number}: {err}"
                    raise ValidationError(errmsg) from err

        return cls(responses)

    def fetch(self, domain: str) -> FetchResponse:
        try:
            return self.responses[normalizeDomain(domain)]
        except KeyError as err:
            raise DataUnavailable(f"No recorded response for {domain}") from err

def probeDomains(
    client: FetchClient,
    sources: Mapping[str, Iterable[Source]],
    totals: Mapping[str, Optional[int]],
    patterns: Optional[ParkedPatternSet] = None,
) -> List[ProbeResult]:
    """Probe each listed domain once and emit one result per listing source.

    A domain the client cannot fetch gets an unknown status and an unknown
    parked verdict.
    """
    results = []
    for domain in sorted(sources):
        try:
            response = client.fetch(domain)
        except DataUnavailable as err:
            logger.warning("%s", err)
            status, parked = None, None
        else:
            http = HttpMetadata(response.status, response.finalUrl, response.headers)
            verdict = matchParked(response.body, http, patterns)
            status = response.status
            parked = None if verdict.warning else verdict.parked

        for source in sorted(set(sources[domain]), key=lambda s: s.priority):
            results.append(ProbeResult(
                domain, status, parked, totals.get(domain), source,
            ))

    return results
