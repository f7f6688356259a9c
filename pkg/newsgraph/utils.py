__all__ = [
    "canonicalJson", "deriveSeed", "normalizeDomain", "stableHash", "typename",
]

import hashlib
import json

from newsgraph.typing import *

def canonicalJson(obj: Any) -> str:
    """Render obj as JSON with sorted keys and no insignificant whitespace.

    Two structurally equal objects always render to the same string, which
    makes the output suitable for hashing and for byte-level comparisons of
    run records.
    """
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)

def stableHash(obj: Any) -> str:
    """Compute the hex SHA-256 digest of the canonical JSON form of obj."""
    return hashlib.sha256(canonicalJson(obj).encode("utf-8")).hexdigest()

def deriveSeed(seed: int, *keys: Any) -> int:
    """Derive an independent 32-bit seed from a parent seed and a key path.

    Components that own their own random stream (one tree of a forest, one
    fold of a cross-validation) call deriveSeed(seed, "tree", i) instead of
    sharing a generator, so that each result depends only on its own key and
    never on the order in which the components are scheduled.
    """
    digest = hashlib.sha256(canonicalJson([seed, *keys]).encode("utf-8"))
    return int.from_bytes(digest.digest()[:4], "big")

def normalizeDomain(text: str) -> str:
    """Reduce a URL or hostname to the bare domain used as a join key.

    The scheme, any user info, port, path, query and fragment are removed,
    the result is lowercased, a leading "www." is stripped, and so is a
    trailing dot. No IDN transformation is applied.

    :raises ValueError: if nothing is left of the input
    """
    host = text.strip().lower()

    if "://" in host:
        host = host.split("://", 1)[1]

    for separator in "/?#":
        host = host.split(separator, 1)[0]

    host = host.rsplit("@", 1)[-1]
    host = host.split(":", 1)[0]
    host = host.rstrip(".")

    if host.startswith("www."):
        host = host[4:]

    if not host:
        raise ValueError(f"Cannot extract a domain from {text!r}")

    return host

def typename(cls: Any, qualified: bool = False) -> str:
    """Name of a class, or of the class of an instance.

    With ``qualified``, the module path and any enclosing classes are
    included, e.g. ``newsgraph.nn.gcn.GCN``.
    """
    if not isinstance(cls, type):
        cls = type(cls)

    if qualified:
        return f"{cls.__module__}.{cls.__qualname__}"

    return cast(type, cls).__name__
