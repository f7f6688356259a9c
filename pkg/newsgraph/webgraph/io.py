__all__ = [
    "EDGE_COLUMNS", "NODE_COLUMNS", "readEdges", "readGraph", "readNodes",
    "writeEdges", "writeNodes",
]

import logging
import math

import pandas as pd

from newsgraph.exception import *
from newsgraph.typing import *
from newsgraph.webgraph import *

logger = logging.getLogger(__name__)

NODE_COLUMNS = ("domain", "provider_backlink_total", "provider_outlink_total")
EDGE_COLUMNS = ("source", "target", "kind", "links", "ref_pages")

def readTable(path: PathLike, **kwargs: Any) -> pd.DataFrame:
    """Read a UTF-8 comma-delimited file where only empty fields are missing."""
    try:
        return pd.read_csv(
            path,
            encoding="utf-8",
            keep_default_na=False,
            na_values=[""],
            **kwargs,
        )
    except (pd.errors.ParserError, UnicodeDecodeError) as err:
        errmsg = f"Unable to parse {path}: {err}"
        raise ValidationError(errmsg) from err

def requireColumns(frame: pd.DataFrame, columns: Iterable[str], path: PathLike) -> None:
    missing = [c for c in columns if c not in frame.columns]
    if missing:
        errmsg = f"{path} is missing column(s): {', '.join(missing)}"
        raise ValidationError(errmsg)

def optionalCount(value: Any, column: str, row: int) -> Optional[int]:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None

    try:
        count = float(value)
    except (TypeError, ValueError) as err:
        errmsg = f"Row {row}: {column} is not a number: {value!r}"
        raise ValidationError(errmsg) from err

    if not count.is_integer() or count < 0:
        errmsg = f"Row {row}: {column} must be a nonnegative integer: {value!r}"
        raise ValidationError(errmsg)

    return int(count)

def readNodes(path: PathLike) -> Tuple[List[NodeRecord], AttributeManifest]:
    """Read a nodes file; every column after the fixed three is an attribute."""
    frame = readTable(path, dtype={"domain": str})
    requireColumns(frame, NODE_COLUMNS, path)

    names = [c for c in frame.columns if c not in NODE_COLUMNS]
    manifest = AttributeManifest(names)

    try:
        values = frame[names].astype("float64").to_numpy()
    except ValueError as err:
        errmsg = f"{path} has non-numeric attribute values"
        raise ValidationError(errmsg) from err

    records = []
    for row, (domain, backlinks, outlinks) in enumerate(zip(
        frame["domain"],
        frame["provider_backlink_total"],
        frame["provider_outlink_total"],
    )):
        records.append(NodeRecord(
            domain,
            optionalCount(backlinks, "provider_backlink_total", row),
            optionalCount(outlinks, "provider_outlink_total", row),
            tuple(float(x) for x in values[row]),
        ))

    logger.info("Read %d nodes with %d attributes from %s",
        len(records), len(manifest), path)
    return records, manifest

def readEdges(path: PathLike) -> List[EdgeRecord]:
    frame = readTable(path, dtype={"source": str, "target": str, "kind": str})
    requireColumns(frame, EDGE_COLUMNS, path)

    records = []
    for row, (source, target, kind, links, refPages) in enumerate(zip(
        *(frame[column] for column in EDGE_COLUMNS)
    )):
        linkCount = optionalCount(links, "links", row)
        pageCount = optionalCount(refPages, "ref_pages", row)
        if linkCount is None or pageCount is None:
            errmsg = f"{path}, row {row}: links and ref_pages are required"
            raise ValidationError(errmsg)

        try:
            linkKind = LinkKind.parse(kind)
        except (AttributeError, ValueError) as err:
            errmsg = f"{path}, row {row}: {err}"
            raise ValidationError(errmsg) from err

        records.append(EdgeRecord(source, target, linkKind, linkCount, pageCount))

    logger.info("Read %d edge records from %s", len(records), path)
    return records

def readGraph(nodesPath: PathLike, edgesPath: PathLike) -> AttributedWebgraph:
    nodes, manifest = readNodes(nodesPath)
    return buildGraph(nodes, readEdges(edgesPath), manifest)

def writeNodes(graph: AttributedWebgraph, path: PathLike) -> None:
    frame = pd.DataFrame({
        "domain": graph.domains,
        "provider_backlink_total": pd.array(
            [node.providerBacklinkTotal for node in graph.nodes],
            dtype="Int64",
        ),
        "provider_outlink_total": pd.array(
            [node.providerOutlinkTotal for node in graph.nodes],
            dtype="Int64",
        ),
    })

    for j, name in enumerate(graph.manifest):
        frame[name] = graph.attributes[:, j]

    frame.to_csv(path, index=False, lineterminator="\n")

def writeEdges(graph: AttributedWebgraph, path: PathLike) -> None:
    frame = pd.DataFrame({
        "source": [graph.domains[i] for i in graph.sources],
        "target": [graph.domains[i] for i in graph.targets],
        "kind": [str(LinkKind(int(k))) for k in graph.kinds],
        "links": graph.links,
        "ref_pages": graph.refPages,
    })

    frame.to_csv(path, index=False, lineterminator="\n")
