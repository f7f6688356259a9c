__all__ = [
    "FORMAT_VERSION", "loadGcnModel", "readArchive", "saveGcnModel",
    "writeArchive",
]

import json
import logging
import os

import numpy as np

from newsgraph.exception import *
from newsgraph.nn.gcn import PARAMETER_NAMES, GcnModel
from newsgraph.typing import *

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
META_KEY = "__meta__"

def writeArchive(
    path: PathLike,
    kind: str,
    arrays: Mapping[str, Any],
    metadata: Mapping[str, Any],
) -> None:
    """Store arrays and a JSON metadata record in one uncompressed .npz file.

    Arrays are written as-is, so a round trip is bit-exact.
    """
    if META_KEY in arrays:
        raise ValueError(f"{META_KEY} is a reserved array name")

    meta = dict(metadata)
    meta["format_version"] = FORMAT_VERSION
    meta["kind"] = kind

    payload = {name: np.asarray(value) for name, value in arrays.items()}
    payload[META_KEY] = np.array(json.dumps(meta, sort_keys=True))

    with open(path, "wb") as f:
        np.savez(f, **payload)

    logger.info("Wrote %s checkpoint to %s", kind, path)

def readArchive(
    path: PathLike,
    kind: str,
) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    """Load a checkpoint written by writeArchive and check its header.

    :raises CheckpointError:
        if the file is missing or unreadable, or holds a different kind or
        format version
    """
    if not os.path.isfile(path):
        raise CheckpointError(f"Checkpoint not found: {path}")

    try:
        with np.load(path, allow_pickle=False) as archive:
            arrays = {name: archive[name] for name in archive.files}
    except (OSError, ValueError) as err:
        errmsg = f"Unable to read checkpoint {path}: {err}"
        raise CheckpointError(errmsg) from err

    try:
        meta = json.loads(str(arrays.pop(META_KEY)))
    except (KeyError, ValueError) as err:
        raise CheckpointError(f"{path} has no metadata record") from err

    if meta.get("format_version") != FORMAT_VERSION:
        errmsg = (
            f"{path} has format version {meta.get('format_version')},"
            f" expected {FORMAT_VERSION}"
        )

        raise CheckpointError(errmsg)

    if meta.get("kind") != kind:
        raise CheckpointError(f"{path} holds a {meta.get('kind')}, not a {kind}")

    return arrays, meta

def saveGcnModel(
    model: GcnModel,
    path: PathLike,
    config: Optional[Mapping[str, Any]] = None,
    seed: Optional[int] = None,
    **extra: Any,
) -> None:
    metadata = {
        "dropout": model.dropout,
        "shapes": {name: list(p.shape) for name, p in model.params.items()},
        "config": dict(config or {}),
        "seed": seed,
    }

    metadata.update(extra)
    writeArchive(path, "gcn", model.params, metadata)

def loadGcnModel(path: PathLike) -> Tuple[GcnModel, Dict[str, Any]]:
    arrays, meta = readArchive(path, "gcn")

    missing = [name for name in PARAMETER_NAMES if name not in arrays]
    if missing:
        raise CheckpointError(f"{path} lacks parameters: {', '.join(missing)}")

    try:
        model = GcnModel(arrays, meta["dropout"])
    except (KeyError, ValueError) as err:
        raise CheckpointError(f"{path} holds an invalid model: {err}") from err

    return model, meta
