"""Versioned JSON containers with little-endian float payloads.

Used for model checkpoints and subword embedder snapshots. Arrays are
stored base64-encoded so round-trips are bit-exact.
"""

from __future__ import annotations

import base64
import json

import numpy as np

from .errors import CheckpointError

FORMAT = "taxmap-container"


def encode_array(arr: np.ndarray) -> dict:
    arr = np.ascontiguousarray(arr)
    dtype = arr.dtype.newbyteorder("<")
    return {
        "shape": list(arr.shape),
        "dtype": dtype.str,
        "data": base64.b64encode(arr.astype(dtype).tobytes()).decode("ascii"),
    }


def decode_array(obj: dict) -> np.ndarray:
    raw = base64.b64decode(obj["data"])
    arr = np.frombuffer(raw, dtype=np.dtype(obj["dtype"]))
    return arr.reshape(obj["shape"]).astype(np.dtype(obj["dtype"]).newbyteorder("=")).copy()


def write_container(path, kind: str, version: int, payload: dict) -> None:
    doc = {"format": FORMAT, "kind": kind, "version": version, "payload": payload}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, separators=(",", ":"), sort_keys=True)
        fh.write("\n")


def read_container(path, kind: str, max_version: int) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as err:
        raise CheckpointError(f"{path}: not a valid container: {err}") from err
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise CheckpointError(f"{path}: not a {FORMAT} file")
    if doc.get("kind") != kind:
        raise CheckpointError(f"{path}: expected kind {kind!r}, got {doc.get('kind')!r}")
    version = doc.get("version")
    if not isinstance(version, int) or version < 1:
        raise CheckpointError(f"{path}: missing or invalid version field")
    if version > max_version:
        raise CheckpointError(
            f"{path}: version {version} is newer than supported {max_version}")
    return doc["payload"]
