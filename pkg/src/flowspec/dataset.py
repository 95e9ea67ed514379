"""Binary dataset container written by `flowspec ingest` and read by the
analysis commands.

Layout: 8-byte magic, <II version/reserved, <QQQQ p, n, width, height, then
p*n little-endian float64 values in column-major order (one frame per
column).  A JSON manifest records the frame file list, the downsample
factor, and a SHA-256 checksum of the payload.
"""

import hashlib
import json
import struct

import numpy as np

DATASET_MAGIC = b"FLSPDAT1"
DATASET_VERSION = 1


def write_dataset(path, data, width, height, source_names, downsample_factor=1):
    data = np.asarray(data, dtype=np.float64)
    p, n = data.shape
    if p != width * height:
        raise ValueError(f"p={p} does not match {width}x{height}")
    payload = np.asfortranarray(data).astype("<f8").tobytes("F")
    path = str(path)
    with open(path, "wb") as fh:
        fh.write(DATASET_MAGIC)
        fh.write(struct.pack("<II", DATASET_VERSION, 0))
        fh.write(struct.pack("<QQQQ", p, n, width, height))
        fh.write(payload)
    manifest = {
        "p": p,
        "n": n,
        "width": width,
        "height": height,
        "downsample_factor": downsample_factor,
        "frames": list(source_names),
        "sha256": hashlib.sha256(payload).hexdigest(),
    }
    with open(path + ".json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def read_dataset(path):
    """Returns (data p x n, manifest dict). The manifest is re-read from the
    sidecar when present, else reconstructed from the header."""
    path = str(path)
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != DATASET_MAGIC:
            raise ValueError(f"{path}: bad dataset magic {magic!r}")
        version, _ = struct.unpack("<II", fh.read(8))
        if version != DATASET_VERSION:
            raise ValueError(f"{path}: unsupported dataset version {version}")
        p, n, width, height = struct.unpack("<QQQQ", fh.read(32))
        payload = fh.read()
    if len(payload) != p * n * 8:
        raise ValueError(
            f"{path}: expected {p * n * 8} payload bytes, got {len(payload)}")
    data = np.frombuffer(payload, dtype="<f8").reshape((p, n), order="F").copy()
    try:
        with open(path + ".json") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        manifest = {"p": p, "n": n, "width": width, "height": height,
                    "downsample_factor": 1, "frames": [], "sha256": None}
    return data, manifest
