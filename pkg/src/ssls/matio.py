"""Matrix and vector file formats.

Two interchangeable on-disk representations, selected by file suffix:

* ``.csv``  plain text, one matrix row per line, comma separated.  Vectors are
  stored as a single row.
* ``.bin``  binary: magic bytes ``SSLS``, then rows and cols as little-endian
  u64, then the row-major float64 payload (little-endian).  Meant for large
  instances where text round-trips are slow or lossy.

Both readers validate that every entry is finite.
"""

import struct
from pathlib import Path

import numpy as np

from .core import as_matrix, as_vector

MAGIC = b"SSLS"
_HEADER = struct.Struct("<QQ")


def save_matrix(path, a):
    """Write a 2-D array to `path`; the suffix picks the format."""
    a = as_matrix(a, "a")
    path = Path(path)
    if path.suffix == ".bin":
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(_HEADER.pack(a.shape[0], a.shape[1]))
            fh.write(np.ascontiguousarray(a, dtype="<f8").tobytes())
    elif path.suffix == ".csv":
        np.savetxt(path, a, delimiter=",", fmt="%.17g")
    else:
        raise ValueError(f"unsupported suffix {path.suffix!r} (use .csv or .bin)")


def load_matrix(path):
    """Read a 2-D array written by save_matrix, validating finiteness."""
    path = Path(path)
    if path.suffix == ".bin":
        raw = path.read_bytes()
        if raw[: len(MAGIC)] != MAGIC:
            raise ValueError(f"{path} is not a {MAGIC.decode()} binary file")
        rows, cols = _HEADER.unpack_from(raw, len(MAGIC))
        body = raw[len(MAGIC) + _HEADER.size :]
        if len(body) != rows * cols * 8:
            raise ValueError(
                f"{path}: expected {rows * cols * 8} payload bytes, got {len(body)}"
            )
        a = np.frombuffer(body, dtype="<f8").reshape(rows, cols)
    elif path.suffix == ".csv":
        a = np.loadtxt(path, delimiter=",", ndmin=2)
    else:
        raise ValueError(f"unsupported suffix {path.suffix!r} (use .csv or .bin)")
    return as_matrix(a, str(path))


def save_vector(path, v):
    """Write a 1-D array as a single-row matrix."""
    v = as_vector(v, "v")
    save_matrix(path, v[None, :])


def load_vector(path):
    """Read a vector stored as a single row or a single column."""
    a = load_matrix(path)
    if 1 not in a.shape:
        raise ValueError(f"{path} holds a {a.shape} matrix, not a vector")
    return a.ravel()
