"""Binary matrix files and value CSVs.

Matrix file layout, all little-endian::

    magic   4 bytes  b"RNNM"
    version u32      1
    rows    u64
    cols    u64
    payload rows*cols float64, column-major
"""

import struct

import numpy as np

MAGIC = b"RNNM"
VERSION = 1
_HEADER = struct.Struct("<4sIQQ")


class MatrixFileError(OSError):
    """Malformed or unreadable matrix file."""


def dumps_matrix(A):
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    rows, cols = A.shape
    return _HEADER.pack(MAGIC, VERSION, rows, cols) + A.astype("<f8").tobytes(order="F")


def loads_matrix(data):
    if len(data) < _HEADER.size:
        raise MatrixFileError(f"file too short for header ({len(data)} bytes)")
    magic, version, rows, cols = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise MatrixFileError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise MatrixFileError(f"unsupported version {version}")
    expected = rows * cols * 8
    payload = data[_HEADER.size:]
    if len(payload) != expected:
        raise MatrixFileError(
            f"payload is {len(payload)} bytes, header says {rows}x{cols} ({expected} bytes)"
        )
    A = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    A = A.reshape((rows, cols), order="F")
    if not np.all(np.isfinite(A)):
        raise MatrixFileError("matrix contains NaN or Inf")
    return A


def write_matrix(path, A):
    with open(path, "wb") as fh:
        fh.write(dumps_matrix(A))


def read_matrix(path):
    with open(path, "rb") as fh:
        return loads_matrix(fh.read())


def format_value(x):
    # 17 significant digits round-trip any float64
    return f"{x:.17g}"


def write_values_csv(path, values):
    with open(path, "w") as fh:
        for v in values:
            fh.write(format_value(v) + "\n")


def read_values_csv(path):
    with open(path) as fh:
        return np.array([float(line) for line in fh if line.strip()])
