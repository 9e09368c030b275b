"""On-disk formats: binary matrices, key=value sidecars and CSV tables.

Matrix files start with a 24-byte little-endian header

    offset 0   4 bytes  magic b"SYMP"
    offset 4   uint32   format version (1)
    offset 8   uint64   rows
    offset 16  uint64   cols

followed by ``rows * cols`` little-endian float64 values in row-major order.
Snapshot matrices are stored as-is; a basis is stored as its first block
column ``[VQ; VP]`` (``2N x k``).

All writers go through a temporary file in the target directory followed by
``os.replace``, so a reader never observes a partially written file.
"""
import csv
import io
import math
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .errors import SnapshotFormatError
from .symplectic import OrthoSymplecticBasis, SnapshotMatrix

MAGIC = b"SYMP"
VERSION = 1
HEADER = struct.Struct("<4sIQQ")
_DTYPE = np.dtype("<f8")


def atomic_write_bytes(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text):
    atomic_write_bytes(path, text.encode("utf-8"))


def encode_matrix(A):
    A = np.asarray(A)
    if A.ndim != 2 or np.iscomplexobj(A):
        raise ValueError(f"only real 2-D matrices can be stored, got {A.dtype} {A.shape}")
    rows, cols = A.shape
    return HEADER.pack(MAGIC, VERSION, rows, cols) + np.ascontiguousarray(A, dtype=_DTYPE).tobytes()


def decode_matrix(buf, name="<bytes>"):
    if len(buf) < HEADER.size:
        raise SnapshotFormatError(f"{name}: truncated header ({len(buf)} bytes)")
    magic, version, rows, cols = HEADER.unpack_from(buf)
    if magic != MAGIC:
        raise SnapshotFormatError(f"{name}: bad magic {magic!r}")
    if version != VERSION:
        raise SnapshotFormatError(f"{name}: unsupported format version {version}")
    expected = HEADER.size + rows * cols * _DTYPE.itemsize
    if len(buf) != expected:
        raise SnapshotFormatError(
            f"{name}: header declares {rows}x{cols} ({expected} bytes), file has {len(buf)} bytes"
        )
    return np.frombuffer(buf, dtype=_DTYPE, offset=HEADER.size).reshape(rows, cols).astype(np.float64)


def write_matrix(path, A):
    atomic_write_bytes(path, encode_matrix(A))


def read_matrix(path):
    path = Path(path)
    try:
        buf = path.read_bytes()
    except OSError as exc:
        raise SnapshotFormatError(f"cannot read {path}: {exc.strerror}") from exc
    return decode_matrix(buf, str(path))


def write_snapshots(path, Xs):
    X = Xs.data if isinstance(Xs, SnapshotMatrix) else Xs
    write_matrix(path, X)


def read_snapshots(path):
    A = read_matrix(path)
    if A.shape[0] % 2:
        raise SnapshotFormatError(f"{path}: snapshot matrix needs an even row count, got {A.shape[0]}")
    return SnapshotMatrix(A)


def write_basis(path, V):
    write_matrix(path, V.stacked())


def read_basis(path):
    A = read_matrix(path)
    if A.shape[0] % 2:
        raise SnapshotFormatError(f"{path}: basis needs an even row count, got {A.shape[0]}")
    return OrthoSymplecticBasis.from_stacked(A)


def format_value(v):
    """Text form used in sidecars and CSV cells; ``repr`` keeps floats exact."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(format_value(x) for x in v)
    return str(v)


def write_sidecar(path, meta):
    """Write ``key=value`` lines in insertion order."""
    lines = []
    for key, value in meta.items():
        if "=" in key or "\n" in key:
            raise ValueError(f"invalid sidecar key {key!r}")
        lines.append(f"{key}={format_value(value)}\n")
    atomic_write_text(path, "".join(lines))


def read_sidecar(path):
    meta = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise SnapshotFormatError(f"{path}:{lineno}: expected key=value")
        meta[key.strip()] = value.strip()
    return meta


def sidecar_path(path):
    path = Path(path)
    return path.with_name(path.name + ".meta")


def csv_text(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def write_csv(path, columns, rows):
    atomic_write_text(path, csv_text(columns, rows))


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def parse_float(text):
    """Inverse of :func:`format_value` for numeric cells; empty -> ``None``."""
    text = text.strip()
    return None if text == "" else float(text)
