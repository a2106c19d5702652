"""Reader and writer for the IDX binary format used by the MNIST files.

Layout: two zero bytes, a type code, the number of dimensions, one unsigned
32-bit big-endian size per dimension, then the data in row-major order.
Only unsigned bytes (type ``0x08``) occur in MNIST, but all standard types
are supported.  Files ending in ``.gz`` are decompressed transparently.
"""

from __future__ import annotations

import gzip
import os
import struct

import numpy as np

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801

_TYPES = {
    0x08: np.dtype("u1"),
    0x09: np.dtype("i1"),
    0x0B: np.dtype(">i2"),
    0x0C: np.dtype(">i4"),
    0x0D: np.dtype(">f4"),
    0x0E: np.dtype(">f8"),
}
_CODES = {dt.newbyteorder("=").kind + str(dt.itemsize): code for code, dt in _TYPES.items()}


class IdxFormatError(ValueError):
    """Malformed IDX content; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


def parse_idx(buf: bytes, expect_magic: int | None = None) -> np.ndarray:
    """Decode an IDX byte string into an array of the stored shape and type."""
    if len(buf) < 4:
        raise IdxFormatError("truncated header", len(buf))
    if buf[0] != 0 or buf[1] != 0:
        raise IdxFormatError("bad magic: leading bytes must be zero", 0 if buf[0] else 1)
    magic = struct.unpack(">I", buf[:4])[0]
    if expect_magic is not None and magic != expect_magic:
        raise IdxFormatError(f"bad magic 0x{magic:08x}, expected 0x{expect_magic:08x}", 0)
    code, ndim = buf[2], buf[3]
    if code not in _TYPES:
        raise IdxFormatError(f"unknown type code 0x{code:02x}", 2)
    head = 4 + 4 * ndim
    if len(buf) < head:
        raise IdxFormatError("truncated dimension block", len(buf))
    shape = struct.unpack(f">{ndim}I", buf[4:head])
    dtype = _TYPES[code]
    nbytes = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
    if len(buf) < head + nbytes:
        raise IdxFormatError(f"truncated data: need {nbytes} bytes, have {len(buf) - head}", len(buf))
    if len(buf) > head + nbytes:
        raise IdxFormatError("trailing bytes after data", head + nbytes)
    data = np.frombuffer(buf, dtype=dtype, count=nbytes // dtype.itemsize, offset=head)
    return data.reshape(shape).astype(dtype.newbyteorder("="))


def serialize_idx(arr: np.ndarray) -> bytes:
    """Encode ``arr`` as IDX bytes; inverse of :func:`parse_idx`."""
    arr = np.asarray(arr)
    key = arr.dtype.kind + str(arr.dtype.itemsize)
    if key not in _CODES:
        raise TypeError(f"dtype {arr.dtype} has no IDX type code")
    code = _CODES[key]
    header = bytes([0, 0, code, arr.ndim]) + struct.pack(f">{arr.ndim}I", *arr.shape)
    return header + np.ascontiguousarray(arr, dtype=_TYPES[code]).tobytes()


def _open(path):
    return gzip.open(path, "rb") if str(path).endswith(".gz") else open(path, "rb")


def read_idx(path, expect_magic: int | None = None) -> np.ndarray:
    with _open(path) as fh:
        return parse_idx(fh.read(), expect_magic)


def write_idx(path, arr: np.ndarray) -> None:
    data = serialize_idx(arr)
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "wb") as fh:
        fh.write(data)


def find_file(directory, stem: str) -> str:
    """``directory/stem`` or ``directory/stem.gz``, whichever exists."""
    for name in (stem, stem + ".gz"):
        path = os.path.join(directory, name)
        if os.path.exists(path):
            return path
    raise FileNotFoundError(os.path.join(directory, stem))
