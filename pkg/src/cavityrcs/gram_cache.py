"""On-disk cache of Gram tensors.

File layout (all little-endian)::

    8 bytes   magic b"CAVGRAM\\0"
    int64     format version
    int64     M, N
    float64   kappa0, a, b
    int64     quad_grid
    complex128 I1, I2, I3, each (M+1, N+1, M+1, N+1) in C order

A file whose header differs from the requested parameters in any field is
treated as a miss and overwritten.  Writes go to a temporary file in the same
directory followed by an atomic rename.
"""

from __future__ import annotations

import hashlib
import os
import struct
import tempfile

import numpy as np

from .gram import GramTensor

MAGIC = b"CAVGRAM\0"
VERSION = 1
_HEADER = struct.Struct("<8sqqqdddq")


def cache_path(cache_dir, M, N, kappa0, a, b, quad_grid, regime_threshold):
    key = repr((VERSION, M, N, float(kappa0), float(a), float(b), quad_grid, regime_threshold))
    digest = hashlib.sha256(key.encode()).hexdigest()[:16]
    return os.path.join(cache_dir, "gram_M%d_N%d_%s.bin" % (M, N, digest))


def _header(M, N, kappa0, a, b, quad_grid):
    return _HEADER.pack(MAGIC, VERSION, M, N, float(kappa0), float(a), float(b), int(quad_grid))


def save_gram(path, gram):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gram-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(_header(gram.M, gram.N, gram.kappa0, gram.a, gram.b, gram.quad_grid))
            for arr in (gram.I1, gram.I2, gram.I3):
                fh.write(np.ascontiguousarray(arr, dtype="<c16").tobytes())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_gram(path, M, N, kappa0, a, b, quad_grid, regime_threshold):
    """Return the cached tensor, or None if the file is missing, truncated or mismatched."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except FileNotFoundError:
        return None
    if len(data) < _HEADER.size or data[:_HEADER.size] != _header(M, N, kappa0, a, b, quad_grid):
        return None
    count = ((M + 1) * (N + 1)) ** 2
    expected = _HEADER.size + 3 * count * 16
    if len(data) != expected:
        return None
    body = np.frombuffer(data, dtype="<c16", offset=_HEADER.size).astype(complex)
    shape = (M + 1, N + 1, M + 1, N + 1)
    I1, I2, I3 = (body[i * count:(i + 1) * count].reshape(shape) for i in range(3))
    return GramTensor(I1, I2, I3, kappa0, a, b, quad_grid, regime_threshold)
