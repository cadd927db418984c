"""Binary grid cache: magic "ZML1", version byte, float64 records.

Record layout is little-endian (t, Z, Z', theta, theta') per sample; the
format round-trips grids bit-exactly and is shared by the moments module
and the CLI.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .critline import GridData
from .errors import ConfigError

MAGIC = b"ZML1"
VERSION = 1
_FIELDS = 5


def write_grid(grid: GridData, path: str | Path) -> None:
    records = np.empty((grid.t.size, _FIELDS), dtype="<f8")
    records[:, 0] = grid.t
    records[:, 1] = grid.Z
    records[:, 2] = grid.Z_prime
    records[:, 3] = grid.theta
    records[:, 4] = grid.theta_prime
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<B", VERSION))
        fh.write(struct.pack("<d", grid.est_abs_error))
        fh.write(struct.pack("<Q", grid.t.size))
        fh.write(records.tobytes())


def read_grid(path: str | Path) -> GridData:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise ConfigError(f"bad grid cache magic {magic!r} in {path}")
        (version,) = struct.unpack("<B", fh.read(1))
        if version != VERSION:
            raise ConfigError(f"unsupported grid cache version {version}")
        (est,) = struct.unpack("<d", fh.read(8))
        (count,) = struct.unpack("<Q", fh.read(8))
        data = np.frombuffer(fh.read(count * _FIELDS * 8), dtype="<f8")
    if data.size != count * _FIELDS:
        raise ConfigError(f"truncated grid cache {path}")
    records = data.reshape(count, _FIELDS)
    return GridData(
        t=records[:, 0].copy(),
        Z=records[:, 1].copy(),
        Z_prime=records[:, 2].copy(),
        theta=records[:, 3].copy(),
        theta_prime=records[:, 4].copy(),
        est_abs_error=est,
    )
