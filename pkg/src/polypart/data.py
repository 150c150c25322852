"""Sample containers and CSV input/output.

A :class:`SampleSet` holds sampled points of a 1D or 2D domain together with
one or more output values per point. One-dimensional sample sets keep their
points sorted ascending and strictly unique so that threshold boundaries are
well defined.
"""

from __future__ import annotations

import csv

import numpy as np

__all__ = ["SampleSet", "DataFormatError", "read_csv", "write_csv"]

# header -> (dim, number of outputs)
_CSV_LAYOUTS = {
    ("x", "y"): (1, 1),
    ("x", "y", "z"): (2, 1),
    ("x", "y", "u", "v"): (2, 2),
}


class DataFormatError(ValueError):
    """Malformed input data (bad CSV row, non-finite value, bad shape)."""


class SampleSet:
    """Immutable collection of sample points and their output values.

    Parameters
    ----------
    points : array-like, shape (n, d)
        Sample coordinates, d in {1, 2}. For d == 1 the coordinates must be
        strictly increasing.
    values : array-like, shape (n, m)
        Output values, m >= 1. A 1D array is treated as a single output.
    """

    __slots__ = ("points", "values")

    def __init__(self, points, values):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        vals = np.asarray(values, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        if pts.ndim != 2 or vals.ndim != 2:
            raise DataFormatError("points and values must be 2D arrays")
        if pts.shape[0] != vals.shape[0]:
            raise DataFormatError(
                f"{pts.shape[0]} points but {vals.shape[0]} value rows"
            )
        if pts.shape[0] == 0:
            raise DataFormatError("empty sample set")
        if pts.shape[1] not in (1, 2):
            raise DataFormatError(f"points must be 1D or 2D, got d={pts.shape[1]}")
        if vals.shape[1] < 1:
            raise DataFormatError("at least one output component required")
        if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(vals)):
            raise DataFormatError("non-finite coordinate or value")
        if pts.shape[1] == 1:
            x = pts[:, 0]
            if pts.shape[0] > 1 and not np.all(np.diff(x) > 0):
                raise DataFormatError(
                    "1D sample points must be sorted ascending and strictly "
                    "unique"
                )
        pts = pts.copy()
        vals = vals.copy()
        pts.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("SampleSet is immutable")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"SampleSet(n={self.n}, d={self.d}, m={self.m})"

    def take(self, indices) -> "SampleSet":
        """Sub-sample by row indices, preserving order."""
        idx = np.asarray(indices)
        return SampleSet(self.points[idx], self.values[idx])


def read_csv(path, dim: int) -> SampleSet:
    """Read a sample set from CSV.

    Accepted layouts: ``x,y`` (dim 1), ``x,y,z`` and ``x,y,u,v`` (dim 2).
    The header row is mandatory. Raises :class:`DataFormatError` naming the
    offending line for malformed rows or non-finite values.
    """
    if dim not in (1, 2):
        raise DataFormatError(f"dim must be 1 or 2, got {dim}")
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        key = tuple(h.strip() for h in header)
        if key not in _CSV_LAYOUTS:
            raise DataFormatError(
                f"{path}: unrecognized header {','.join(key)!r}; expected one "
                "of x,y / x,y,z / x,y,u,v"
            )
        d, m = _CSV_LAYOUTS[key]
        if d != dim:
            raise DataFormatError(
                f"{path}: header {','.join(key)!r} is a {d}D layout, but dim="
                f"{dim} was requested"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != d + m:
                raise DataFormatError(
                    f"{path}:{lineno}: expected {d + m} fields, got {len(row)}"
                )
            try:
                rows.append([float(f) for f in row])
            except ValueError:
                raise DataFormatError(
                    f"{path}:{lineno}: non-numeric field in {row!r}"
                ) from None
        if not rows:
            raise DataFormatError(f"{path}: no data rows")
    arr = np.array(rows, dtype=float)
    if not np.all(np.isfinite(arr)):
        bad = int(np.argwhere(~np.isfinite(arr))[0][0]) + 2
        raise DataFormatError(f"{path}:{bad}: non-finite value")
    return SampleSet(arr[:, :d], arr[:, d:])


def write_csv(data: SampleSet, path) -> None:
    """Write a sample set as CSV (LF line endings, shortest float repr)."""
    for header, (d, m) in _CSV_LAYOUTS.items():
        if data.d == d and data.m == m:
            break
    else:
        raise DataFormatError(
            f"no CSV layout for d={data.d}, m={data.m} (supported: x,y / "
            "x,y,z / x,y,u,v)"
        )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for p, v in zip(data.points, data.values):
            writer.writerow([repr(float(c)) for c in p] + [repr(float(c)) for c in v])
