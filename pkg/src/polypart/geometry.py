"""Boundary geometry: thresholds, lines, grid perimeters, splits.

Boundaries are hyperplanes of the domain: a threshold value in 1D, an
infinite line through two anchor points in 2D. Side membership in 2D comes
from the sign of the orientation determinant, with points within floating
tolerance of the line counted as sign zero and joined to the non-negative
side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import SampleSet

__all__ = [
    "Threshold1D",
    "Line2D",
    "GridSpec",
    "PerimeterIndex",
    "orient",
    "orient_many",
    "candidates_1d",
    "perimeter_points",
    "candidate_pairs",
    "candidate_lines_2d",
    "split",
]

# |det| <= COLLINEAR_RTOL * scale^2 counts as "on the line".
COLLINEAR_RTOL = 1e-12

EDGE_BOTTOM, EDGE_LEFT, EDGE_TOP, EDGE_RIGHT = 1, 2, 3, 4


@dataclass(frozen=True)
class Threshold1D:
    """1D boundary: left side {x < t}, right side {x >= t}."""

    t: float


@dataclass(frozen=True)
class Line2D:
    """2D boundary through anchor points a and b (a != b), extended infinitely."""

    a: tuple[float, float]
    b: tuple[float, float]

    def __post_init__(self):
        a = (float(self.a[0]), float(self.a[1]))
        b = (float(self.b[0]), float(self.b[1]))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a == b:
            raise ValueError(f"degenerate line: a == b == {a}")


@dataclass(frozen=True)
class GridSpec:
    """Uniform rectangular sampling grid, nx columns by ny rows."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid extent must be non-empty on both axes")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 points per axis")

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    def points(self) -> np.ndarray:
        """All grid points, row-major from the bottom row up, shape (nx*ny, 2)."""
        xs, ys = self.xs(), self.ys()
        gx, gy = np.meshgrid(xs, ys)
        return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass(frozen=True)
class PerimeterIndex:
    """Ordered boundary points of a grid with their owning edges.

    Order is counterclockwise: bottom edge left to right, right edge bottom
    to top, top edge right to left, left edge top to bottom. Corner points
    are owned by the horizontal (bottom/top) edges, so every point appears
    exactly once and the total count is 2*nx + 2*ny - 4.
    """

    points: np.ndarray  # (P, 2), read-only
    edges: np.ndarray  # (P,), values in {1, 2, 3, 4}

    def __len__(self) -> int:
        return self.points.shape[0]


def orient(a, b, c) -> int:
    """Side of directed line a->b that point c falls on: +1, -1, or 0.

    Sign of det [[ax, ay, 1], [bx, by, 1], [cx, cy, 1]]. Determinants within
    ``COLLINEAR_RTOL * scale**2`` of zero (scale = largest coordinate
    magnitude involved) collapse to exact 0. Raises ValueError when a == b.
    """
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    cx, cy = float(c[0]), float(c[1])
    if ax == bx and ay == by:
        raise ValueError(f"orientation undefined: a == b == ({ax}, {ay})")
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    scale = max(abs(ax), abs(ay), abs(bx), abs(by), abs(cx), abs(cy))
    if abs(det) <= COLLINEAR_RTOL * scale * scale:
        return 0
    return 1 if det > 0.0 else -1


def orient_many(a, b, points: np.ndarray) -> np.ndarray:
    """Vectorized :func:`orient` over rows of ``points``; same tolerance rule."""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    if ax == bx and ay == by:
        raise ValueError(f"orientation undefined: a == b == ({ax}, {ay})")
    px = points[:, 0]
    py = points[:, 1]
    det = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    scale = np.maximum(
        max(abs(ax), abs(ay), abs(bx), abs(by)),
        np.maximum(np.abs(px), np.abs(py)),
    )
    out = np.sign(det).astype(np.int64)
    out[np.abs(det) <= COLLINEAR_RTOL * scale * scale] = 0
    return out


def candidates_1d(data: SampleSet, min_points: int) -> list[Threshold1D]:
    """Thresholds at every sample value leaving >= min_points on both sides.

    Sample points are sorted and unique, so the threshold at x[i] puts i
    points on the left; admissible i runs from min_points to n - min_points.
    Returned ascending.
    """
    if data.d != 1:
        raise ValueError("candidates_1d requires 1D data")
    if min_points < 1:
        raise ValueError("min_points must be >= 1")
    x = data.points[:, 0]
    n = x.shape[0]
    return [Threshold1D(float(x[i])) for i in range(min_points, n - min_points + 1)]


def perimeter_points(grid: GridSpec) -> PerimeterIndex:
    """Enumerate the grid's boundary points in the canonical perimeter order."""
    xs, ys = grid.xs(), grid.ys()
    nx, ny = grid.nx, grid.ny
    pts = []
    edges = []
    for i in range(nx):  # bottom, left to right, owns both corners
        pts.append((xs[i], ys[0]))
        edges.append(EDGE_BOTTOM)
    for j in range(1, ny - 1):  # right, bottom to top, corners excluded
        pts.append((xs[nx - 1], ys[j]))
        edges.append(EDGE_RIGHT)
    for i in range(nx - 1, -1, -1):  # top, right to left, owns both corners
        pts.append((xs[i], ys[ny - 1]))
        edges.append(EDGE_TOP)
    for j in range(ny - 2, 0, -1):  # left, top to bottom, corners excluded
        pts.append((xs[0], ys[j]))
        edges.append(EDGE_LEFT)
    points = np.array(pts, dtype=float)
    points.flags.writeable = False
    edge_arr = np.array(edges, dtype=np.int64)
    edge_arr.flags.writeable = False
    return PerimeterIndex(points, edge_arr)


def candidate_pairs(perim: PerimeterIndex) -> np.ndarray:
    """Index pairs (ia, ib), ia < ib, whose owning edges differ.

    Ordered by (ia, ib). Pairs on a shared edge are excluded (collinear with
    it, no interior separation); distinct pairs that induce identical
    partitions are kept.
    """
    p = len(perim)
    ia, ib = np.triu_indices(p, k=1)
    keep = perim.edges[ia] != perim.edges[ib]
    return np.column_stack([ia[keep], ib[keep]])


def candidate_lines_2d(perim: PerimeterIndex) -> list[Line2D]:
    """Candidate boundary lines through every cross-edge perimeter pair.

    Each line is directed so that perimeter points with indices strictly
    between the pair fall on its non-negative side (the perimeter order is
    counterclockwise, so anchor a is the higher-indexed point). Together
    with the sign-zero rule this fixes which side on-line samples join.
    """
    pairs = candidate_pairs(perim)
    pts = perim.points
    return [
        Line2D(tuple(pts[ib]), tuple(pts[ia]))
        for ia, ib in pairs
    ]


def split(data: SampleSet, boundary) -> tuple[SampleSet, SampleSet]:
    """Partition a sample set by a boundary, preserving point order.

    1D: (left {x < t}, right {x >= t}). 2D: (negative side, non-negative
    side); orientation-zero points join the second element, mirroring the
    1D rule that the boundary sample joins the right side. Either side may
    be empty, in which case a DataFormatError from the empty SampleSet is
    avoided by raising ValueError here.
    """
    if isinstance(boundary, Threshold1D):
        if data.d != 1:
            raise ValueError("Threshold1D split requires 1D data")
        x = data.points[:, 0]
        i = int(np.searchsorted(x, boundary.t, side="left"))
        if i == 0 or i == data.n:
            raise ValueError(
                f"threshold {boundary.t} leaves an empty side (x range "
                f"[{x[0]}, {x[-1]}])"
            )
        idx = np.arange(data.n)
        return data.take(idx[:i]), data.take(idx[i:])
    if isinstance(boundary, Line2D):
        if data.d != 2:
            raise ValueError("Line2D split requires 2D data")
        signs = orient_many(boundary.a, boundary.b, data.points)
        neg = np.nonzero(signs < 0)[0]
        pos = np.nonzero(signs >= 0)[0]
        if len(neg) == 0 or len(pos) == 0:
            raise ValueError("line leaves an empty side")
        return data.take(neg), data.take(pos)
    raise TypeError(f"unsupported boundary type {type(boundary).__name__}")
