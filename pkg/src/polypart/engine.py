"""Recursive hyperplane partitioning of sample sets.

Each node of the search fits the best penalized model to its samples, then
exhaustively scores every admissible boundary (all sample-value thresholds
in 1D, all cross-edge perimeter lines in 2D) by the sum of the two sides'
effective losses. The minimum-total boundary is kept when the raw losses of
the refit side models improve on the node's raw loss by at least the
fraction ``q``; accepted splits recurse depth-first, left side first.

Candidate scoring is independent per candidate and runs through the scan
kernels (compiled when available); the winner is the canonical argmin over
the returned loss surface, so results do not depend on evaluation order or
backend. Side models of the winning boundary are refit through
:func:`polypart.scoring.select_model`, which also supplies the raw losses
used by the acceptance test.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count as _count
from typing import Optional, Union

import numpy as np

from . import _kernels
from .data import SampleSet
from .geometry import (
    GridSpec,
    Line2D,
    PerimeterIndex,
    Threshold1D,
    candidate_pairs,
    orient_many,
    perimeter_points,
    split,
)
from .models import RankDeficientError
from .scoring import ModelFamily, PenaltySpec, ScoredModel, penalty_multiplier, select_model

__all__ = [
    "PartitionConfig",
    "BoundaryScore",
    "LossSurface1D",
    "LossSurface2D",
    "PartitionNode",
    "score_boundary",
    "best_boundary",
    "accept_split",
    "partition",
]


@dataclass(frozen=True)
class PartitionConfig:
    """Search configuration.

    ``q`` is the minimum fractional loss improvement a split must deliver.
    ``min_points`` defaults to one more than the largest family term count,
    keeping every admissible fit overdetermined. ``grid`` is required for 2D
    searches, whose candidate lines join perimeter points of the sampling
    grid; recursive subdomain searches reuse the root grid's perimeter.
    """

    family: ModelFamily
    penalty: PenaltySpec
    q: float = 0.10
    min_points: Optional[int] = None
    max_depth: int = 16
    grid: Optional[GridSpec] = None

    def __post_init__(self):
        if not 0.0 <= self.q < 1.0:
            raise ValueError(f"q must be in [0, 1), got {self.q}")
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        largest = self.family.largest_term_count
        if self.min_points is None:
            object.__setattr__(self, "min_points", largest + 1)
        elif self.min_points < largest:
            raise ValueError(
                f"min_points={self.min_points} below the largest family term "
                f"count {largest}"
            )
        # Penalty domain must cover the family, surfacing bad configs early.
        for basis in self.family.members:
            penalty_multiplier(self.penalty, basis.complexity)


@dataclass(frozen=True)
class BoundaryScore:
    """One scored boundary: effective side losses plus the refit side models.

    ``e1``/``e2`` follow the order of :func:`polypart.geometry.split` (left/
    negative side first). From :func:`best_boundary` they are the scan values
    and match the loss surface exactly; ``models`` always carries the
    reference-path refits, whose stored losses agree to rounding.
    """

    boundary: Union[Threshold1D, Line2D]
    e1: float
    e2: float
    models: tuple[ScoredModel, ScoredModel]

    @property
    def total(self) -> float:
        return self.e1 + self.e2


@dataclass(frozen=True)
class LossSurface1D:
    """Total effective loss at every admissible threshold, ascending."""

    thresholds: np.ndarray
    totals: np.ndarray


@dataclass(frozen=True)
class LossSurface2D:
    """Total effective loss per candidate perimeter pair.

    ``pairs`` holds (index_a, index_b) into ``perimeter``; ``totals`` aligns
    with it, NaN for inadmissible candidates (undersized or rank-deficient
    side). :meth:`matrix` expands to the symmetric square form indexed by
    perimeter point, NaN off the candidate set.
    """

    perimeter: PerimeterIndex
    pairs: np.ndarray
    totals: np.ndarray

    def matrix(self) -> np.ndarray:
        p = len(self.perimeter)
        out = np.full((p, p), np.nan)
        ia = self.pairs[:, 0]
        ib = self.pairs[:, 1]
        out[ia, ib] = self.totals
        out[ib, ia] = self.totals
        return out


@dataclass(frozen=True)
class PartitionNode:
    """Tree node: a domain, its model, and an optional accepted split."""

    node_id: int
    samples: SampleSet
    scored: ScoredModel
    score: Optional[BoundaryScore] = None
    children: Optional[tuple["PartitionNode", "PartitionNode"]] = None
    note: Optional[str] = None

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    @property
    def boundary(self):
        return None if self.score is None else self.score.boundary

    def leaves(self) -> list["PartitionNode"]:
        """Leaf nodes, left to right."""
        if self.is_leaf:
            return [self]
        return self.children[0].leaves() + self.children[1].leaves()

    def internal_nodes(self) -> list["PartitionNode"]:
        """Internal nodes in discovery (depth-first pre-) order."""
        if self.is_leaf:
            return []
        return (
            [self]
            + self.children[0].internal_nodes()
            + self.children[1].internal_nodes()
        )

    def to_dict(self) -> dict:
        """JSON-ready form: id, n, model, loss, boundary, children."""
        model = self.scored.model
        out = {
            "id": self.node_id,
            "n": self.samples.n,
            "model": {
                "degrees": list(model.basis.degrees),
                "terms": [list(t) for t in model.basis.term_exponents()],
                "coeffs": [[float(c) for c in row] for row in model.coefficients],
            },
            "loss": {
                "raw": self.scored.raw_loss,
                "effective": self.scored.effective_loss,
            },
            "boundary": _boundary_dict(self.boundary),
            "children": [],
        }
        if self.note is not None:
            out["note"] = self.note
        if not self.is_leaf:
            out["children"] = [c.to_dict() for c in self.children]
        return out


def _boundary_dict(boundary) -> Optional[dict]:
    if boundary is None:
        return None
    if isinstance(boundary, Threshold1D):
        return {"kind": "threshold", "t": boundary.t}
    return {"kind": "line", "a": list(boundary.a), "b": list(boundary.b)}


def accept_split(e0: float, e1: float, e2: float, q: float) -> bool:
    """True iff e1 + e2 <= (1 - q) * e0; equality keeps the boundary."""
    if not 0.0 <= q < 1.0:
        raise ValueError(f"q must be in [0, 1), got {q}")
    if e0 < 0.0 or e1 < 0.0 or e2 < 0.0:
        raise ValueError("losses must be non-negative")
    return e1 + e2 <= (1.0 - q) * e0


def _side_sizes(data: SampleSet, boundary) -> tuple[int, int]:
    if isinstance(boundary, Threshold1D):
        i = int(np.searchsorted(data.points[:, 0], boundary.t, side="left"))
        return i, data.n - i
    signs = orient_many(boundary.a, boundary.b, data.points)
    nn = int(np.count_nonzero(signs < 0))
    return nn, data.n - nn


def score_boundary(
    data: SampleSet, boundary, cfg: PartitionConfig
) -> Optional[BoundaryScore]:
    """Score one boundary through the reference path.

    Returns None when either side has fewer than ``cfg.min_points`` samples.
    Rank-deficient sides raise :class:`RankDeficientError` with the boundary
    attached.
    """
    n1, n2 = _side_sizes(data, boundary)
    if n1 < cfg.min_points or n2 < cfg.min_points:
        return None
    s1, s2 = split(data, boundary)
    try:
        sm1 = select_model(s1, cfg.family, cfg.penalty)
        sm2 = select_model(s2, cfg.family, cfg.penalty)
    except RankDeficientError as exc:
        raise RankDeficientError(f"{exc} (at boundary {boundary})") from exc
    return BoundaryScore(boundary, sm1.effective_loss, sm2.effective_loss, (sm1, sm2))


def _combine_scans(cfg: PartitionConfig, scans) -> tuple[np.ndarray, np.ndarray]:
    """Best effective loss per side across family members.

    ``scans`` yields (basis, ssr_side1, ssr_side2, ok_side1, ok_side2).
    Sides where no member fits are +inf.
    """
    e1 = None
    e2 = None
    for basis, ssr1, ssr2, ok1, ok2 in scans:
        p = penalty_multiplier(cfg.penalty, basis.complexity)
        c1 = np.where(ok1.astype(bool), p * ssr1, np.inf)
        c2 = np.where(ok2.astype(bool), p * ssr2, np.inf)
        e1 = c1 if e1 is None else np.minimum(e1, c1)
        e2 = c2 if e2 is None else np.minimum(e2, c2)
    return e1, e2


def best_boundary(data: SampleSet, cfg: PartitionConfig):
    """Exhaustively score every candidate boundary.

    Returns ``(best, surface)``. ``best`` is None when no candidate is
    admissible; otherwise its ``e1 + e2`` equals the minimum over the
    surface's admissible entries exactly, with ties resolved to the smallest
    threshold (1D) or smallest (index_a, index_b) pair (2D).
    """
    if data.d != cfg.family.d:
        raise ValueError(
            f"data dimension {data.d} does not match family dimension "
            f"{cfg.family.d}"
        )
    if data.d == 1:
        return _best_boundary_1d(data, cfg)
    return _best_boundary_2d(data, cfg)


def _best_boundary_1d(data: SampleSet, cfg: PartitionConfig):
    x = data.points[:, 0]
    n = data.n
    lo = cfg.min_points
    hi = n - cfg.min_points
    if lo > hi:
        empty = np.empty(0)
        return None, LossSurface1D(empty, empty.copy())
    values = data.values
    scans = []
    for basis in cfg.family.members:
        ssr1, ssr2, ok1, ok2 = _kernels.scan_thresholds_1d(
            x, values, basis.degrees[0], lo, hi
        )
        scans.append((basis, ssr1, ssr2, ok1, ok2))
    e1, e2 = _combine_scans(cfg, scans)
    totals = e1 + e2
    admissible = np.isfinite(totals)
    thresholds = x[lo : hi + 1].copy()
    surface = LossSurface1D(thresholds, np.where(admissible, totals, np.nan))
    if not admissible.any():
        return None, surface
    ci = int(np.nanargmin(surface.totals))
    boundary = Threshold1D(float(thresholds[ci]))
    return _winner(data, cfg, boundary, float(e1[ci]), float(e2[ci])), surface


def _best_boundary_2d(data: SampleSet, cfg: PartitionConfig):
    if cfg.grid is None:
        raise ValueError("2D boundary search requires cfg.grid")
    perim = perimeter_points(cfg.grid)
    pairs = candidate_pairs(perim)
    pts = perim.points
    # Anchor a is the higher-indexed point; see geometry.candidate_lines_2d.
    lines = np.hstack([pts[pairs[:, 1]], pts[pairs[:, 0]]])
    scans = []
    for basis in cfg.family.members:
        expo = np.array(basis.term_exponents(), dtype=np.int64)
        ssr1, ssr2, ok1, ok2, _ = _kernels.scan_lines_2d(
            data.points, data.values, lines, expo, cfg.min_points
        )
        scans.append((basis, ssr1, ssr2, ok1, ok2))
    e1, e2 = _combine_scans(cfg, scans)
    totals = e1 + e2
    admissible = np.isfinite(totals)
    surface = LossSurface2D(perim, pairs, np.where(admissible, totals, np.nan))
    if not admissible.any():
        return None, surface
    ci = int(np.nanargmin(surface.totals))
    ia, ib = int(pairs[ci, 0]), int(pairs[ci, 1])
    boundary = Line2D(tuple(pts[ib]), tuple(pts[ia]))
    return _winner(data, cfg, boundary, float(e1[ci]), float(e2[ci])), surface


def _winner(data, cfg, boundary, e1, e2) -> BoundaryScore:
    ref = score_boundary(data, boundary, cfg)
    if ref is None:  # scan and reference path disagree on side sizes
        raise RuntimeError(
            f"scan accepted boundary {boundary} that the reference path "
            "finds inadmissible"
        )
    return BoundaryScore(boundary, e1, e2, ref.models)


def partition(data: SampleSet, cfg: PartitionConfig) -> PartitionNode:
    """Recursively partition a sample set.

    Node ids are assigned in discovery order (the root is 0 and each
    accepted split claims the next two ids, left first) and recursion is
    depth-first, left side first. A split is kept when the refit side
    models' raw losses satisfy the acceptance test against the node's raw
    loss. Regression failure below the root marks that node a leaf with a
    diagnostic note instead of aborting the whole run.
    """
    if data.n < cfg.min_points:
        raise ValueError(
            f"root domain has {data.n} points, below min_points="
            f"{cfg.min_points}"
        )
    ids = _count()

    def build(samples: SampleSet, scored: ScoredModel, depth: int, nid: int):
        if depth < cfg.max_depth and samples.n >= 2 * cfg.min_points:
            try:
                best, _ = best_boundary(samples, cfg)
            except RankDeficientError as exc:
                return PartitionNode(
                    nid, samples, scored, note=f"search stopped: {exc}"
                )
            if best is not None and accept_split(
                scored.raw_loss,
                best.models[0].raw_loss,
                best.models[1].raw_loss,
                cfg.q,
            ):
                s1, s2 = split(samples, best.boundary)
                lid = next(ids)
                rid = next(ids)
                left = build(s1, best.models[0], depth + 1, lid)
                right = build(s2, best.models[1], depth + 1, rid)
                return PartitionNode(
                    nid, samples, scored, score=best, children=(left, right)
                )
        return PartitionNode(nid, samples, scored)

    root_scored = select_model(data, cfg.family, cfg.penalty)
    root_id = next(ids)
    return build(data, root_scored, 0, root_id)
