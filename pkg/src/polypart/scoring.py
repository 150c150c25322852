"""Complexity-penalized model scoring.

Each candidate model is scored by its reconstruction loss (sum of squared
residuals over all points and output components; sums, not means, so losses
add across disjoint subdomains) times a complexity multiplier in (0, 1].
Simpler models get smaller multipliers, so a higher-degree model must earn
its extra terms. Ties go to the simpler model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import SampleSet
from .models import BasisSpec, PowerSeriesModel, RankDeficientError, fit, predict

__all__ = [
    "PenaltySpec",
    "ModelFamily",
    "ScoredModel",
    "penalty_multiplier",
    "reconstruction_loss",
    "select_model",
]


@dataclass(frozen=True)
class PenaltySpec:
    """Loss multiplier schedule keyed by model complexity.

    Use the constructors: :meth:`affine` gives p(K) = 1 - alpha*(k_max - K)
    for K in 0..k_max (so p(k_max) = 1), :meth:`table` an explicit mapping,
    and :meth:`flat` multiplier 1 for every K (the single-model case).
    """

    kind: str
    alpha: float = 0.0
    k_max: int = 0
    mapping: tuple = field(default=())

    def __post_init__(self):
        if self.kind == "affine":
            if self.k_max < 0:
                raise ValueError("k_max must be >= 0")
            if self.alpha < 0:
                raise ValueError("alpha must be >= 0")
            if 1.0 - self.alpha * self.k_max <= 0.0:
                raise ValueError(
                    f"affine penalty not positive at K=0: alpha={self.alpha}, "
                    f"k_max={self.k_max}"
                )
        elif self.kind == "table":
            if not self.mapping:
                raise ValueError("empty penalty table")
            for key, mult in self.mapping:
                if not 0.0 < mult <= 1.0:
                    raise ValueError(
                        f"multiplier for K={key} is {mult}, outside (0, 1]"
                    )
        elif self.kind != "flat":
            raise ValueError(f"unknown penalty kind {self.kind!r}")

    @classmethod
    def affine(cls, alpha: float, k_max: int) -> "PenaltySpec":
        return cls(kind="affine", alpha=float(alpha), k_max=int(k_max))

    @classmethod
    def table(cls, mapping: dict) -> "PenaltySpec":
        items = tuple(sorted((int(k), float(v)) for k, v in mapping.items()))
        return cls(kind="table", mapping=items)

    @classmethod
    def flat(cls) -> "PenaltySpec":
        return cls(kind="flat")


def penalty_multiplier(spec: PenaltySpec, complexity: int) -> float:
    """Multiplier for a model of the given complexity (degree cap).

    Raises ValueError when the complexity is outside the domain of ``spec``.
    """
    k = int(complexity)
    if spec.kind == "flat":
        return 1.0
    if spec.kind == "affine":
        if not 0 <= k <= spec.k_max:
            raise ValueError(
                f"complexity {k} outside affine penalty domain 0..{spec.k_max}"
            )
        return 1.0 - spec.alpha * (spec.k_max - k)
    for key, mult in spec.mapping:
        if key == k:
            return mult
    raise ValueError(f"complexity {k} not in penalty table")


@dataclass(frozen=True)
class ModelFamily:
    """Candidate bases ordered by strictly increasing complexity."""

    members: tuple[BasisSpec, ...]

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ValueError("empty model family")
        d = members[0].d
        for b in members:
            if b.d != d:
                raise ValueError("family mixes 1D and 2D bases")
        for a, b in zip(members, members[1:]):
            if a.degrees >= b.degrees:
                raise ValueError(
                    f"family degrees must strictly increase, got {a.degrees} "
                    f"then {b.degrees}"
                )

    @classmethod
    def up_to_degree(cls, max_degree: int) -> "ModelFamily":
        """1D family with degree caps 0..max_degree."""
        return cls(tuple(BasisSpec((k,)) for k in range(max_degree + 1)))

    @classmethod
    def single(cls, basis: BasisSpec) -> "ModelFamily":
        return cls((basis,))

    @property
    def d(self) -> int:
        return self.members[0].d

    @property
    def largest_term_count(self) -> int:
        return max(b.term_count for b in self.members)


@dataclass(frozen=True)
class ScoredModel:
    """A fitted model with its raw and penalty-scaled losses."""

    model: PowerSeriesModel
    raw_loss: float
    effective_loss: float


def reconstruction_loss(model: PowerSeriesModel, data: SampleSet) -> float:
    """Sum of squared residuals over all points and output components."""
    resid = data.values - predict(model, data.points)
    return float(np.sum(resid * resid))


def select_model(
    data: SampleSet, family: ModelFamily, penalty: PenaltySpec
) -> ScoredModel:
    """Fit every family member and keep the lowest effective loss.

    The family is scanned in increasing complexity order with a strict
    comparison, so exact ties resolve to the simpler model. Members whose
    design is rank deficient on this domain are skipped; if every member
    fails, the last failure is re-raised.
    """
    best = None
    failure = None
    for basis in family.members:
        try:
            model = fit(data, basis)
        except RankDeficientError as exc:
            failure = exc
            continue
        raw = reconstruction_loss(model, data)
        eff = penalty_multiplier(penalty, basis.complexity) * raw
        if best is None or eff < best.effective_loss:
            best = ScoredModel(model, raw, eff)
    if best is None:
        raise RankDeficientError(
            f"every family member is rank deficient on this domain of "
            f"{data.n} points"
        ) from failure
    return best
