"""Power-series models and least-squares fitting.

Models are truncated power series over one or two coordinates. A 1D basis of
degree cap K contains the monomials x^0 .. x^K; a 2D basis with caps (K, J)
contains every x^k y^j with k <= K and j <= J, ordered lexicographically by
(k, j). Coefficients are solved by Householder QR, never by forming the
normal equations, and a rank-deficient design is an error rather than a
pseudo-inverse fallback.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .data import SampleSet

__all__ = [
    "BasisSpec",
    "PowerSeriesModel",
    "RankDeficientError",
    "build_design_matrix",
    "fit",
    "evaluate",
    "predict",
    "qr_solve",
]


class RankDeficientError(ValueError):
    """Design matrix is rank deficient or underdetermined."""


@dataclass(frozen=True)
class BasisSpec:
    """Monomial basis of a truncated power series.

    Parameters
    ----------
    degrees : tuple of int
        Per-axis degree caps. Length 1 for a 1D basis (K,), length 2 for a
        2D basis (K, J). The constant term is always included.
    """

    degrees: tuple[int, ...]

    def __post_init__(self):
        degs = tuple(int(k) for k in self.degrees)
        object.__setattr__(self, "degrees", degs)
        if len(degs) not in (1, 2):
            raise ValueError(f"degrees must have length 1 or 2, got {degs}")
        if any(k < 0 for k in degs):
            raise ValueError(f"degree caps must be >= 0, got {degs}")

    @property
    def d(self) -> int:
        return len(self.degrees)

    @property
    def term_count(self) -> int:
        count = 1
        for k in self.degrees:
            count *= k + 1
        return count

    @property
    def complexity(self) -> int:
        """Penalty key: the largest per-axis degree cap (equals K in 1D)."""
        return max(self.degrees)

    def term_exponents(self) -> tuple[tuple[int, ...], ...]:
        """Monomial exponents in deterministic order.

        1D: (0,), (1,), ..., (K,). 2D: (k, j) in lexicographic order, so
        (0,0), (0,1), ..., (0,J), (1,0), ... (K,J).
        """
        if self.d == 1:
            return tuple((k,) for k in range(self.degrees[0] + 1))
        kmax, jmax = self.degrees
        return tuple((k, j) for k in range(kmax + 1) for j in range(jmax + 1))


@dataclass(frozen=True)
class PowerSeriesModel:
    """A fitted power series: basis plus a (term_count, m) coefficient array."""

    basis: BasisSpec
    coefficients: np.ndarray

    def __post_init__(self):
        coef = np.asarray(self.coefficients, dtype=float)
        if coef.ndim == 1:
            coef = coef[:, None]
        if coef.ndim != 2 or coef.shape[0] != self.basis.term_count:
            raise ValueError(
                f"coefficients must have shape ({self.basis.term_count}, m), "
                f"got {coef.shape}"
            )
        if not np.all(np.isfinite(coef)):
            raise ValueError("non-finite coefficient")
        coef = coef.copy()
        coef.flags.writeable = False
        object.__setattr__(self, "coefficients", coef)

    @property
    def m(self) -> int:
        return self.coefficients.shape[1]


def _power_columns(x: np.ndarray, degree: int) -> np.ndarray:
    # Cumulative products keep the compiled kernel and this path bit-identical.
    n = x.shape[0]
    cols = np.empty((n, degree + 1), dtype=float)
    cols[:, 0] = 1.0
    for k in range(1, degree + 1):
        cols[:, k] = cols[:, k - 1] * x
    return cols


def monomial_matrix_1d(x: np.ndarray, degree: int) -> np.ndarray:
    """Design matrix [x^0 .. x^degree] for a coordinate vector."""
    return _power_columns(np.asarray(x, dtype=float), degree)


def monomial_matrix_2d(points: np.ndarray, exponents) -> np.ndarray:
    """Design matrix with one column x^k y^j per (k, j) exponent row."""
    pts = np.asarray(points, dtype=float)
    expo = np.asarray(exponents, dtype=int)
    px = _power_columns(pts[:, 0], int(expo[:, 0].max()))
    py = _power_columns(pts[:, 1], int(expo[:, 1].max()))
    out = np.empty((pts.shape[0], expo.shape[0]), dtype=float)
    for t, (k, j) in enumerate(expo):
        out[:, t] = px[:, k] * py[:, j]
    return out


def build_design_matrix(points, basis: BasisSpec) -> np.ndarray:
    """Evaluate every basis monomial at every point.

    Parameters
    ----------
    points : array-like, shape (n, d) or (n,)
        Sample coordinates matching ``basis.d``.
    basis : BasisSpec

    Returns
    -------
    ndarray, shape (n, basis.term_count)
        Finite design matrix in the basis' deterministic term order.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[1] != basis.d:
        raise ValueError(
            f"points have d={pts.shape[1]} but basis expects d={basis.d}"
        )
    if basis.d == 1:
        design = monomial_matrix_1d(pts[:, 0], basis.degrees[0])
    else:
        design = monomial_matrix_2d(pts, np.array(basis.term_exponents()))
    if not np.all(np.isfinite(design)):
        raise ValueError("non-finite design matrix entry")
    return design


def qr_solve(design: np.ndarray, targets: np.ndarray):
    """Least squares via economy Householder QR.

    Returns ``(coefficients, ok)``. ``ok`` is False when the triangular
    factor's diagonal signals rank deficiency under the scaled test
    ``|R_tt| <= max(n, T) * eps * max|R_ii|`` (the compiled kernel applies
    the same rule). Coefficients are garbage when ``ok`` is False.
    """
    n, t = design.shape
    if n < t:
        return np.zeros((t, targets.shape[1])), False
    q, r = scipy.linalg.qr(design, mode="economic")
    diag = np.abs(np.diagonal(r))
    dmax = diag.max() if t else 0.0
    if dmax == 0.0 or diag.min() <= max(n, t) * np.finfo(float).eps * dmax:
        return np.zeros((t, targets.shape[1])), False
    coef = scipy.linalg.solve_triangular(r, q.T @ targets)
    return coef, True


def fit(data: SampleSet, basis: BasisSpec) -> PowerSeriesModel:
    """Fit basis coefficients to a sample set by least squares.

    Raises
    ------
    RankDeficientError
        If the system is underdetermined (n < term_count) or the design
        matrix is rank deficient for these sample points.
    """
    if data.d != basis.d:
        raise ValueError(f"data has d={data.d} but basis expects d={basis.d}")
    if data.n < basis.term_count:
        raise RankDeficientError(
            f"underdetermined fit: {data.n} points for basis degrees="
            f"{basis.degrees} ({basis.term_count} terms)"
        )
    design = build_design_matrix(data.points, basis)
    coef, ok = qr_solve(design, data.values)
    if not ok:
        raise RankDeficientError(
            f"rank-deficient design for basis degrees={basis.degrees} on a "
            f"domain of {data.n} points"
        )
    return PowerSeriesModel(basis, coef)


def predict(model: PowerSeriesModel, points) -> np.ndarray:
    """Model outputs for many points, shape (n, m)."""
    return build_design_matrix(points, model.basis) @ model.coefficients


def evaluate(model: PowerSeriesModel, point) -> np.ndarray:
    """Model output vector at a single point, shape (m,)."""
    pt = np.asarray(point, dtype=float).reshape(1, -1)
    return predict(model, pt)[0]
