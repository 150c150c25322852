"""Pure-numpy scan kernels (fallback when the compiled extension is absent).

Both backends share one contract. ``scan_thresholds_1d`` scores the split at
every index i in [lo, hi] (left rows [0, i), right rows [i, n)) for a single
basis; ``scan_lines_2d`` scores every candidate line for a single basis,
skipping sides below ``min_points``. Sum-of-squares losses come from an
explicit residual against the QR solution, with rank deficiency flagged per
side via the shared diagonal test in :func:`polypart.models.qr_solve`.
"""

from __future__ import annotations

import numpy as np

from ..geometry import orient_many
from ..models import monomial_matrix_1d, monomial_matrix_2d, qr_solve

BACKEND = "python"


def _fit_ssr(design, targets):
    coef, ok = qr_solve(design, targets)
    if not ok:
        return np.nan, False
    resid = targets - design @ coef
    return float(np.sum(resid * resid)), True


def scan_thresholds_1d(x, values, degree, lo, hi):
    """SSR of the best-fit basis on both sides of every split index.

    Returns ``(ssr_left, ssr_right, ok_left, ok_right)`` over candidates
    i = lo..hi inclusive. Callers guarantee lo >= term count and
    hi <= n - term count.
    """
    x = np.ascontiguousarray(x, dtype=float)
    values = np.asarray(values, dtype=float)
    design = monomial_matrix_1d(x, int(degree))
    count = hi - lo + 1
    ssr_left = np.full(count, np.nan)
    ssr_right = np.full(count, np.nan)
    ok_left = np.zeros(count, dtype=np.uint8)
    ok_right = np.zeros(count, dtype=np.uint8)
    for c, i in enumerate(range(lo, hi + 1)):
        ssr, ok = _fit_ssr(design[:i], values[:i])
        ssr_left[c], ok_left[c] = ssr, ok
        ssr, ok = _fit_ssr(design[i:], values[i:])
        ssr_right[c], ok_right[c] = ssr, ok
    return ssr_left, ssr_right, ok_left, ok_right


def scan_lines_2d(points, values, lines, exponents, min_points):
    """SSR of the best-fit basis on both sides of every candidate line.

    ``lines`` is (L, 4) rows [ax, ay, bx, by]. Returns ``(ssr_neg, ssr_pos,
    ok_neg, ok_pos, n_neg)``; sides with fewer than ``min_points`` samples
    are skipped (ok 0, ssr NaN). Orientation-zero points join the positive
    side, matching :func:`polypart.geometry.split`.
    """
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    lines = np.asarray(lines, dtype=float)
    expo = np.asarray(exponents, dtype=np.int64)
    design = monomial_matrix_2d(points, expo)
    n = points.shape[0]
    count = lines.shape[0]
    ssr_neg = np.full(count, np.nan)
    ssr_pos = np.full(count, np.nan)
    ok_neg = np.zeros(count, dtype=np.uint8)
    ok_pos = np.zeros(count, dtype=np.uint8)
    n_neg = np.zeros(count, dtype=np.int64)
    for li in range(count):
        ax, ay, bx, by = lines[li]
        signs = orient_many((ax, ay), (bx, by), points)
        neg = signs < 0
        nn = int(np.count_nonzero(neg))
        n_neg[li] = nn
        if nn < min_points or n - nn < min_points:
            continue
        ssr, ok = _fit_ssr(design[neg], values[neg])
        ssr_neg[li], ok_neg[li] = ssr, ok
        pos = ~neg
        ssr, ok = _fit_ssr(design[pos], values[pos])
        ssr_pos[li], ok_pos[li] = ssr, ok
    return ssr_neg, ssr_pos, ok_neg, ok_pos, n_neg
