# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels.

Same contract as ``_pykernels``: score one basis over every candidate
boundary, returning per-side sums of squared residuals and admissibility
flags. Least squares runs through LAPACK Householder QR (dgeqrf/dormqr/
dtrtrs bound at runtime from scipy, so no link-time BLAS dependency), with
the same scaled diagonal rank test as :func:`polypart.models.qr_solve` and
the SSR recomputed explicitly from the solved coefficients. Design matrices
and orientation determinants use the same expressions as the Python path;
the build disables fp contraction so both backends agree at the bit level
on candidate membership.
"""

import numpy as np

cimport numpy as cnp
from libc.float cimport DBL_EPSILON
from libc.math cimport fabs
from scipy.linalg.cython_lapack cimport dgeqrf, dormqr, dtrtrs

from polypart.geometry import COLLINEAR_RTOL

cnp.import_array()

BACKEND = "compiled"

cdef double _RTOL = COLLINEAR_RTOL


cdef bint _side_fit(
    const double* design,
    const double* targets,
    Py_ssize_t t,
    Py_ssize_t m,
    const Py_ssize_t* rows,
    Py_ssize_t n_side,
    double* af,
    double* bf,
    double* tau,
    double* work,
    int lwork,
    double* ssr_out,
) noexcept nogil:
    """Fit one side by QR and write its SSR; False when rank deficient."""
    cdef Py_ssize_t r, c, j, o, row
    cdef int mm, nn, nrhs, lda, info
    cdef double dmax, dmin, v, pred, dres, ssr
    cdef char cl = b"L", ct = b"T", cu = b"U", cn = b"N"
    if n_side < t:
        return False
    mm = <int> n_side
    nn = <int> t
    nrhs = <int> m
    lda = mm
    info = 0
    # gather the side into Fortran-order work copies
    for c in range(t):
        for r in range(n_side):
            af[c * n_side + r] = design[rows[r] * t + c]
    for o in range(m):
        for r in range(n_side):
            bf[o * n_side + r] = targets[rows[r] * m + o]
    dgeqrf(&mm, &nn, af, &lda, tau, work, &lwork, &info)
    if info != 0:
        return False
    dmax = 0.0
    dmin = fabs(af[0])
    for j in range(t):
        v = fabs(af[j * n_side + j])
        if v > dmax:
            dmax = v
        if v < dmin:
            dmin = v
    if dmax == 0.0 or dmin <= (<double> n_side) * DBL_EPSILON * dmax:
        return False
    dormqr(&cl, &ct, &mm, &nrhs, &nn, af, &lda, tau, bf, &lda, work, &lwork, &info)
    if info != 0:
        return False
    dtrtrs(&cu, &cn, &cn, &nn, &nrhs, af, &lda, bf, &lda, &info)
    if info != 0:
        return False
    ssr = 0.0
    for r in range(n_side):
        row = rows[r]
        for o in range(m):
            pred = 0.0
            for j in range(t):
                pred += design[row * t + j] * bf[o * n_side + j]
            dres = targets[row * m + o] - pred
            ssr += dres * dres
    ssr_out[0] = ssr
    return True


cdef int _query_lwork(Py_ssize_t n, Py_ssize_t t, Py_ssize_t m, double* af, double* tau):
    cdef int mm = <int> n, nn = <int> t, nrhs = <int> m, lda = <int> n
    cdef int info = 0, lwork = -1, best
    cdef double q1 = 0.0, q2 = 0.0
    cdef char cl = b"L", ct = b"T"
    dgeqrf(&mm, &nn, af, &lda, tau, &q1, &lwork, &info)
    dormqr(&cl, &ct, &mm, &nrhs, &nn, af, &lda, tau, af, &lda, &q2, &lwork, &info)
    best = <int> q1
    if <int> q2 > best:
        best = <int> q2
    if best < <int> t:
        best = <int> t
    if best < 1:
        best = 1
    return best


def scan_thresholds_1d(x, values, degree, lo, hi):
    """SSR of the best-fit basis on both sides of every split index.

    Mirrors ``_pykernels.scan_thresholds_1d``: candidates i = lo..hi
    inclusive, left rows [0, i), right rows [i, n).
    """
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim == 1:
        vals = vals[:, None]
    cdef const double[:, ::1] vv = np.ascontiguousarray(vals)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t m = vv.shape[1]
    cdef Py_ssize_t t = <Py_ssize_t> degree + 1
    cdef Py_ssize_t lo_ = <Py_ssize_t> lo
    cdef Py_ssize_t hi_ = <Py_ssize_t> hi
    cdef Py_ssize_t count = hi_ - lo_ + 1
    if count < 0:
        count = 0
    ssr_left = np.full(count, np.nan)
    ssr_right = np.full(count, np.nan)
    ok_left = np.zeros(count, dtype=np.uint8)
    ok_right = np.zeros(count, dtype=np.uint8)
    if count == 0:
        return ssr_left, ssr_right, ok_left, ok_right
    if lo_ < 1 or hi_ > n - 1:
        raise ValueError("candidate range outside (0, n)")
    cdef double[::1] sl = ssr_left
    cdef double[::1] sr = ssr_right
    cdef cnp.uint8_t[::1] okl = ok_left
    cdef cnp.uint8_t[::1] okr = ok_right
    design_arr = np.empty(n * t, dtype=np.float64)
    cdef double[::1] design = design_arr
    rows_arr = np.arange(n, dtype=np.intp)
    cdef const Py_ssize_t[::1] rows = rows_arr
    af_arr = np.empty(n * t, dtype=np.float64)
    bf_arr = np.empty(n * m, dtype=np.float64)
    tau_arr = np.empty(t, dtype=np.float64)
    cdef double[::1] af = af_arr
    cdef double[::1] bf = bf_arr
    cdef double[::1] tau = tau_arr
    cdef int lwork = _query_lwork(n, t, m, &af[0], &tau[0])
    work_arr = np.empty(lwork, dtype=np.float64)
    cdef double[::1] work = work_arr
    cdef Py_ssize_t r, k, c, i
    cdef double ssr = 0.0
    with nogil:
        for r in range(n):
            design[r * t] = 1.0
            for k in range(1, t):
                design[r * t + k] = design[r * t + k - 1] * xv[r]
        for c in range(count):
            i = lo_ + c
            if _side_fit(&design[0], &vv[0, 0], t, m, &rows[0], i,
                         &af[0], &bf[0], &tau[0], &work[0], lwork, &ssr):
                sl[c] = ssr
                okl[c] = 1
            if _side_fit(&design[0], &vv[0, 0], t, m, &rows[i], n - i,
                         &af[0], &bf[0], &tau[0], &work[0], lwork, &ssr):
                sr[c] = ssr
                okr[c] = 1
    return ssr_left, ssr_right, ok_left, ok_right


def scan_lines_2d(points, values, lines, exponents, min_points):
    """SSR of the best-fit basis on both sides of every candidate line.

    Mirrors ``_pykernels.scan_lines_2d``: rows of ``lines`` are
    [ax, ay, bx, by]; sides below ``min_points`` are skipped; orientation
    zeros join the positive side.
    """
    cdef const double[:, ::1] pv = np.ascontiguousarray(points, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim == 1:
        vals = vals[:, None]
    cdef const double[:, ::1] vv = np.ascontiguousarray(vals)
    cdef const double[:, ::1] lv = np.ascontiguousarray(lines, dtype=np.float64)
    cdef const cnp.int64_t[:, ::1] ev = np.ascontiguousarray(exponents, dtype=np.int64)
    cdef Py_ssize_t n = pv.shape[0]
    cdef Py_ssize_t m = vv.shape[1]
    cdef Py_ssize_t nterms = ev.shape[0]
    cdef Py_ssize_t nlines = lv.shape[0]
    cdef Py_ssize_t minp = <Py_ssize_t> min_points
    cdef Py_ssize_t kmax = 0, jmax = 0
    cdef Py_ssize_t r, k, j, c, li, nneg, npos
    for c in range(nterms):
        if ev[c, 0] > kmax:
            kmax = ev[c, 0]
        if ev[c, 1] > jmax:
            jmax = ev[c, 1]
    ssr_neg = np.full(nlines, np.nan)
    ssr_pos = np.full(nlines, np.nan)
    ok_neg = np.zeros(nlines, dtype=np.uint8)
    ok_pos = np.zeros(nlines, dtype=np.uint8)
    n_neg = np.zeros(nlines, dtype=np.int64)
    if nlines == 0:
        return ssr_neg, ssr_pos, ok_neg, ok_pos, n_neg
    cdef double[::1] sn = ssr_neg
    cdef double[::1] sp = ssr_pos
    cdef cnp.uint8_t[::1] okn = ok_neg
    cdef cnp.uint8_t[::1] okp = ok_pos
    cdef cnp.int64_t[::1] nnv = n_neg
    px_arr = np.empty(n * (kmax + 1), dtype=np.float64)
    py_arr = np.empty(n * (jmax + 1), dtype=np.float64)
    design_arr = np.empty(n * nterms, dtype=np.float64)
    neg_arr = np.empty(n, dtype=np.intp)
    pos_arr = np.empty(n, dtype=np.intp)
    af_arr = np.empty(n * nterms, dtype=np.float64)
    bf_arr = np.empty(n * m, dtype=np.float64)
    tau_arr = np.empty(nterms, dtype=np.float64)
    cdef double[::1] px = px_arr
    cdef double[::1] py = py_arr
    cdef double[::1] design = design_arr
    cdef Py_ssize_t[::1] negr = neg_arr
    cdef Py_ssize_t[::1] posr = pos_arr
    cdef double[::1] af = af_arr
    cdef double[::1] bf = bf_arr
    cdef double[::1] tau = tau_arr
    cdef int lwork = _query_lwork(n, nterms, m, &af[0], &tau[0])
    work_arr = np.empty(lwork, dtype=np.float64)
    cdef double[::1] work = work_arr
    cdef double ax, ay, bx, by, det, scale, v, ssr
    cdef double rtol = _RTOL
    with nogil:
        for r in range(n):
            px[r * (kmax + 1)] = 1.0
            for k in range(1, kmax + 1):
                px[r * (kmax + 1) + k] = px[r * (kmax + 1) + k - 1] * pv[r, 0]
            py[r * (jmax + 1)] = 1.0
            for j in range(1, jmax + 1):
                py[r * (jmax + 1) + j] = py[r * (jmax + 1) + j - 1] * pv[r, 1]
        for c in range(nterms):
            for r in range(n):
                design[r * nterms + c] = (
                    px[r * (kmax + 1) + ev[c, 0]] * py[r * (jmax + 1) + ev[c, 1]]
                )
        for li in range(nlines):
            ax = lv[li, 0]
            ay = lv[li, 1]
            bx = lv[li, 2]
            by = lv[li, 3]
            scale = fabs(ax)
            if fabs(ay) > scale:
                scale = fabs(ay)
            if fabs(bx) > scale:
                scale = fabs(bx)
            if fabs(by) > scale:
                scale = fabs(by)
            nneg = 0
            npos = 0
            for r in range(n):
                det = (bx - ax) * (pv[r, 1] - ay) - (by - ay) * (pv[r, 0] - ax)
                v = scale
                if fabs(pv[r, 0]) > v:
                    v = fabs(pv[r, 0])
                if fabs(pv[r, 1]) > v:
                    v = fabs(pv[r, 1])
                if det < 0.0 and fabs(det) > rtol * v * v:
                    negr[nneg] = r
                    nneg += 1
                else:
                    posr[npos] = r
                    npos += 1
            nnv[li] = <cnp.int64_t> nneg
            if nneg < minp or npos < minp:
                continue
            if _side_fit(&design[0], &vv[0, 0], nterms, m, &negr[0], nneg,
                         &af[0], &bf[0], &tau[0], &work[0], lwork, &ssr):
                sn[li] = ssr
                okn[li] = 1
            if _side_fit(&design[0], &vv[0, 0], nterms, m, &posr[0], npos,
                         &af[0], &bf[0], &tau[0], &work[0], lwork, &ssr):
                sp[li] = ssr
                okp[li] = 1
    return ssr_neg, ssr_pos, ok_neg, ok_pos, n_neg
