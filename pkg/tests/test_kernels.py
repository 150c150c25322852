"""Backend parity and contract tests for the scan kernels.

The compiled extension and the numpy fallback implement one contract, so
every parity test runs the same inputs through both and demands matching
results. Parity tests are skipped when the extension is not built; the
contract tests run against whichever backend is active.
"""

import numpy as np
import pytest

import polypart._kernels as kernels
from polypart._kernels import _pykernels as pyk
from polypart.geometry import candidate_pairs, perimeter_points
from polypart.models import BasisSpec
from polypart.synth import gen_quad_2d, gen_vector_2d, unit_grid

compiled_only = pytest.mark.skipif(
    kernels.BACKEND != "compiled", reason="compiled scan extension not built"
)


def candidate_lines(grid):
    """Perimeter-pair lines in the layout the boundary search uses."""
    perim = perimeter_points(grid)
    pairs = candidate_pairs(perim)
    pts = perim.points
    return np.hstack([pts[pairs[:, 1]], pts[pairs[:, 0]]])


def assert_side_arrays_match(got, want):
    # atol absorbs exact-fit sides, whose losses are rounding noise near
    # 1e-28 and carry no shared digits between the two backends.
    np.testing.assert_allclose(got[0], want[0], rtol=1e-9, atol=1e-20, equal_nan=True)
    np.testing.assert_allclose(got[1], want[1], rtol=1e-9, atol=1e-20, equal_nan=True)
    assert np.array_equal(np.asarray(got[2], bool), np.asarray(want[2], bool))
    assert np.array_equal(np.asarray(got[3], bool), np.asarray(want[3], bool))


class TestBackendSelection:
    def test_backend_reports_active_impl(self):
        assert kernels.backend() in ("compiled", "python")
        assert kernels.backend() == kernels.BACKEND

    @compiled_only
    def test_compiled_wins_when_present(self):
        from polypart._kernels import _scan

        assert kernels.scan_thresholds_1d is _scan.scan_thresholds_1d
        assert kernels.scan_lines_2d is _scan.scan_lines_2d

    def test_fallback_importable_regardless(self):
        assert pyk.BACKEND == "python"
        sl, sr, okl, okr = pyk.scan_thresholds_1d(
            np.arange(8.0), np.arange(8.0)[:, None], 0, 2, 6
        )
        assert sl.shape == sr.shape == okl.shape == okr.shape == (5,)


@compiled_only
class TestParity1D:
    def test_scalar_targets_across_degrees(self):
        rng = np.random.default_rng(11)
        x = np.sort(rng.uniform(-3.0, 3.0, 200))
        y = (0.5 * x**2 - 2.0 * x + 1.0 + rng.standard_normal(200))[:, None]
        for degree in (0, 1, 2):
            got = kernels.scan_thresholds_1d(x, y, degree, 5, 195)
            want = pyk.scan_thresholds_1d(x, y, degree, 5, 195)
            assert_side_arrays_match(got, want)

    def test_vector_targets(self):
        rng = np.random.default_rng(12)
        x = np.sort(rng.uniform(0.0, 1.0, 120))
        y = np.column_stack([np.sin(3.0 * x), x**3 - x])
        y += 0.05 * rng.standard_normal(y.shape)
        got = kernels.scan_thresholds_1d(x, y, 2, 4, 116)
        want = pyk.scan_thresholds_1d(x, y, 2, 4, 116)
        assert_side_arrays_match(got, want)

    def test_rank_deficient_sides_flagged_alike(self):
        # First five abscissas coincide, so early left sides cannot
        # support a quadratic and both backends must skip them.
        x = np.concatenate([np.zeros(5), np.arange(1.0, 16.0)])
        y = (x + 1.0)[:, None]
        got = kernels.scan_thresholds_1d(x, y, 2, 3, 17)
        want = pyk.scan_thresholds_1d(x, y, 2, 3, 17)
        assert_side_arrays_match(got, want)
        assert not np.asarray(got[2], bool).all()  # the scenario bites


@compiled_only
class TestParity2D:
    def test_bicubic_scan_on_grid(self):
        data = gen_quad_2d()
        lines = candidate_lines(unit_grid())
        expo = np.array(BasisSpec((3, 3)).term_exponents(), dtype=np.int64)
        got = kernels.scan_lines_2d(data.points, data.values, lines, expo, 16)
        want = pyk.scan_lines_2d(data.points, data.values, lines, expo, 16)
        assert_side_arrays_match(got, want)
        assert np.array_equal(got[4], want[4])  # per-line negative-side counts

    def test_vector_targets_small_basis(self):
        data = gen_vector_2d()
        lines = candidate_lines(unit_grid())
        expo = np.array(BasisSpec((1, 1)).term_exponents(), dtype=np.int64)
        got = kernels.scan_lines_2d(data.points, data.values, lines, expo, 4)
        want = pyk.scan_lines_2d(data.points, data.values, lines, expo, 4)
        assert_side_arrays_match(got, want)
        assert np.array_equal(got[4], want[4])


class TestContract:
    """Behavior the engine relies on, checked against the active backend."""

    def test_nan_exactly_where_not_ok(self):
        x = np.concatenate([np.zeros(5), np.arange(1.0, 16.0)])
        y = (x + 1.0)[:, None]
        sl, sr, okl, okr = kernels.scan_thresholds_1d(x, y, 2, 3, 17)
        assert np.array_equal(np.isnan(sl), np.asarray(okl, bool) == False)  # noqa: E712
        assert np.array_equal(np.isnan(sr), np.asarray(okr, bool) == False)  # noqa: E712

    def test_exact_piecewise_constants(self):
        y = np.concatenate([np.zeros(8), np.ones(16)])[:, None]
        x = np.arange(24.0)
        sl, sr, okl, okr = kernels.scan_thresholds_1d(x, y, 0, 4, 20)
        c = 8 - 4
        assert sl[c] <= 1e-24 and sr[c] <= 1e-24
        assert np.asarray(okl, bool).all() and np.asarray(okr, bool).all()

    def test_line_sides_match_orientation_split(self):
        # One diagonal line across the unit grid: the kernel's side sizes
        # must agree with the orientation convention (zeros go positive).
        from polypart.geometry import orient_many

        data = gen_quad_2d()
        line = np.array([[0.0, 1.0, 1.0, 0.0]])
        expo = np.array(BasisSpec((1, 1)).term_exponents(), dtype=np.int64)
        out = kernels.scan_lines_2d(data.points, data.values, line, expo, 4)
        signs = orient_many((0.0, 1.0), (1.0, 0.0), data.points)
        assert out[4][0] == int(np.count_nonzero(signs < 0))

    @compiled_only
    def test_compiled_rejects_candidates_touching_either_end(self):
        x = np.arange(10.0)
        y = x[:, None]
        with pytest.raises(ValueError):
            kernels.scan_thresholds_1d(x, y, 0, 0, 5)
        with pytest.raises(ValueError):
            kernels.scan_thresholds_1d(x, y, 0, 2, 10)

    @compiled_only
    def test_compiled_empty_range_yields_empty_arrays(self):
        x = np.arange(10.0)
        y = x[:, None]
        sl, sr, okl, okr = kernels.scan_thresholds_1d(x, y, 0, 6, 5)
        assert sl.shape == sr.shape == okl.shape == okr.shape == (0,)
