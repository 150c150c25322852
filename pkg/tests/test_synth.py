"""Synthetic dataset generators and exact-SNR noise injection."""

import numpy as np
import pytest

from polypart.geometry import GridSpec
from polypart.synth import (
    NoiseSpec,
    achieved_snr,
    add_noise,
    gen_quad_2d,
    gen_three_domain,
    gen_two_domain,
    gen_vector_2d,
    unit_grid,
)


def value_at(data, x):
    idx = np.flatnonzero(data.points[:, 0] == x)
    assert len(idx) == 1, f"x={x} not a sample point"
    return data.values[idx[0], 0]


def value_at_2d(data, x, y):
    # grid coordinates come from linspace and may sit 1 ulp off the literal
    hit = np.isclose(data.points[:, 0], x, atol=1e-12) & np.isclose(
        data.points[:, 1], y, atol=1e-12
    )
    idx = np.flatnonzero(hit)
    assert len(idx) == 1
    return data.values[idx[0]]


class TestTwoDomain:
    def test_grid_shape(self):
        data = gen_two_domain()
        assert data.n == 2001
        assert data.points[0, 0] == 0.0
        assert data.points[-1, 0] == 20.0

    def test_branch_values(self):
        data = gen_two_domain()
        # quadratic branch: 50x^2 - 100x + 250
        assert value_at(data, 0.0) == 250.0
        assert value_at(data, 5.0) == 1000.0
        # switch happens at exactly x=10: linear branch -50x - 500
        assert value_at(data, 10.0) == -1000.0
        assert value_at(data, 15.0) == -1250.0
        assert value_at(data, 20.0) == -1500.0

    def test_step_controls_density(self):
        assert gen_two_domain(step=0.1).n == 201


class TestThreeDomain:
    def test_grid_shape(self):
        data = gen_three_domain()
        assert data.n == 3001
        assert data.points[-1, 0] == 30.0

    def test_branch_values(self):
        data = gen_three_domain()
        assert value_at(data, 5.0) == 1000.0
        # middle branch -30x^2 + 150x - 100 owns [10, 20)
        assert value_at(data, 10.0) == -1600.0
        assert value_at(data, 15.0) == -4600.0
        # last branch -50x - 500 owns [20, 30]
        assert value_at(data, 20.0) == -1500.0
        assert value_at(data, 30.0) == -2000.0


class TestQuad2D:
    def test_default_grid_is_11x11(self):
        data = gen_quad_2d()
        assert data.n == 121
        assert data.d == 2 and data.m == 1

    def test_branch_values(self):
        data = gen_quad_2d()
        # z1 = -15x^2 + 3x + 4y^2 where x + y <= 1.05, else z2 = -10x + 12y^3
        assert value_at_2d(data, 0.0, 0.0)[0] == 0.0
        np.testing.assert_allclose(value_at_2d(data, 0.5, 0.5)[0], -1.25)
        np.testing.assert_allclose(value_at_2d(data, 1.0, 1.0)[0], 2.0)

    def test_membership_split_counts(self):
        data = gen_quad_2d()
        sums = data.points[:, 0] + data.points[:, 1]
        assert int(np.count_nonzero(sums <= 1.05)) == 66

    def test_custom_grid(self):
        data = gen_quad_2d(GridSpec(0, 1, 0, 1, 5, 5))
        assert data.n == 25


class TestVector2D:
    def test_two_output_components(self):
        data = gen_vector_2d()
        assert data.n == 121
        assert data.m == 2

    def test_free_stream_side(self):
        data = gen_vector_2d()
        # (0,1) sits above the (0,0.6)-(1,0.3) line: uniform flow (1, 0)
        np.testing.assert_allclose(value_at_2d(data, 0.0, 1.0), [1.0, 0.0])
        # the line's own anchor rides with the free-stream side
        np.testing.assert_allclose(value_at_2d(data, 0.0, 0.6), [1.0, 0.0])

    def test_complex_flow_side(self):
        data = gen_vector_2d()
        # (1,0) falls below the line: u = 2 + x^2 y^3, v = 1 + 3xy
        np.testing.assert_allclose(value_at_2d(data, 1.0, 0.0), [2.0, 1.0])
        np.testing.assert_allclose(
            value_at_2d(data, 1.0, 0.2), [2.0 + 0.2**3, 1.0 + 0.6]
        )


class TestUnitGrid:
    def test_default(self):
        grid = unit_grid()
        assert (grid.nx, grid.ny) == (11, 11)
        assert grid.xs()[-1] == 1.0


class TestAddNoise:
    def test_round_trip_across_targets(self):
        clean = gen_two_domain()
        for target in (0.0, 5.0, 10.0, 20.0, 40.0):
            noisy = add_noise(clean, NoiseSpec(snr_db=target, seed=3))
            assert abs(achieved_snr(clean, noisy) - target) <= 1e-9

    def test_noise_energy_is_exact_fraction_of_signal(self):
        clean = gen_two_domain()
        noisy = add_noise(clean, NoiseSpec(snr_db=10.0, seed=1))
        signal = float(np.sum(clean.values**2))
        noise = float(np.sum((noisy.values - clean.values) ** 2))
        np.testing.assert_allclose(noise, signal / 10.0, rtol=1e-12)

    def test_deterministic_per_seed(self):
        clean = gen_three_domain(step=0.05)
        a = add_noise(clean, NoiseSpec(10.0, 42))
        b = add_noise(clean, NoiseSpec(10.0, 42))
        assert np.array_equal(a.values, b.values)

    def test_seeds_differ(self):
        clean = gen_three_domain(step=0.05)
        a = add_noise(clean, NoiseSpec(10.0, 1))
        b = add_noise(clean, NoiseSpec(10.0, 2))
        assert not np.array_equal(a.values, b.values)

    def test_points_untouched(self):
        clean = gen_quad_2d()
        noisy = add_noise(clean, NoiseSpec(20.0, 0))
        assert np.array_equal(clean.points, noisy.points)

    def test_vector_signal_noised_across_all_components(self):
        clean = gen_vector_2d()
        noisy = add_noise(clean, NoiseSpec(15.0, 9))
        assert np.all(noisy.values != clean.values)
        assert abs(achieved_snr(clean, noisy) - 15.0) <= 1e-9

    def test_zero_signal_rejected(self):
        from polypart.data import SampleSet

        flat = SampleSet(np.arange(5.0).reshape(-1, 1), np.zeros((5, 1)))
        with pytest.raises(ValueError):
            add_noise(flat, NoiseSpec(10.0, 0))

    def test_negative_seed_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(10.0, -1)

    def test_non_finite_snr_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(float("inf"), 0)


class TestAchievedSnr:
    def test_matches_definition(self):
        clean = gen_two_domain(step=0.1)
        noisy = add_noise(clean, NoiseSpec(7.5, 4))
        signal = float(np.sum(clean.values**2))
        noise = float(np.sum((noisy.values - clean.values) ** 2))
        np.testing.assert_allclose(
            achieved_snr(clean, noisy), 10.0 * np.log10(signal / noise), rtol=1e-15
        )

    def test_identical_data_rejected(self):
        clean = gen_two_domain(step=0.1)
        with pytest.raises(ValueError):
            achieved_snr(clean, clean)

    def test_shape_mismatch_rejected(self):
        a = gen_two_domain(step=0.1)
        b = gen_two_domain(step=0.2)
        with pytest.raises(ValueError):
            achieved_snr(a, b)
