"""Synthetic piecewise datasets and exact-SNR noise injection.

The generators produce clean sample sets whose pieces are low-degree
polynomials, so a correctly placed boundary lets the fitting stage recover
each piece exactly. Noise is added separately: a seeded standard-normal
draw is rescaled so the realized signal-to-noise ratio hits the requested
decibel target to floating precision, which keeps noisy datasets fully
reproducible from (target, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import SampleSet
from .geometry import GridSpec, orient_many

__all__ = [
    "NoiseSpec",
    "unit_grid",
    "gen_two_domain",
    "gen_three_domain",
    "gen_quad_2d",
    "gen_vector_2d",
    "VECTOR_LINE_A",
    "VECTOR_LINE_B",
    "add_noise",
    "achieved_snr",
]

# Fixed separating line of the vector-field dataset: crosses the left edge
# of the unit square at y=0.6 and the right edge at y=0.3.
VECTOR_LINE_A = (0.0, 0.6)
VECTOR_LINE_B = (1.0, 0.3)


@dataclass(frozen=True)
class NoiseSpec:
    """Noise target in dB plus the generator seed."""

    snr_db: float
    seed: int

    def __post_init__(self):
        if not math.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


def unit_grid(nx: int = 11, ny: int = 11) -> GridSpec:
    """Uniform grid on the unit square, 11 points per axis by default."""
    return GridSpec(0.0, 1.0, 0.0, 1.0, nx, ny)


def _check_step(step: float) -> None:
    if not 0.0 < step <= 1.0:
        raise ValueError(f"step must be in (0, 1], got {step}")


def gen_two_domain(step: float = 0.01) -> SampleSet:
    """Two-piece 1D curve on [0, 20]: a quadratic, then a line.

    y = 50x^2 - 100x + 250 for x < 10 and y = -50x - 500 from x = 10 on,
    sampled inclusively at the given step.
    """
    _check_step(step)
    n = int(round(20.0 / step)) + 1
    x = np.arange(n) * step
    y = np.where(x < 10.0, 50.0 * x * x - 100.0 * x + 250.0, -50.0 * x - 500.0)
    return SampleSet(x[:, None], y[:, None])


def gen_three_domain(step: float = 0.01) -> SampleSet:
    """Three-piece 1D curve on [0, 30] with breaks at x=10 and x=20.

    y = 50x^2 - 100x + 250 below 10, -30x^2 + 150x - 100 on [10, 20), and
    -50x - 500 from 20 on; each break point takes the right-hand piece.
    """
    _check_step(step)
    n = int(round(30.0 / step)) + 1
    x = np.arange(n) * step
    y = np.select(
        [x < 10.0, x < 20.0],
        [
            50.0 * x * x - 100.0 * x + 250.0,
            -30.0 * x * x + 150.0 * x - 100.0,
        ],
        default=-50.0 * x - 500.0,
    )
    return SampleSet(x[:, None], y[:, None])


def gen_quad_2d(grid: GridSpec = None) -> SampleSet:
    """Two-piece scalar surface split along x + y = 1.05.

    z = -15x^2 + 3x + 4y^2 where x + y <= 1.05, otherwise z = -10x + 12y^3,
    sampled on the given grid (unit 11x11 grid by default).
    """
    if grid is None:
        grid = unit_grid()
    pts = grid.points()
    x = pts[:, 0]
    y = pts[:, 1]
    z1 = -15.0 * x * x + 3.0 * x + 4.0 * y * y
    z2 = -10.0 * x + 12.0 * y**3
    z = np.where(x + y <= 1.05, z1, z2)
    return SampleSet(pts, z[:, None])


def gen_vector_2d(grid: GridSpec = None) -> SampleSet:
    """Two-piece planar vector field split by a fixed oblique line.

    The line runs from (0, 0.6) to (1, 0.3). On its non-negative side
    (above, plus points on the line) the field is the uniform stream
    (u, v) = (1, 0); below it u = 2 + x^2 y^3 and v = 1 + 3xy. Both pieces
    sit inside the bicubic basis, so the true split refits them exactly.
    """
    if grid is None:
        grid = unit_grid()
    pts = grid.points()
    x = pts[:, 0]
    y = pts[:, 1]
    upper = orient_many(VECTOR_LINE_A, VECTOR_LINE_B, pts) >= 0
    u = np.where(upper, 1.0, 2.0 + x**2 * y**3)
    v = np.where(upper, 0.0, 1.0 + 3.0 * x * y)
    return SampleSet(pts, np.column_stack([u, v]))


def add_noise(clean: SampleSet, spec: NoiseSpec) -> SampleSet:
    """Add white noise rescaled to hit the SNR target exactly.

    The seeded standard-normal draw is scaled so the realized noise energy
    equals signal_energy / 10^(snr_db/10); the achieved ratio then matches
    the target to floating precision.
    """
    signal = float(np.sum(clean.values * clean.values))
    if signal == 0.0:
        raise ValueError("clean signal is identically zero, SNR is undefined")
    rng = np.random.default_rng(spec.seed)
    noise = rng.standard_normal(clean.values.shape)
    energy = float(np.sum(noise * noise))
    if energy == 0.0:
        raise ValueError("degenerate zero noise draw")
    target = signal / 10.0 ** (spec.snr_db / 10.0)
    noise *= math.sqrt(target / energy)
    return SampleSet(clean.points, clean.values + noise)


def achieved_snr(clean: SampleSet, noisy: SampleSet) -> float:
    """Realized signal-to-noise ratio in dB between a clean/noisy pair."""
    if clean.points.shape != noisy.points.shape or clean.values.shape != noisy.values.shape:
        raise ValueError("clean and noisy sample sets differ in shape")
    signal = float(np.sum(clean.values * clean.values))
    if signal == 0.0:
        raise ValueError("clean signal is identically zero, SNR is undefined")
    resid = noisy.values - clean.values
    noise = float(np.sum(resid * resid))
    if noise == 0.0:
        raise ValueError("zero noise energy, SNR is infinite")
    return 10.0 * math.log10(signal / noise)
