"""Generate the bundled stress-strain demo dataset.

Writes data/stress_strain.csv: a two-regime tensile curve with a linear
elastic ramp up to the yield strain and a quadratic post-yield drop,
plus seeded white noise at a fixed SNR.  Rerunning this script
reproduces the committed file byte for byte.
"""

import argparse
import pathlib

import numpy as np

from polypart.data import SampleSet, write_csv
from polypart.synth import NoiseSpec, add_noise

YIELD_STRAIN = 0.08
ELASTIC_SLOPE = 90.0
FAILURE_SLOPE = -100.0
FAILURE_CURVATURE = -1000.0
STEP = 0.0001
MAX_STRAIN = 0.14
SNR_DB = 25.0
SEED = 7


def clean_curve() -> SampleSet:
    n = round(MAX_STRAIN / STEP) + 1
    strain = np.arange(n) * STEP
    peak = ELASTIC_SLOPE * YIELD_STRAIN
    post = strain - YIELD_STRAIN
    stress = np.where(
        strain < YIELD_STRAIN,
        ELASTIC_SLOPE * strain,
        peak + FAILURE_SLOPE * post + FAILURE_CURVATURE * post * post,
    )
    return SampleSet(strain.reshape(-1, 1), stress.reshape(-1, 1))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        type=pathlib.Path,
        default=pathlib.Path(__file__).resolve().parent.parent / "data" / "stress_strain.csv",
    )
    args = parser.parse_args()
    noisy = add_noise(clean_curve(), NoiseSpec(snr_db=SNR_DB, seed=SEED))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(noisy, args.out)
    print(f"wrote {args.out} ({noisy.n} rows)")


if __name__ == "__main__":
    main()
