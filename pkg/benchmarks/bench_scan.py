"""Benchmark the scan kernels: compiled extension vs numpy fallback.

Times the two hot paths the boundary search spends its life in: the 1D
threshold sweep over a noisy two-domain sample and the 2D candidate-line
sweep over the 11x11 grid with the 16-term bicubic basis. Reports the best
wall time over --repeats runs for each available backend.

Run from the repository root:

    python3 benchmarks/bench_scan.py --repeats 5
"""

import argparse
import time

import numpy as np

from polypart import _kernels
from polypart._kernels import _pykernels
from polypart.geometry import candidate_pairs, perimeter_points
from polypart.models import BasisSpec
from polypart.synth import NoiseSpec, add_noise, gen_quad_2d, gen_two_domain, unit_grid


def backends():
    out = [("python", _pykernels)]
    if _kernels.BACKEND == "compiled":
        from polypart._kernels import _scan

        out.insert(0, ("compiled", _scan))
    return out


def best_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_1d(impl, repeats):
    data = add_noise(gen_two_domain(), NoiseSpec(10.0, 0))
    x = data.points[:, 0]
    values = data.values

    def run():
        for degree in (0, 1, 2):
            impl.scan_thresholds_1d(x, values, degree, 4, data.n - 4)

    return best_time(run, repeats)


def bench_2d(impl, repeats):
    data = gen_quad_2d()
    perim = perimeter_points(unit_grid())
    pairs = candidate_pairs(perim)
    pts = perim.points
    lines = np.hstack([pts[pairs[:, 1]], pts[pairs[:, 0]]])
    expo = np.array(BasisSpec((3, 3)).term_exponents(), dtype=np.int64)

    def run():
        impl.scan_lines_2d(data.points, data.values, lines, expo, 17)

    return best_time(run, repeats)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--repeats", type=int, default=5, help="timing repeats per case (default 5)"
    )
    args = parser.parse_args()

    cases = [
        ("1d threshold sweep, n=2001, degrees 0-2", bench_1d),
        ("2d line sweep, 598 lines, 16-term basis", bench_2d),
    ]
    impls = backends()
    print(f"active backend: {_kernels.backend()}")
    for label, bench in cases:
        results = {name: bench(impl, args.repeats) for name, impl in impls}
        line = f"{label}: " + ", ".join(
            f"{name} {secs * 1e3:8.2f} ms" for name, secs in results.items()
        )
        if len(results) == 2:
            line += f"  (speedup {results['python'] / results['compiled']:.1f}x)"
        print(line)


if __name__ == "__main__":
    main()
