"""Command-line interface: dataset generation, partitioning, loss surfaces.

Exit codes are a stable contract: 0 success, 1 usage error, 2 data or IO
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import numpy as np

from . import __version__
from ._kernels import backend
from .data import _CSV_LAYOUTS, DataFormatError, read_csv, write_csv
from .engine import (
    LossSurface1D,
    PartitionConfig,
    _boundary_dict,
    best_boundary,
    partition,
)
from .geometry import GridSpec
from .models import BasisSpec, RankDeficientError
from .scoring import ModelFamily, PenaltySpec
from .synth import (
    NoiseSpec,
    achieved_snr,
    add_noise,
    gen_quad_2d,
    gen_three_domain,
    gen_two_domain,
    gen_vector_2d,
    unit_grid,
)

__all__ = ["main"]

_EXIT_USAGE = 1
_EXIT_DATA = 2
_EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract reserves 2 for data
    # errors, so route usage failures to exit code 1 instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sniff_dim(path) -> int:
    """Input dimension from the CSV header alone."""
    with open(path, "r", newline="") as fh:
        try:
            header = next(csv.reader(fh))
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
    key = tuple(h.strip() for h in header)
    if key not in _CSV_LAYOUTS:
        raise DataFormatError(
            f"{path}: unrecognized header {','.join(key)!r}; expected one of "
            "x,y / x,y,z / x,y,u,v"
        )
    return _CSV_LAYOUTS[key][0]


def _infer_grid(data) -> GridSpec:
    """Recover the rectangular sampling grid behind a 2D sample set.

    Candidate boundary lines anchor on grid perimeter points, so 2D inputs
    must be complete uniform grids.
    """
    xs = np.unique(data.points[:, 0])
    ys = np.unique(data.points[:, 1])
    if len(xs) < 2 or len(ys) < 2:
        raise DataFormatError("2D input does not span a grid on both axes")
    if len(xs) * len(ys) != data.n:
        raise DataFormatError(
            f"2D input is not a complete rectangular grid: {len(xs)} x "
            f"{len(ys)} grid points but {data.n} samples"
        )
    if np.unique(data.points, axis=0).shape[0] != data.n:
        raise DataFormatError("2D input contains duplicate sample points")
    for name, coords in (("x", xs), ("y", ys)):
        steps = np.diff(coords)
        span = coords[-1] - coords[0]
        if np.max(np.abs(steps - steps[0])) > 1e-9 * span:
            raise DataFormatError(f"{name} grid coordinates are not uniform")
    return GridSpec(
        float(xs[0]), float(xs[-1]), float(ys[0]), float(ys[-1]), len(xs), len(ys)
    )


def _config_for(args, data) -> PartitionConfig:
    if data.d == 1:
        family = ModelFamily.up_to_degree(args.max_degree)
        penalty = PenaltySpec.affine(args.penalty_alpha, args.max_degree)
        grid = None
    else:
        family = ModelFamily.single(
            BasisSpec((args.max_degree_x, args.max_degree_y))
        )
        penalty = PenaltySpec.flat()
        grid = _infer_grid(data)
    return PartitionConfig(
        family=family,
        penalty=penalty,
        q=args.q,
        min_points=args.min_points,
        max_depth=args.max_depth,
        grid=grid,
    )


def _config_dict(cfg: PartitionConfig, dim: int) -> dict:
    if cfg.penalty.kind == "affine":
        pen = {
            "kind": "affine",
            "alpha": cfg.penalty.alpha,
            "k_max": cfg.penalty.k_max,
        }
    elif cfg.penalty.kind == "table":
        pen = {"kind": "table", "mapping": [list(kv) for kv in cfg.penalty.mapping]}
    else:
        pen = {"kind": "flat"}
    grid = None
    if cfg.grid is not None:
        grid = {
            "x_min": cfg.grid.x_min,
            "x_max": cfg.grid.x_max,
            "y_min": cfg.grid.y_min,
            "y_max": cfg.grid.y_max,
            "nx": cfg.grid.nx,
            "ny": cfg.grid.ny,
        }
    return {
        "dim": dim,
        "family": [list(b.degrees) for b in cfg.family.members],
        "penalty": pen,
        "q": cfg.q,
        "min_points": cfg.min_points,
        "max_depth": cfg.max_depth,
        "grid": grid,
    }


def _read_input(args):
    dim = args.dim if args.dim is not None else _sniff_dim(args.input)
    return read_csv(args.input, dim)


def cmd_generate(args) -> int:
    if args.system in ("two-domain", "three-domain"):
        gen = gen_two_domain if args.system == "two-domain" else gen_three_domain
        data = gen(step=args.step)
    else:
        grid = unit_grid(args.nx, args.ny)
        data = gen_quad_2d(grid) if args.system == "quad-2d" else gen_vector_2d(grid)
    if args.snr is not None:
        clean = data
        data = add_noise(clean, NoiseSpec(args.snr, args.seed))
        note = f", snr {achieved_snr(clean, data):.6f} dB (seed {args.seed})"
    else:
        note = ", clean"
    write_csv(data, args.out)
    print(f"wrote {data.n} samples to {args.out}{note}")
    return 0


def cmd_partition(args) -> int:
    data = _read_input(args)
    cfg = _config_for(args, data)
    t0 = time.perf_counter()
    tree = partition(data, cfg)
    elapsed = time.perf_counter() - t0
    boundaries = [_boundary_dict(n.boundary) for n in tree.internal_nodes()]
    leaves = [
        {
            "id": leaf.node_id,
            "n": leaf.samples.n,
            "degrees": list(leaf.scored.model.basis.degrees),
            "loss": {
                "raw": leaf.scored.raw_loss,
                "effective": leaf.scored.effective_loss,
            },
        }
        for leaf in tree.leaves()
    ]
    report = {
        "input": str(args.input),
        "backend": backend(),
        "config": _config_dict(cfg, data.d),
        "n": data.n,
        "elapsed_s": elapsed,
        "tree": tree.to_dict(),
        "boundaries": boundaries,
        "leaves": leaves,
    }
    with open(args.out, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(
        f"{len(leaves)} leaves, {len(boundaries)} boundaries in "
        f"{elapsed:.3f}s ({backend()} backend) -> {args.out}"
    )
    return 0


def cmd_loss_surface(args) -> int:
    data = _read_input(args)
    cfg = _config_for(args, data)
    _, surface = best_boundary(data, cfg)
    if isinstance(surface, LossSurface1D):
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["threshold", "total_loss"])
            for t, total in zip(surface.thresholds, surface.totals):
                writer.writerow(
                    [repr(float(t)), "" if np.isnan(total) else repr(float(total))]
                )
        print(f"wrote {len(surface.thresholds)} threshold scores to {args.out}")
        return 0
    stem, dot, _ = str(args.out).rpartition(".")
    sidecar = (stem if dot else str(args.out)) + ".perimeter.csv"
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["i", "j", "total_loss"])
        for (ia, ib), total in zip(surface.pairs, surface.totals):
            writer.writerow(
                [int(ia), int(ib), "" if np.isnan(total) else repr(float(total))]
            )
    with open(sidecar, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "x", "y", "edge"])
        for idx, (pt, edge) in enumerate(
            zip(surface.perimeter.points, surface.perimeter.edges)
        ):
            writer.writerow(
                [idx, repr(float(pt[0])), repr(float(pt[1])), int(edge)]
            )
    print(
        f"wrote {surface.pairs.shape[0]} line scores to {args.out} "
        f"(perimeter table: {sidecar})"
    )
    return 0


def _add_model_flags(sub) -> None:
    sub.add_argument(
        "--dim",
        type=int,
        choices=(1, 2),
        default=None,
        help="input dimension (default: inferred from the CSV header)",
    )
    sub.add_argument(
        "--max-degree",
        type=int,
        default=2,
        help="1D inputs: largest degree cap in the model family (default 2)",
    )
    sub.add_argument(
        "--max-degree-x",
        type=int,
        default=3,
        help="2D inputs: degree cap along x (default 3)",
    )
    sub.add_argument(
        "--max-degree-y",
        type=int,
        default=3,
        help="2D inputs: degree cap along y (default 3)",
    )
    sub.add_argument(
        "--penalty-alpha",
        type=float,
        default=0.15,
        help="1D inputs: slope of the affine complexity penalty (default 0.15)",
    )
    sub.add_argument(
        "--q",
        type=float,
        default=0.10,
        help="minimum fractional loss improvement to accept a split "
        "(default 0.10)",
    )
    sub.add_argument(
        "--min-points",
        type=int,
        default=None,
        help="smallest admissible side size (default: largest term count + 1)",
    )
    sub.add_argument(
        "--max-depth",
        type=int,
        default=16,
        help="recursion depth cap (default 16)",
    )
    sub.add_argument("--out", required=True, help="output file path")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="polypart",
        description=(
            "Discover piecewise polynomial structure by recursive "
            "hyperplane partitioning."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = subs.add_parser("generate", help="write a synthetic dataset as CSV")
    gen.add_argument(
        "system",
        choices=("two-domain", "three-domain", "quad-2d", "vector-2d"),
        help="which synthetic system to sample",
    )
    gen.add_argument(
        "--step",
        type=float,
        default=0.01,
        help="1D sample spacing (default 0.01)",
    )
    gen.add_argument(
        "--nx", type=int, default=11, help="2D grid points along x (default 11)"
    )
    gen.add_argument(
        "--ny", type=int, default=11, help="2D grid points along y (default 11)"
    )
    gen.add_argument(
        "--snr",
        type=float,
        default=None,
        help="add white noise at this SNR in dB (default: clean)",
    )
    gen.add_argument(
        "--seed", type=int, default=0, help="noise generator seed (default 0)"
    )
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.set_defaults(func=cmd_generate)

    part = subs.add_parser(
        "partition", help="partition a CSV dataset and write a JSON report"
    )
    part.add_argument("input", help="input CSV (x,y / x,y,z / x,y,u,v)")
    _add_model_flags(part)
    part.set_defaults(func=cmd_partition)

    surf = subs.add_parser(
        "loss-surface",
        help="score every candidate boundary of the root domain to CSV",
    )
    surf.add_argument("input", help="input CSV (x,y / x,y,z / x,y,u,v)")
    _add_model_flags(surf)
    surf.set_defaults(func=cmd_loss_surface)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataFormatError as exc:
        print(f"polypart: data error: {exc}", file=sys.stderr)
        return _EXIT_DATA
    except (RankDeficientError, FloatingPointError) as exc:
        print(f"polypart: numerical failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC
    except OSError as exc:
        print(f"polypart: {exc}", file=sys.stderr)
        return _EXIT_DATA
    except ValueError as exc:
        print(f"polypart: invalid configuration: {exc}", file=sys.stderr)
        return _EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
