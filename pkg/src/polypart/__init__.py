"""polypart: piecewise polynomial structure discovery.

Recursively partitions 1D/2D sample sets with exhaustively searched
hyperplane boundaries (thresholds in 1D, lines through sampling-grid
perimeter points in 2D), fitting each subdomain with the simplest power
series that survives a complexity-penalized least-squares comparison. A
split is kept only when the two-model loss beats the one-model loss by a
configurable fraction.
"""

from ._kernels import backend
from .data import DataFormatError, SampleSet, read_csv, write_csv
from .engine import (
    BoundaryScore,
    LossSurface1D,
    LossSurface2D,
    PartitionConfig,
    PartitionNode,
    accept_split,
    best_boundary,
    partition,
    score_boundary,
)
from .geometry import (
    GridSpec,
    Line2D,
    PerimeterIndex,
    Threshold1D,
    candidate_lines_2d,
    candidates_1d,
    orient,
    perimeter_points,
    split,
)
from .models import (
    BasisSpec,
    PowerSeriesModel,
    RankDeficientError,
    build_design_matrix,
    evaluate,
    fit,
    predict,
)
from .scoring import (
    ModelFamily,
    PenaltySpec,
    ScoredModel,
    penalty_multiplier,
    reconstruction_loss,
    select_model,
)
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

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "backend",
    "SampleSet",
    "DataFormatError",
    "read_csv",
    "write_csv",
    "BasisSpec",
    "PowerSeriesModel",
    "RankDeficientError",
    "build_design_matrix",
    "fit",
    "predict",
    "evaluate",
    "PenaltySpec",
    "ModelFamily",
    "ScoredModel",
    "penalty_multiplier",
    "reconstruction_loss",
    "select_model",
    "Threshold1D",
    "Line2D",
    "GridSpec",
    "PerimeterIndex",
    "orient",
    "candidates_1d",
    "perimeter_points",
    "candidate_lines_2d",
    "split",
    "PartitionConfig",
    "BoundaryScore",
    "LossSurface1D",
    "LossSurface2D",
    "PartitionNode",
    "score_boundary",
    "best_boundary",
    "accept_split",
    "partition",
    "NoiseSpec",
    "unit_grid",
    "gen_two_domain",
    "gen_three_domain",
    "gen_quad_2d",
    "gen_vector_2d",
    "add_noise",
    "achieved_snr",
]
