"""Kronecker-structured (Laplacian-like) matrix decomposition and solvers.

The package decomposes square matrices into their best approximation by sums
of identity-padded single-mode factors, and solves linear systems with a
greedy rank-one update method whose inner step is alternating least squares.
"""

from .config import NumericConfig, default_config, get_config, set_config, use_config
from .errors import (
    KronlapError,
    MatrixMarketError,
    PreconditionError,
    SingularMatrixError,
    SizeLimitError,
)
from .grou import (
    GrouReport,
    LinearOperator,
    RankOneVector,
    RANK_MAX_REACHED,
    RESIDUAL_BELOW_EPS,
    STAGNATION,
    als_rank_one,
    direct_solve,
    grou,
)
from .kron_core import (
    DimSplit,
    FactorGroupElement,
    LaplacianLike,
    dense_exp,
    embed,
    frobenius_inner,
    frobenius_norm,
    kron,
    lap_exp,
    lap_matvec,
    lap_to_dense,
    lie_bracket,
    partial_trace,
)
from .lap_project import (
    MembershipResult,
    ProjectionReport,
    identity_component,
    laplacian_distance,
    mode_projection,
    project_delta_sweeps,
    project_laplacian,
)
from .mmio import read_matrix_market, write_matrix_market
from .poisson import (
    PoissonProblem,
    bench_poisson,
    build_poisson,
    exact_solution,
    forcing,
    poisson1d_stencil,
)

__version__ = "0.1.0"

__all__ = [
    "DimSplit",
    "FactorGroupElement",
    "GrouReport",
    "KronlapError",
    "LaplacianLike",
    "LinearOperator",
    "MatrixMarketError",
    "MembershipResult",
    "NumericConfig",
    "PoissonProblem",
    "PreconditionError",
    "ProjectionReport",
    "RANK_MAX_REACHED",
    "RESIDUAL_BELOW_EPS",
    "RankOneVector",
    "STAGNATION",
    "SingularMatrixError",
    "SizeLimitError",
    "als_rank_one",
    "bench_poisson",
    "build_poisson",
    "default_config",
    "dense_exp",
    "direct_solve",
    "embed",
    "exact_solution",
    "forcing",
    "frobenius_inner",
    "frobenius_norm",
    "get_config",
    "grou",
    "identity_component",
    "kron",
    "lap_exp",
    "lap_matvec",
    "lap_to_dense",
    "laplacian_distance",
    "lie_bracket",
    "mode_projection",
    "partial_trace",
    "poisson1d_stencil",
    "project_delta_sweeps",
    "project_laplacian",
    "read_matrix_market",
    "set_config",
    "use_config",
    "write_matrix_market",
]
