"""Greedy rank-one update solver with an alternating-least-squares inner step.

Each outer iteration fits one Kronecker rank-one correction to the current
residual and subtracts it; the accumulated corrections approximate the
solution of A x = b. Operators are applied matrix-free, so the structured
(Laplacian-like) path never materializes an N x N matrix.
"""

import warnings
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.linalg

from .config import get_config
from .errors import SingularMatrixError, SizeLimitError
from .kron_core import (
    DimSplit,
    LaplacianLike,
    _as_dims,
    _as_matrix,
    _require_finite,
    _require_square,
    lap_matvec,
)

RESIDUAL_BELOW_EPS = "residual_below_eps"
STAGNATION = "stagnation"
RANK_MAX_REACHED = "rank_max_reached"

KIND_DENSE = "dense"
KIND_LAPLACIAN = "laplacian"


@dataclass(eq=False)
class RankOneVector:
    """Length-N vector stored as d Kronecker factor vectors y1 (x) ... (x) yd.

    Stored in normalized form: factors 1..d-1 have unit Euclidean norm and all
    magnitude rides on factor 0. The zero vector is stored with factor 0 = 0.
    """

    dims: DimSplit
    factors: tuple[np.ndarray, ...]
    rank_deficient: bool = field(default=False, compare=False)

    def __post_init__(self):
        dims = _as_dims(self.dims)
        self.dims = dims
        factors = [np.array(f, dtype=float).reshape(-1) for f in self.factors]
        if len(factors) != dims.d:
            raise ValueError(f"expected {dims.d} factor vectors, got {len(factors)}")
        for f, n_i in zip(factors, dims.modes):
            if f.shape != (n_i,):
                raise ValueError(f"factor of length {n_i} expected, got {f.shape}")
            _require_finite(f, "factor")
        scale = 1.0
        degenerate = np.linalg.norm(factors[0]) == 0.0
        for j in range(1, dims.d):
            m = np.linalg.norm(factors[j])
            if m == 0.0:
                degenerate = True
                break
            factors[j] = factors[j] / m
            scale *= m
        if degenerate:
            factors = [np.zeros(dims.modes[0])]
            factors += [_unit_first(n) for n in dims.modes[1:]]
        else:
            factors[0] = factors[0] * scale
        self.factors = tuple(factors)

    @classmethod
    def zeros(cls, dims) -> "RankOneVector":
        dims = _as_dims(dims)
        return cls(dims, tuple(np.zeros(n) for n in dims.modes))

    def to_vector(self) -> np.ndarray:
        return reduce(np.kron, self.factors)


def _unit_first(n: int) -> np.ndarray:
    e = np.zeros(n)
    e[0] = 1.0
    return e


class LinearOperator:
    """Square linear map on R^N, either a dense matrix or a structured form.

    ``kind`` is "dense" or "laplacian"; the laplacian kind applies the operator
    through mode-wise contractions and never builds an N x N matrix.
    """

    def __init__(self, dims: DimSplit, kind: str, matrix=None, laplacian=None):
        self.dims = _as_dims(dims)
        self.kind = kind
        self._matrix = matrix
        self._laplacian = laplacian

    @classmethod
    def from_dense(cls, a, dims) -> "LinearOperator":
        dims = _as_dims(dims)
        a = _as_matrix(a, "matrix")
        _require_square(a)
        _require_finite(a, "matrix")
        if a.shape[0] != dims.n:
            raise ValueError(
                f"matrix side {a.shape[0]} does not match dims {dims.modes} (N={dims.n})"
            )
        return cls(dims, KIND_DENSE, matrix=a)

    @classmethod
    def from_laplacian(cls, lap: LaplacianLike) -> "LinearOperator":
        return cls(lap.dims, KIND_LAPLACIAN, laplacian=lap)

    @property
    def n(self) -> int:
        return self.dims.n

    @property
    def laplacian(self) -> LaplacianLike | None:
        return self._laplacian

    def apply(self, x) -> np.ndarray:
        if self.kind == KIND_DENSE:
            return self._matrix @ x
        return lap_matvec(self._laplacian, x)


@dataclass(eq=False)
class GrouReport:
    """Solve outcome: estimate, per-iteration residual norms, and stop reason."""

    x: np.ndarray
    residual_history: list[float]
    terms_used: int
    stop_reason: str


def _random_unit_factors(dims: DimSplit, rng) -> list[np.ndarray]:
    out = []
    for n in dims.modes:
        v = rng.standard_normal(n)
        m = np.linalg.norm(v)
        while m == 0.0:  # essentially impossible, but keep the invariant airtight
            v = rng.standard_normal(n)
            m = np.linalg.norm(v)
        out.append(v / m)
    return out


def _mode_matrix(op: LinearOperator, factors, k: int) -> np.ndarray:
    """N x n_k matrix whose column j is op applied to y1 (x) .. e_j .. (x) yd."""
    dims = op.dims
    left = reduce(np.kron, factors[:k], np.ones(1))
    right = reduce(np.kron, factors[k + 1:], np.ones(1))
    base = np.outer(left, right)
    n_k = dims.modes[k]
    cols = np.empty((dims.n, n_k))
    buf = np.zeros((left.size, n_k, right.size))
    for j in range(n_k):
        buf[:, j, :] = base
        cols[:, j] = op.apply(buf.reshape(-1))
        buf[:, j, :] = 0.0
    return cols


def als_rank_one(op: LinearOperator, r, iter_max: int = 15, seed: int = 0) -> RankOneVector:
    """Fit a rank-one Kronecker vector y minimizing ||r - A y||_2.

    Cycles through the modes; each step solves that mode's exact linear
    least-squares problem with the other factors fixed (minimum-norm solution
    when the mode matrix is rank-deficient, flagged on the result). Stops
    after ``iter_max`` full passes or when a pass improves the objective by
    less than 1e-14 * ||r||.
    """
    if iter_max < 1:
        raise ValueError("iter_max must be at least 1")
    dims = op.dims
    r = np.asarray(r, dtype=float)
    if r.shape != (dims.n,):
        raise ValueError(f"residual of length {dims.n} expected, got shape {r.shape}")
    r_norm = float(np.linalg.norm(r))
    if r_norm == 0.0:
        return RankOneVector.zeros(dims)
    rng = np.random.default_rng(seed)
    factors = _random_unit_factors(dims, rng)
    rank_deficient = False
    objective = None
    for _ in range(iter_max):
        previous = objective
        went_zero = False
        for k in range(dims.d):
            m = _mode_matrix(op, factors, k)
            sol, _, rank, _ = np.linalg.lstsq(m, r, rcond=None)
            if rank < dims.modes[k]:
                rank_deficient = True
            factors[k] = sol
            objective = float(np.linalg.norm(r - m @ sol))
            if not np.any(sol):
                went_zero = True
                break
        if went_zero:
            break
        if previous is not None and previous - objective < 1e-14 * r_norm:
            break
    return RankOneVector(dims, tuple(factors), rank_deficient=rank_deficient)


def _term_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, i]).generate_state(1)[0])


def grou(
    op: LinearOperator,
    b,
    eps: float = 1e-6,
    tol: float = 2.22e-6,
    rank_max: int = 3000,
    als_iter_max: int = 15,
    seed: int = 0,
) -> GrouReport:
    """Greedy rank-one update solve of A x = b.

    Repeatedly fits the best rank-one correction to the residual and subtracts
    it. Stops when the residual norm falls below ``eps``, when consecutive
    residual norms differ by less than ``tol`` (stagnation), or after
    ``rank_max`` accepted terms. Non-convergence is reported through
    ``stop_reason``, never raised.
    """
    if eps <= 0 or tol <= 0:
        raise ValueError("eps and tol must be positive")
    if rank_max < 1:
        raise ValueError("rank_max must be at least 1")
    b = np.asarray(b, dtype=float)
    if b.shape != (op.n,):
        raise ValueError(f"right-hand side of length {op.n} expected, got shape {b.shape}")
    _require_finite(b, "right-hand side")
    x = np.zeros_like(b)
    r = b.copy()
    history = [float(np.linalg.norm(r))]
    if history[0] < eps:
        return GrouReport(x, history, 0, RESIDUAL_BELOW_EPS)
    stop = RANK_MAX_REACHED
    terms = 0
    for i in range(rank_max):
        y = als_rank_one(op, r, iter_max=als_iter_max, seed=_term_seed(seed, i))
        yv = y.to_vector()
        if not np.any(yv):
            stop = STAGNATION
            break
        r_new = r - op.apply(yv)
        norm_new = float(np.linalg.norm(r_new))
        if norm_new > history[-1]:
            # can only happen at rounding level; refuse the term rather than
            # let the history tick upward
            stop = STAGNATION
            break
        x = x + yv
        r = r_new
        history.append(norm_new)
        terms += 1
        if norm_new < eps:
            stop = RESIDUAL_BELOW_EPS
            break
        if abs(norm_new - history[-2]) < tol:
            stop = STAGNATION
            break
    return GrouReport(x, history, terms, stop)


def direct_solve(a, b) -> np.ndarray:
    """Solve A x = b by pivoted LU elimination (the dense reference path).

    Raises SingularMatrixError when the smallest pivot falls below the
    configured relative tolerance.
    """
    a = _as_matrix(a, "matrix")
    _require_square(a)
    _require_finite(a, "matrix")
    cap = get_config().dense_cap
    if a.shape[0] > cap:
        raise SizeLimitError(
            f"direct solve of size {a.shape[0]} exceeds the configured cap {cap}"
        )
    b = np.asarray(b, dtype=float)
    if b.shape != (a.shape[0],):
        raise ValueError(f"right-hand side of length {a.shape[0]} expected, got shape {b.shape}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a)
    diag = np.abs(np.diag(lu))
    pivot_min = float(diag.min()) if diag.size else 0.0
    pivot_max = float(diag.max()) if diag.size else 0.0
    if pivot_min <= get_config().pivot_tol * max(pivot_max, 1.0):
        raise SingularMatrixError(
            f"matrix is singular to tolerance (min pivot {pivot_min:.3e})",
            pivot=pivot_min,
        )
    return scipy.linalg.lu_solve((lu, piv), b)
