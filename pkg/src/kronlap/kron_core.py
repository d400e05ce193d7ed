"""Kronecker-product primitives and the structured Laplacian-like representation.

The mode convention is fixed once here and shared by every module: a vector of
length N = n1*...*nd reshapes row-major to an (n1, ..., nd) array, so mode 0 is
the slowest-varying axis and `kron(A, B)` applies A on mode 0 and B on mode 1.
Mode indices are 0-based throughout.
"""

import math
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from .config import get_config
from .errors import SingularMatrixError, SizeLimitError


def _as_matrix(a, name="matrix") -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={m.ndim}")
    return m

def _require_square(m, name="matrix"):
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")

def _require_finite(m, name="matrix"):
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")


@dataclass(frozen=True)
class DimSplit:
    """Mode sizes (n1, ..., nd) of a tensorized ambient space of size N = n1*...*nd.

    Modes of size 1 are rejected when d >= 2: they make the per-mode traceless
    complement trivial and the direct-sum decomposition degenerate.
    """

    modes: tuple[int, ...]

    def __post_init__(self):
        modes = tuple(int(n) for n in self.modes)
        object.__setattr__(self, "modes", modes)
        if len(modes) < 1:
            raise ValueError("at least one mode is required")
        if any(n < 1 for n in modes):
            raise ValueError(f"mode sizes must be positive, got {modes}")
        if len(modes) >= 2 and any(n < 2 for n in modes):
            raise ValueError(f"modes of size 1 are degenerate when d >= 2, got {modes}")

    @property
    def d(self) -> int:
        return len(self.modes)

    @property
    def n(self) -> int:
        return math.prod(self.modes)

    def left_size(self, i: int) -> int:
        return math.prod(self.modes[:i])

    def right_size(self, i: int) -> int:
        return math.prod(self.modes[i + 1:])

    def check_mode(self, i: int):
        if not 0 <= i < self.d:
            raise IndexError(f"mode index {i} out of range for {self.d} modes")

    def __iter__(self):
        return iter(self.modes)

    def __len__(self):
        return len(self.modes)


def _as_dims(dims) -> DimSplit:
    return dims if isinstance(dims, DimSplit) else DimSplit(tuple(dims))


def kron(a, b) -> np.ndarray:
    """Kronecker product of two dense matrices.

    Entry [(i*Br + k), (j*Bc + l)] of the result is a[i, j] * b[k, l].
    """
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    cap = get_config().kron_max_side
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > cap or cols > cap:
        raise SizeLimitError(
            f"kron result {rows}x{cols} exceeds the configured side cap {cap}"
        )
    return np.kron(a, b)


def embed(i: int, x, dims) -> np.ndarray:
    """Pad a single-mode square matrix with identities on every other mode.

    Returns the N x N matrix id (x) ... (x) x (x) ... (x) id with ``x`` in
    slot ``i`` (0-based).
    """
    dims = _as_dims(dims)
    dims.check_mode(i)
    x = _as_matrix(x, "factor")
    n_i = dims.modes[i]
    if x.shape != (n_i, n_i):
        raise ValueError(f"factor for mode {i} must be {n_i}x{n_i}, got {x.shape}")
    cap = get_config().dense_cap
    if dims.n > cap:
        raise SizeLimitError(
            f"dense materialization of size {dims.n} exceeds the configured cap {cap}"
        )
    return np.kron(np.eye(dims.left_size(i)), np.kron(x, np.eye(dims.right_size(i))))


def frobenius_inner(a, b) -> float:
    """Frobenius (trace) inner product sum_ij a[i,j] * b[i,j] = tr(a^T b)."""
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.sum(a * b))


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(_as_matrix(a)))


def partial_trace(a, dims, i: int) -> np.ndarray:
    """Contract an N x N matrix over every mode except ``i``.

    This is the adjoint of :func:`embed` under the Frobenius inner product:
    ``frobenius_inner(embed(i, X, dims), A) == frobenius_inner(X, partial_trace(A, dims, i))``
    and it preserves the total trace.
    """
    dims = _as_dims(dims)
    dims.check_mode(i)
    a = _as_matrix(a, "matrix")
    _require_square(a)
    if a.shape[0] != dims.n:
        raise ValueError(f"matrix side {a.shape[0]} does not match N={dims.n}")
    t = a.reshape(dims.modes * 2)
    d = dims.d
    sub = list(range(d)) + [j if j != i else d for j in range(d)]
    return np.einsum(t, sub, [i, d])


@dataclass(frozen=True, eq=False)
class LaplacianLike:
    """Canonical structured form alpha*id_N + sum_i embed(i, factors[i]).

    Factors are stored traceless; the identity component of every mode lives in
    ``alpha``. This makes the representation unique, so two values describe the
    same operator exactly when their fields match. Use :meth:`from_factors`
    to build one from arbitrary (not necessarily traceless) factors.
    """

    dims: DimSplit
    alpha: float
    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = _as_dims(self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "alpha", float(self.alpha))
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        factors = tuple(np.array(f, dtype=float) for f in self.factors)
        if len(factors) != dims.d:
            raise ValueError(f"expected {dims.d} factors, got {len(factors)}")
        tol = get_config().canonical_tol
        for i, (f, n_i) in enumerate(zip(factors, dims.modes)):
            if f.shape != (n_i, n_i):
                raise ValueError(f"factor {i} must be {n_i}x{n_i}, got {f.shape}")
            _require_finite(f, f"factor {i}")
            if abs(float(np.trace(f))) > tol * n_i:
                raise ValueError(
                    f"factor {i} has trace {np.trace(f)!r}; canonical factors are "
                    "traceless (build with LaplacianLike.from_factors)"
                )
            f.flags.writeable = False
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_factors(cls, dims, factors, alpha: float = 0.0) -> "LaplacianLike":
        """Canonicalize arbitrary square factors: move tr(F_i)/n_i into alpha."""
        dims = _as_dims(dims)
        a = float(alpha)
        canon = []
        factors = tuple(factors)
        if len(factors) != dims.d:
            raise ValueError(f"expected {dims.d} factors, got {len(factors)}")
        for f, n_i in zip(factors, dims.modes):
            f = _as_matrix(f, "factor")
            if f.shape != (n_i, n_i):
                raise ValueError(f"factor must be {n_i}x{n_i}, got {f.shape}")
            shift = float(np.trace(f)) / n_i
            a += shift
            canon.append(f - shift * np.eye(n_i))
        return cls(dims, a, tuple(canon))

    @classmethod
    def zeros(cls, dims, alpha: float = 0.0) -> "LaplacianLike":
        dims = _as_dims(dims)
        return cls(dims, alpha, tuple(np.zeros((n, n)) for n in dims.modes))

    @property
    def n(self) -> int:
        return self.dims.n


def lap_to_dense(lap: LaplacianLike) -> np.ndarray:
    """Materialize the represented N x N matrix (subject to the dense cap)."""
    n = lap.dims.n
    cap = get_config().dense_cap
    if n > cap:
        raise SizeLimitError(
            f"dense materialization of size {n} exceeds the configured cap {cap}"
        )
    out = lap.alpha * np.eye(n)
    for i, f in enumerate(lap.factors):
        out += embed(i, f, lap.dims)
    return out


def lap_matvec(lap: LaplacianLike, x) -> np.ndarray:
    """Apply the structured operator to a vector without materializing it.

    One tensor contraction per mode: O(N * sum_i n_i) work, no N x N storage.
    """
    x = np.asarray(x, dtype=float)
    n = lap.dims.n
    if x.shape != (n,):
        raise ValueError(f"vector of length {n} expected, got shape {x.shape}")
    t = x.reshape(lap.dims.modes)
    out = lap.alpha * t
    for i, f in enumerate(lap.factors):
        out = out + np.moveaxis(np.tensordot(f, t, axes=(1, i)), 0, i)
    return out.reshape(-1)


def lie_bracket(l1: LaplacianLike, l2: LaplacianLike) -> LaplacianLike:
    """Commutator of two structured operators, computed mode-wise.

    Identity parts commute with everything and cross-mode terms cancel, so the
    bracket has alpha = 0 and per-mode factors [A_i, B_i] = A_i B_i - B_i A_i.
    """
    if l1.dims != l2.dims:
        raise ValueError(f"dims mismatch: {l1.dims.modes} vs {l2.dims.modes}")
    factors = []
    for a, b in zip(l1.factors, l2.factors):
        c = a @ b - b @ a
        # tr[A,B] = 0 exactly; remove the float dust so the canonical check holds
        c -= (np.trace(c) / c.shape[0]) * np.eye(c.shape[0])
        factors.append(c)
    return LaplacianLike(l1.dims, 0.0, tuple(factors))


@dataclass(frozen=True, eq=False)
class FactorGroupElement:
    """Invertible pure Kronecker product kron_i factors[i]."""

    dims: DimSplit
    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = _as_dims(self.dims)
        object.__setattr__(self, "dims", dims)
        factors = tuple(np.array(f, dtype=float) for f in self.factors)
        if len(factors) != dims.d:
            raise ValueError(f"expected {dims.d} factors, got {len(factors)}")
        tol = get_config().pivot_tol
        for i, (f, n_i) in enumerate(zip(factors, dims.modes)):
            if f.shape != (n_i, n_i):
                raise ValueError(f"factor {i} must be {n_i}x{n_i}, got {f.shape}")
            _require_finite(f, f"factor {i}")
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
                lu, _ = scipy.linalg.lu_factor(f)
            piv = np.abs(np.diag(lu))
            if piv.min() <= tol * max(piv.max(), 1.0):
                raise SingularMatrixError(
                    f"factor {i} is singular to tolerance (min pivot {piv.min():.3e})",
                    pivot=float(piv.min()),
                )
            f.flags.writeable = False
        object.__setattr__(self, "factors", factors)

    def to_dense(self) -> np.ndarray:
        n = self.dims.n
        cap = get_config().dense_cap
        if n > cap:
            raise SizeLimitError(
                f"dense materialization of size {n} exceeds the configured cap {cap}"
            )
        return reduce(np.kron, self.factors)


def lap_exp(lap: LaplacianLike) -> FactorGroupElement:
    """Exponential of a structured operator, as a pure Kronecker product.

    All the summands commute, so exp(alpha*id + sum_i embed(A_i)) factors as
    e^alpha * kron_i exp(A_i); the scalar e^alpha is folded into factor 0.
    """
    facs = [scipy.linalg.expm(np.asarray(f)) for f in lap.factors]
    facs[0] = math.exp(lap.alpha) * facs[0]
    return FactorGroupElement(lap.dims, tuple(facs))


def dense_exp(a, tol: float = 1e-12) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring of a truncated power series.

    A desk-scale reference routine, not a production exponential: the series is
    summed until the next term is below ``tol`` relative to the running sum,
    then the result is squared back up.
    """
    a = _as_matrix(a, "matrix")
    _require_square(a)
    if tol <= 0:
        raise ValueError("tol must be positive")
    cap = get_config().dense_cap
    if a.shape[0] > cap:
        raise SizeLimitError(
            f"dense exponential of size {a.shape[0]} exceeds the configured cap {cap}"
        )
    norm = np.linalg.norm(a, 1)
    squarings = max(0, int(np.ceil(np.log2(norm)))) if norm > 1.0 else 0
    b = a / (2.0 ** squarings)
    n = a.shape[0]
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, 128):
        term = term @ b / k
        out = out + term
        if np.linalg.norm(term) <= tol * np.linalg.norm(out):
            break
    for _ in range(squarings):
        out = out @ out
    return out
