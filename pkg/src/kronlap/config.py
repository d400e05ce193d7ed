"""Numeric tolerances and materialization caps.

Every tolerance the library consults lives in one record so callers can tune
them in a single place, either process-wide (`set_config`) or for a scoped
block (`use_config`). The dense materialization cap can also be set through
the ``KRONLAP_DENSE_CAP`` environment variable.
"""

import os
from contextlib import contextmanager
from dataclasses import dataclass, replace

ENV_DENSE_CAP = "KRONLAP_DENSE_CAP"


@dataclass(frozen=True)
class NumericConfig:
    dense_cap: int = 4096          # max side length of any materialized N x N matrix
    kron_max_side: int = 2 ** 20   # max side length of a kron() result
    canonical_tol: float = 1e-12   # per-unit-dimension trace tolerance of canonical factors
    membership_tol: float = 1e-8   # relative residual threshold for subspace membership
    pivot_tol: float = 1e-12       # relative pivot threshold for singularity detection


def default_config() -> NumericConfig:
    """Built-in defaults, with the dense cap taken from the environment if set."""
    cfg = NumericConfig()
    cap = os.environ.get(ENV_DENSE_CAP)
    if cap is not None:
        try:
            cfg = replace(cfg, dense_cap=int(cap))
        except ValueError:
            raise ValueError(f"{ENV_DENSE_CAP} must be an integer, got {cap!r}") from None
    return cfg


_override: NumericConfig | None = None


def get_config() -> NumericConfig:
    return _override if _override is not None else default_config()


def set_config(cfg: NumericConfig | None) -> None:
    """Install a process-wide config; ``None`` restores the defaults."""
    global _override
    _override = cfg


@contextmanager
def use_config(**changes):
    """Temporarily override selected fields of the active config."""
    global _override
    previous = _override
    _override = replace(get_config(), **changes)
    try:
        yield _override
    finally:
        _override = previous
