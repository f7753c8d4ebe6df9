"""Dense matrix arithmetic, validation helpers and entrywise-order predicates.

Matrices are plain ``numpy.ndarray`` objects (float64 or complex128). The
helpers here validate shapes and finiteness once at the boundary so the rest
of the package can assume clean square inputs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a matrix is singular to working tolerance."""


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative thresholds shared by every numerical decision.

    Parameters
    ----------
    abs_eps : float
        Absolute threshold, used for entrywise sign decisions.
    rel_eps : float
        Relative threshold, scaled by a problem norm where one is available.
    """

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9

    def __post_init__(self):
        if self.abs_eps < 0 or self.rel_eps < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.abs_eps == 0 and self.rel_eps == 0:
            raise ValueError("abs_eps and rel_eps cannot both be zero")

    def bound(self, scale: float) -> float:
        """Combined threshold ``abs_eps + rel_eps * scale``."""
        return self.abs_eps + self.rel_eps * abs(scale)


DEFAULT_TOL = Tolerance()


def as_matrix(a, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Validate ``a`` as a finite 2-D array, keeping complex dtype if present."""
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.number):
        raise TypeError(f"{name} must be numeric")
    arr = arr.astype(np.complex128 if np.iscomplexobj(arr) else np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    if square and arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    return arr


def as_real_matrix(a, *, square: bool = True, name: str = "matrix") -> np.ndarray:
    arr = as_matrix(a, square=square, name=name)
    if np.iscomplexobj(arr):
        raise TypeError(f"{name} must be real")
    return arr


def inf_norm(a: np.ndarray) -> float:
    """Induced infinity norm (maximum absolute row sum)."""
    return float(np.max(np.sum(np.abs(a), axis=1)))


def max_entry(a: np.ndarray) -> float:
    """Max-entry norm, the residual norm used throughout the package."""
    return float(np.max(np.abs(a)))


def mat_mul(a, b) -> np.ndarray:
    a = as_matrix(a, name="a")
    b = as_matrix(b, name="b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    return a @ b


def mat_inv(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Inverse by LU with partial pivoting.

    A matrix whose smallest pivot is below ``rel_eps`` times the largest pivot
    is treated as singular.

    Raises
    ------
    SingularMatrixError
        If the pivot test fails or the computed inverse does not satisfy
        ``||a @ inv - I||_inf <= tol.bound(cond estimate)``.
    """
    a = as_matrix(a, square=True, name="a")
    with warnings.catch_warnings():
        # exact zero pivots are reported through SingularMatrixError below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.max() == 0 or pivots.min() <= tol.rel_eps * pivots.max():
        raise SingularMatrixError(
            f"matrix is singular to tolerance (smallest pivot {pivots.min():.3e})"
        )
    n = a.shape[0]
    inv = scipy.linalg.lu_solve((lu, piv), np.eye(n, dtype=a.dtype), check_finite=False)
    resid = inf_norm(a @ inv - np.eye(n))
    cond = inf_norm(a) * inf_norm(inv)
    if resid > tol.bound(1.0) + 1e3 * np.finfo(float).eps * cond:
        raise SingularMatrixError(f"inverse residual {resid:.3e} exceeds tolerance")
    return inv


def mat_power(a, k: int) -> np.ndarray:
    """``a**k`` by repeated squaring; ``a**0`` is the identity."""
    a = as_matrix(a, square=True, name="a")
    if k < 0:
        raise ValueError("k must be nonnegative")
    result = np.eye(a.shape[0], dtype=a.dtype)
    base = a
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def is_entrywise_positive(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every entry exceeds ``tol.abs_eps``."""
    a = as_matrix(a, name="a")
    if np.iscomplexobj(a):
        return False
    return bool(np.all(a > tol.abs_eps))


def is_entrywise_nonnegative(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = as_matrix(a, name="a")
    if np.iscomplexobj(a):
        return False
    return bool(np.all(a >= -tol.abs_eps))


def direct_sum(*blocks: np.ndarray) -> np.ndarray:
    """Block-diagonal matrix, complex if any block is complex."""
    if not blocks:
        raise ValueError("direct_sum needs at least one block")
    return scipy.linalg.block_diag(*blocks)


def jordan_block(lam: complex, k: int) -> np.ndarray:
    """The k x k Jordan block with eigenvalue ``lam``."""
    if k < 1:
        raise ValueError("block size must be >= 1")
    dtype = np.complex128 if np.iscomplexobj(lam) and complex(lam).imag != 0 else np.float64
    value = lam if dtype == np.complex128 else complex(lam).real
    return np.eye(k, dtype=dtype) * value + np.eye(k, k=1, dtype=dtype)
