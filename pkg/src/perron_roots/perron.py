"""Perron-Frobenius checks: spectral radius data, eventual positivity, power index.

Eventual positivity is decided spectrally: ``A`` is eventually positive iff
both ``A`` and ``A.T`` have the strong Perron-Frobenius property (positive,
simple, strictly dominant spectral radius with a positive eigenvector).
Iterating powers is only used to find a witness exponent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import eigenvalues
from .matcore import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    as_real_matrix,
    inf_norm,
)

DOMINANCE_MARGIN = 1e-8


@dataclass(frozen=True)
class PerronReport:
    """Spectral radius and Perron vectors of a real square matrix.

    Vectors have unit 1-norm and their largest-magnitude component positive.
    """

    rho: float
    right_vector: np.ndarray
    left_vector: np.ndarray
    rho_positive: bool
    rho_in_spectrum: bool
    rho_simple: bool
    rho_dominant: bool
    right_positive: bool
    left_positive: bool

    @property
    def strong_pf(self) -> bool:
        return (self.rho_positive and self.rho_in_spectrum and self.right_positive
                and self.rho_simple and self.rho_dominant)

    @property
    def strong_pf_transpose(self) -> bool:
        return (self.rho_positive and self.rho_in_spectrum and self.left_positive
                and self.rho_simple and self.rho_dominant)


@dataclass(frozen=True)
class PowerIndexResult:
    """Smallest ``k <= cap_used`` with ``A^k, ..., A^(k+n)`` entrywise positive.

    ``index`` is ``None`` when the cap was exceeded, which is not a proof that
    no such exponent exists.
    """

    index: int | None
    cap_used: int

    @property
    def found(self) -> bool:
        return self.index is not None


def _sign_normalize(v: np.ndarray) -> np.ndarray:
    v = np.real(v)
    v = v / np.sum(np.abs(v))
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return v


def _null_vector(m: np.ndarray) -> np.ndarray:
    _, _, vh = np.linalg.svd(m)
    return vh[-1]


def spectral_radius_data(a, tol: Tolerance = DEFAULT_TOL) -> PerronReport:
    """Spectral radius, its multiplicity and dominance, and both Perron vectors.

    Raises
    ------
    ValueError
        If the spectral radius is below ``tol.abs_eps``.
    """
    a = as_real_matrix(a, name="a")
    n = a.shape[0]
    lams = eigenvalues(a, tol)
    mods = np.abs(lams)
    rho = float(mods.max())
    if rho <= tol.abs_eps:
        raise ValueError("spectral radius is zero to tolerance")
    cluster_eps = 1e-6 * max(1.0, inf_norm(a))
    near = np.abs(lams - rho) <= cluster_eps
    rho_in_spectrum = bool(near.any())
    simple = int(near.sum()) == 1
    others = mods[~near] if rho_in_spectrum else mods
    dominant = rho_in_spectrum and simple and bool(np.all(others <= rho * (1 - DOMINANCE_MARGIN)))
    shift = a - rho * np.eye(n)
    x = _sign_normalize(_null_vector(shift))
    y = _sign_normalize(_null_vector(shift.T))
    return PerronReport(
        rho=rho,
        right_vector=x,
        left_vector=y,
        rho_positive=rho > tol.abs_eps,
        rho_in_spectrum=rho_in_spectrum,
        rho_simple=simple,
        rho_dominant=dominant,
        right_positive=bool(np.all(x > tol.abs_eps)),
        left_positive=bool(np.all(y > tol.abs_eps)),
    )


def has_strong_pf_property(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    try:
        return spectral_radius_data(a, tol).strong_pf
    except ValueError:
        return False


def is_eventually_positive(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Strong Perron-Frobenius property for both ``a`` and ``a.T``."""
    a = as_matrix(a, square=True, name="a")
    if np.iscomplexobj(a):
        return False
    try:
        report = spectral_radius_data(a, tol)
    except ValueError:
        return False
    return report.strong_pf and report.strong_pf_transpose


def power_index(a, cap: int | None = None, tol: Tolerance = DEFAULT_TOL) -> PowerIndexResult:
    """Smallest exponent from which powers of ``a`` stay entrywise positive.

    Positivity must hold on the confirmation window ``k..k+n``. Nonnegative
    inputs are iterated on their zero pattern, which is exact; other inputs
    use powers rescaled to unit max-entry at every step.
    """
    a = as_real_matrix(a, name="a")
    n = a.shape[0]
    if cap is None:
        cap = max(n * n - 2 * n + 2, 4 * n * n)
    if cap < 1:
        raise ValueError("cap must be >= 1")
    pattern = bool(np.all(a >= -tol.abs_eps))
    if pattern:
        base = (a > tol.abs_eps).astype(np.int64)
    else:
        scale = np.max(np.abs(a))
        if scale == 0:
            return PowerIndexResult(None, cap)
        base = a / scale
    power = base.copy()
    run_start = None
    for k in range(1, cap + n + 1):
        if pattern:
            positive = bool(np.all(power > 0))
        else:
            positive = bool(np.all(power > tol.abs_eps))
        if positive:
            if run_start is None:
                if k > cap:
                    break
                run_start = k
            if k - run_start >= n:
                return PowerIndexResult(run_start, cap)
        else:
            run_start = None
            if k >= cap:
                break
        if pattern:
            power = np.minimum(power @ base, 1)
        else:
            power = power @ base
            scale = np.max(np.abs(power))
            if scale == 0:
                break
            power = power / scale
    return PowerIndexResult(None, cap)


def is_primitive(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Primitivity of a nonnegative matrix: some power ``<= n^2 - 2n + 2`` is positive.

    Raises
    ------
    ValueError
        If an entry is below ``-tol.abs_eps``.
    """
    a = as_real_matrix(a, name="a")
    if np.any(a < -tol.abs_eps):
        raise ValueError("is_primitive needs a nonnegative matrix")
    n = a.shape[0]
    a = np.clip(a, 0.0, None)
    return power_index(a, max(1, n * n - 2 * n + 2), tol).found


def wielandt_bound(n: int) -> int:
    return n * n - 2 * n + 2


def is_stochastic(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = as_matrix(a, square=True, name="a")
    if np.iscomplexobj(a) or np.any(a < -tol.abs_eps):
        return False
    return bool(np.all(np.abs(a.sum(axis=1) - 1.0) <= tol.abs_eps))


def is_eventually_stochastic(a, tol: Tolerance = DEFAULT_TOL, cap: int | None = None) -> bool:
    """Eventually positive with unit row sums.

    When a witness exponent is found within ``cap`` the row sums of that
    power are checked too.
    """
    a = as_matrix(a, square=True, name="a")
    if np.iscomplexobj(a):
        return False
    if not np.all(np.abs(a.sum(axis=1) - 1.0) <= tol.abs_eps):
        return False
    if not is_eventually_positive(a, tol):
        return False
    n = a.shape[0]
    res = power_index(a, cap if cap is not None else max(10_000, 4 * n * n), tol)
    if res.found:
        witness = np.linalg.matrix_power(a, res.index)
        return bool(np.all(np.abs(witness.sum(axis=1) - 1.0) <= tol.abs_eps * max(1, res.index)))
    return True
