"""Estimator-style wrapper around root selection.

``MatrixPthRoot`` fits a single real p-th root of a square matrix so it can
be dropped into scikit-learn style pipelines, e.g. turning an annual
transition matrix into a monthly one and propagating row distributions.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import enumroots, matfun, perron
from .matcore import Tolerance
from .rjcf import real_jordan_decompose

_MODES = ("eventually_positive", "principal", "real")


class MatrixPthRoot(TransformerMixin, BaseEstimator):
    """Select one real p-th root of a square matrix.

    Parameters
    ----------
    p : int, default=2
        Root order, at least 2.
    mode : {"eventually_positive", "principal", "real"}, default="eventually_positive"
        ``"eventually_positive"`` takes the first eventually positive primary
        root in canonical assignment order; ``"principal"`` uses branch 0 on
        every eigenvalue; ``"real"`` takes any real root, pairing negative
        eigenvalues when needed.
    tol : float, default=1e-9
        Absolute and relative tolerance for the numerical decisions.

    Attributes
    ----------
    root_ : ndarray of shape (n, n)
    assignment_ : BranchAssignment
    residual_ : float
        ``max |root_**p - A|``.
    eventually_positive_ : bool or None
    n_features_in_ : int
    """

    def __init__(self, p: int = 2, mode: str = "eventually_positive", tol: float = 1e-9):
        self.p = p
        self.mode = mode
        self.tol = tol

    def fit(self, A, y=None):
        A = check_array(A, dtype=float)
        if A.shape[0] != A.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {A.shape}")
        if int(self.p) != self.p or self.p < 2:
            raise ValueError("p must be an integer >= 2")
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}, got {self.mode!r}")
        tol = Tolerance(self.tol, self.tol)
        decomp = real_jordan_decompose(A, tol)
        if self.mode == "eventually_positive":
            report = enumroots.enumerate_ev_positive_primary(decomp, self.p, tol).roots[0]
        elif self.mode == "principal":
            report = matfun.assemble_primary_root(decomp, matfun.principal_assignment(decomp, self.p), tol)
            if not report.is_real:
                raise ValueError("principal root is not real")
        else:
            report = enumroots.construct_real_root(decomp, self.p, tol)
        self.root_ = np.real(report.X) if report.is_real else report.X
        self.assignment_ = report.assignment
        self.residual_ = float(report.residual)
        self.eventually_positive_ = perron.is_eventually_positive(self.root_, tol)
        self.n_features_in_ = A.shape[1]
        return self

    def transform(self, X):
        """Advance row vectors by one root step: ``X @ root_``."""
        check_is_fitted(self, "root_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        return X @ self.root_
