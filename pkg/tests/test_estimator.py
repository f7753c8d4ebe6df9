import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from perron_roots import MatrixPthRoot


class TestMatrixPthRoot:
    def test_params_round_trip(self):
        est = MatrixPthRoot(p=12, mode="principal", tol=1e-8)
        assert clone(est).get_params() == {"p": 12, "mode": "principal", "tol": 1e-8}

    def test_monthly_from_annual(self):
        P = np.array([[0.90, 0.08, 0.02], [0.05, 0.90, 0.05], [0.01, 0.09, 0.90]])
        est = MatrixPthRoot(p=12, mode="principal").fit(P)
        np.testing.assert_allclose(np.linalg.matrix_power(est.root_, 12), P, atol=1e-12)
        np.testing.assert_allclose(est.root_.sum(axis=1), 1.0, atol=1e-12)
        x = np.array([[1.0, 0.0, 0.0]])
        np.testing.assert_allclose(est.transform(x), x @ est.root_)

    def test_eventually_positive_mode(self, m5, m5_reference_roots):
        A, _, _ = m5
        est = MatrixPthRoot(p=2).fit(A)
        np.testing.assert_allclose(est.root_, m5_reference_roots[0], atol=5e-4)
        assert est.eventually_positive_ and str(est.assignment_) == "(0,(0,0))"

    def test_real_mode_pairs_negative_eigenvalues(self):
        est = MatrixPthRoot(p=2, mode="real").fit(-np.eye(2))
        np.testing.assert_allclose(est.root_ @ est.root_, -np.eye(2), atol=1e-12)

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            MatrixPthRoot().transform(np.eye(2))

    @pytest.mark.parametrize("kwargs", [{"p": 1}, {"mode": "bogus"}])
    def test_bad_params(self, kwargs):
        with pytest.raises(ValueError):
            MatrixPthRoot(**kwargs).fit(np.eye(2) + 1)

    def test_non_square(self):
        with pytest.raises(ValueError):
            MatrixPthRoot().fit(np.ones((2, 3)))

    def test_transform_width_checked(self):
        est = MatrixPthRoot(mode="principal").fit(np.array([[4.0, 1.0], [1.0, 4.0]]))
        with pytest.raises(ValueError):
            est.transform(np.ones((1, 3)))
