import cmath
import math

import numpy as np
import pytest

from perron_roots.branches import (
    branch_derivative,
    branch_value,
    conjugate_branch_condition,
    negative_axis_branch_condition,
    polar,
    real_branches,
)


class TestPolar:
    def test_negative_axis_maps_to_plus_pi(self):
        assert polar(-2.0) == (2.0, math.pi)
        assert polar(complex(-2.0, -0.0))[1] == math.pi

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            polar(0)


class TestBranchValue:
    @pytest.mark.parametrize("z", [1 + 1j, -3 - 0.5j, 4.0, -4.0, 0.3j])
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_every_branch_is_a_root(self, z, p):
        for j in range(p):
            assert abs(branch_value(z, p, j) ** p - z) <= 1e-12 * max(1, abs(z))

    @pytest.mark.parametrize("z", [1 + 1j, -3 - 0.5j, 4.0, 2 - 7j])
    def test_principal_branch_matches_numpy(self, z):
        np.testing.assert_allclose(branch_value(z, 3, 0), np.power(complex(z), 1 / 3), rtol=1e-14)

    def test_branches_are_distinct(self):
        values = [branch_value(1 + 1j, 4, j) for j in range(4)]
        assert len({complex(round(v.real, 12), round(v.imag, 12)) for v in values}) == 4

    def test_sqrt_of_minus_one(self):
        assert branch_value(-1.0, 2, 0) == pytest.approx(1j)
        assert branch_value(-1.0, 2, 1) == pytest.approx(-1j)

    @pytest.mark.parametrize("p,j", [(1, 0), (2, 2), (3, -1)])
    def test_invalid_indices(self, p, j):
        with pytest.raises(ValueError):
            branch_value(1.0, p, j)


class TestBranchDerivative:
    def test_order_zero_is_value(self):
        assert branch_derivative(2 + 1j, 3, 1, 0) == branch_value(2 + 1j, 3, 1)

    def test_first_derivative_closed_form(self):
        # d/dz z^(1/2) = 1 / (2 sqrt z) on the principal branch
        z = 1 + 1j
        assert branch_derivative(z, 2, 0, 1) == pytest.approx(0.5 / cmath.sqrt(z), rel=1e-14)

    @pytest.mark.parametrize("z", [1 + 1j, 3 - 2j, 0.5 + 0.1j, -2 + 1j])
    @pytest.mark.parametrize("p", [2, 3, 4])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_matches_central_differences(self, z, p, k):
        h = 1e-5
        for j in range(p):
            fd = (branch_derivative(z + h, p, j, k - 1) - branch_derivative(z - h, p, j, k - 1)) / (2 * h)
            exact = branch_derivative(z, p, j, k)
            assert abs(fd - exact) <= 1e-6 * abs(exact)

    def test_order_cap(self):
        with pytest.raises(ValueError):
            branch_derivative(1.0, 2, 0, 65)


class TestConjugacy:
    @pytest.mark.parametrize("p", [2, 3, 4, 5])
    def test_nonreal_condition_matches_values(self, p):
        z = 0.7 + 1.9j
        for j in range(p):
            for jp in range(p):
                holds = abs(np.conj(branch_value(z, p, j)) - branch_value(np.conj(z), p, jp)) <= 1e-12
                assert holds == conjugate_branch_condition(j, jp, p)

    @pytest.mark.parametrize("p", [2, 3, 4, 5])
    def test_negative_axis_condition_matches_values(self, p):
        lam = -2.5
        for j in range(p):
            for jp in range(p):
                holds = abs(np.conj(branch_value(lam, p, j)) - branch_value(lam, p, jp)) <= 1e-12
                assert holds == negative_axis_branch_condition(j, jp, p)


class TestRealBranches:
    @pytest.mark.parametrize("lam", [3.0, -3.0])
    @pytest.mark.parametrize("p", [2, 3, 4, 5, 6])
    def test_lists_exactly_the_real_values(self, lam, p):
        real = [j for j in range(p) if abs(branch_value(lam, p, j).imag) <= 1e-12]
        assert real_branches(lam, p) == real

    def test_odd_root_of_negative(self):
        assert real_branches(-8.0, 3) == [1]
        assert branch_value(-8.0, 3, 1) == pytest.approx(-2.0)
