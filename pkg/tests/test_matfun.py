import numpy as np
import pytest
import scipy.linalg

from perron_roots.matcore import direct_sum, jordan_block, mat_power, max_entry
from perron_roots.matfun import (
    AssignmentError,
    BranchAssignment,
    assemble_nonprimary_root,
    assemble_primary_root,
    branch_on_jordan_block,
    branch_pair_on_complex_block,
    commutant_basis,
    is_primary_choice,
    principal_assignment,
    real_assignment,
    sample_commutant,
    singular_root_report,
)
from perron_roots.rjcf import complex_pair_block, from_factorization, real_jordan_decompose

from conftest import random_similar


class TestBlockFunctions:
    @pytest.mark.parametrize("lam", [2.0, -3.0, 1 + 1j, 0.2 - 0.7j])
    @pytest.mark.parametrize("p", [2, 3, 5])
    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_jordan_block_root(self, lam, p, k):
        for j in range(p):
            F = branch_on_jordan_block(lam, k, p, j)
            np.testing.assert_allclose(mat_power(F, p), jordan_block(lam, k), atol=1e-11)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            branch_on_jordan_block(0.0, 2, 2, 0)

    @pytest.mark.parametrize("p", [2, 3, 4])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_pair_block_real_iff_conjugate_branches(self, p, k):
        lam = 1.5 + 0.8j
        C = complex_pair_block(lam, k)
        for j1 in range(p):
            for j2 in range(p):
                F = branch_pair_on_complex_block(lam, k, p, (j1, j2))
                np.testing.assert_allclose(mat_power(F, p), C, atol=1e-10)
                assert np.isrealobj(F) == ((j1 + j2) % p == 0)

    def test_paired_negative_block(self):
        F = branch_pair_on_complex_block(-1.0, 1, 2, (0, 1))
        assert np.isrealobj(F)
        np.testing.assert_allclose(F @ F, -np.eye(2), atol=1e-15)


class TestPrimaryRoots:
    @pytest.mark.parametrize("seed", range(6))
    def test_principal_square_root_matches_scipy(self, seed):
        rng = np.random.default_rng(seed)
        # the shift keeps every eigenvalue in the open right half-plane
        A = rng.uniform(0.1, 1.0, (4, 4)) + 4.5 * np.eye(4)
        d = real_jordan_decompose(A)
        r = assemble_primary_root(d, principal_assignment(d, 2))
        assert r.is_real
        np.testing.assert_allclose(r.X, np.real(scipy.linalg.sqrtm(A)), atol=1e-9)

    @pytest.mark.parametrize("p", [3, 5])
    def test_principal_root_matches_fractional_power(self, rng, p):
        A = random_similar(direct_sum(np.array([[6.0]]), complex_pair_block(1 + 2j, 1), jordan_block(2.0, 2)),
                           rng, cond_max=20)
        d = real_jordan_decompose(A)
        r = assemble_primary_root(d, principal_assignment(d, p))
        assert r.is_real
        np.testing.assert_allclose(r.X, np.real(scipy.linalg.fractional_matrix_power(A, 1 / p)), atol=1e-8)

    def test_m5_reference_roots_roots(self, m5, m5_reference_roots):
        A, R, blocks = m5
        d = from_factorization(A, R, blocks)
        Xj, Xjp = m5_reference_roots
        r = assemble_primary_root(d, BranchAssignment((0,), ((0, 0),), 2))
        rp = assemble_primary_root(d, BranchAssignment((0,), ((1, 1),), 2))
        np.testing.assert_allclose(r.X, Xj, atol=5e-4)
        np.testing.assert_allclose(rp.X, Xjp, atol=5e-4)
        assert r.residual <= 1e-12 and rp.residual <= 1e-12
        assert r.is_eventually_positive and rp.is_eventually_positive

    def test_nonconjugate_pair_gives_complex_root(self, m5):
        A, R, blocks = m5
        r = assemble_primary_root(from_factorization(A, R, blocks), BranchAssignment((0,), ((0, 1),), 2))
        assert not r.is_real
        assert r.residual <= 1e-10
        assert r.is_eventually_positive is False

    def test_mixed_branches_rejected_as_primary(self, m9):
        A, R, blocks = m9
        d = from_factorization(A, R, blocks)
        a = BranchAssignment((0,), ((0, 0), (1, 1)), 2)
        assert not is_primary_choice(d, a)
        with pytest.raises(AssignmentError):
            assemble_primary_root(d, a)


class TestCommutant:
    def test_dimension_formula(self, m9):
        # real commutant: 1 (Perron) + 2 * sum_{a,b} min(k_a, k_b) over the pair's blocks (2, 2)
        A, R, blocks = m9
        J = from_factorization(A, R, blocks).J
        basis = commutant_basis(J)
        assert basis.shape[2] == 1 + 2 * (2 + 2 + 2 + 2)
        for i in range(basis.shape[2]):
            U = basis[:, :, i]
            assert max_entry(U @ J - J @ U) <= 1e-12

    def test_sampling_is_deterministic(self, m9):
        A, R, blocks = m9
        d = from_factorization(A, R, blocks)
        np.testing.assert_array_equal(sample_commutant(d, 7).U, sample_commutant(d, 7).U)
        assert not np.array_equal(sample_commutant(d, 7).U, sample_commutant(d, 8).U)


class TestNonprimaryRoots:
    @pytest.fixture
    def decomp(self, m9):
        A, R, blocks = m9
        return from_factorization(A, R, blocks)

    def test_nine_parameter_family(self, decomp, rng):
        # a nine-parameter commuting family (a subfamily of the 17-dimensional commutant)
        for _ in range(3):
            u = rng.standard_normal(9)
            U = np.zeros((9, 9))
            U[0, 0] = u[0]
            for (r0, c0), (a, b) in zip([(1, 1), (1, 5), (5, 1), (5, 5)], [(u[1], u[2]), (u[3], u[4]),
                                                                           (u[5], u[6]), (u[7], u[8])]):
                blk = complex_pair_block(a + 1j * b, 2)
                blk[0:2, 2:4] = np.eye(2)
                U[r0:r0 + 4, c0:c0 + 4] = blk
            r = assemble_nonprimary_root(decomp, BranchAssignment((0,), ((0, 0), (1, 1)), 2, primary=False), U)
            assert r.residual <= 1e-8
            assert r.is_real and r.is_eventually_positive

    def test_identity_u(self, decomp):
        r = assemble_nonprimary_root(decomp, BranchAssignment((0,), ((0, 0), (1, 1)), 2, primary=False),
                                     np.eye(9))
        assert r.residual <= 1e-12 and r.is_eventually_positive

    def test_noncommuting_u_rejected(self, decomp, rng):
        with pytest.raises(ValueError):
            assemble_nonprimary_root(decomp, BranchAssignment((0,), ((0, 0), (1, 1)), 2, primary=False),
                                     rng.standard_normal((9, 9)))

    def test_primary_assignment_rejected(self, decomp):
        with pytest.raises(AssignmentError):
            assemble_nonprimary_root(decomp, BranchAssignment((0,), ((0, 0), (0, 0)), 2), np.eye(9))

    def test_non_derogatory_rejected(self, m5):
        A, R, blocks = m5
        with pytest.raises(AssignmentError):
            assemble_nonprimary_root(from_factorization(A, R, blocks),
                                     BranchAssignment((0,), ((0, 0),), 2, primary=False), np.eye(5))


class TestRealAssignment:
    def test_odd_root_of_negative(self):
        d = real_jordan_decompose(np.diag([8.0, -27.0]))
        a = real_assignment(d, 3)
        r = assemble_primary_root(d, a)
        assert r.is_real
        np.testing.assert_allclose(sorted(np.diag(r.X)), [-3.0, 2.0], atol=1e-12)


class TestSingular:
    def test_zero_part_constructed(self):
        A = np.diag([4.0, 0.0])
        d = real_jordan_decompose(A)
        rep = singular_root_report(d, 2)
        assert rep.exists and rep.constructed
        np.testing.assert_allclose(rep.root.X @ rep.root.X, A, atol=1e-12)

    def test_nilpotent_j2_has_no_square_root(self):
        d = real_jordan_decompose(direct_sum(np.array([[4.0]]), jordan_block(0.0, 2)))
        rep = singular_root_report(d, 2)
        assert not rep.exists and rep.root is None

    def test_existing_but_unsupported(self):
        d = real_jordan_decompose(direct_sum(np.array([[4.0]]), jordan_block(0.0, 2), np.zeros((1, 1))))
        rep = singular_root_report(d, 2)
        assert rep.exists and not rep.constructed
