"""Property-based checks on random inputs."""

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from perron_roots.branches import branch_value, conjugate_branch_condition
from perron_roots.eigen import ascent_sequence
from perron_roots.enumroots import enumerate_ev_positive_primary
from perron_roots.matcore import direct_sum, jordan_block, mat_power
from perron_roots.rjcf import real_jordan_decompose
from perron_roots.textio import format_matrix, parse_matrix

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
nonzero_complex = st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False)


class TestBranchProperties:
    @given(z=nonzero_complex, p=st.integers(2, 6), data=st.data())
    def test_power_recovers_argument(self, z, p, data):
        j = data.draw(st.integers(0, p - 1))
        assert abs(branch_value(z, p, j) ** p - z) <= 1e-10 * abs(z)

    @given(z=nonzero_complex.filter(lambda z: abs(z.imag) > 1e-6), p=st.integers(2, 6), data=st.data())
    def test_conjugate_partner_is_unique(self, z, p, data):
        j = data.draw(st.integers(0, p - 1))
        partners = [jp for jp in range(p) if conjugate_branch_condition(j, jp, p)]
        assert len(partners) == 1
        assert abs(np.conj(branch_value(z, p, j)) - branch_value(np.conj(z), p, partners[0])) <= 1e-12 * max(
            1, abs(z) ** (1 / p))


class TestMatrixProperties:
    @given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=finite))
    def test_text_round_trip(self, m):
        np.testing.assert_array_equal(parse_matrix(format_matrix(m)), m)

    @given(arrays(np.float64, (3, 3), elements=st.floats(-1, 1)), st.integers(0, 9))
    def test_power_matches_numpy(self, m, k):
        np.testing.assert_allclose(mat_power(m, k), np.linalg.matrix_power(m, k), atol=1e-12)

    @settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(arrays(np.float64, st.integers(2, 5).map(lambda n: (n, n)),
                  elements=st.floats(0.05, 1.0)),
           st.integers(2, 4))
    def test_eventually_positive_roots_reproduce_input(self, a, p):
        ev = np.linalg.eigvals(a)
        gaps = np.abs(ev[:, None] - ev[None, :]) + np.eye(len(ev))
        assume(np.abs(ev).min() > 1e-3 and gaps.min() > 1e-3)
        d = real_jordan_decompose(a)
        for r in enumerate_ev_positive_primary(d, p).roots:
            np.testing.assert_allclose(mat_power(r.X, p), a, atol=1e-8 * max(1.0, np.abs(a).max()))

    @given(st.lists(st.integers(1, 4), min_size=1, max_size=4))
    def test_ascent_is_conjugate_partition_difference(self, sizes):
        a = direct_sum(*[jordan_block(0.0, k) for k in sizes])
        n = a.shape[0]
        # d_i = number of blocks of size >= i
        expected = tuple(sum(1 for k in sizes if k >= i) for i in range(1, n + 1))
        assert ascent_sequence(a).d == expected
