"""
Modular Obstruction Tests

Twist enumeration, the Gauss-sum filter and the Verlinde check on K(R).

Run with:
    pytest tests/test_modular_obstruction.py -v
"""

import pytest

from cyclotomic import CONJUGATION, ONE, ZETA3, galois_apply, is_root_of_unity, root_of_unity
from fusion_ring import builtin_R, fpdim_data_R, global_dimension, trivial_ring
from modular_obstruction import (
    balancing_s_matrix, enumerate_twist_tuples, enumerate_twist_tuples_full, gauss_filter, gauss_sum,
    is_symmetric, run_obstruction, verlinde_residuals, verlinde_value, witness_of,
)


@pytest.fixture(scope="module")
def dims():
    d, _ = fpdim_data_R()
    return d


@pytest.fixture(scope="module")
def survivors(dims):
    return gauss_filter(enumerate_twist_tuples(), dims)


# ---------------------------------------------------------------------------
# Tests: Twist Enumeration
# ---------------------------------------------------------------------------


class TestTwists:
    """Galois-coherent normalized twists."""

    def test_297_tuples(self):
        tuples = enumerate_twist_tuples()
        assert len(tuples) == 297
        assert all(is_root_of_unity(x) for tt in tuples for x in tt.t)

    def test_full_space_agrees(self, dims, survivors):
        full = enumerate_twist_tuples_full()
        assert len(full) == 297
        assert len(gauss_filter(full, dims)) == len(survivors)


# ---------------------------------------------------------------------------
# Tests: Gauss Sums
# ---------------------------------------------------------------------------


class TestGaussFilter:
    """tau+ tau- = dim(C) leaves two twist tuples."""

    def test_two_survivors(self, survivors):
        assert len(survivors) == 2

    def test_survivor_twists(self, survivors):
        zeta9 = root_of_unity(1)
        for tt in survivors:
            theta = tt.theta
            assert theta[0] == ONE
            assert theta[1] == theta[2] == theta[5]
            assert theta[1] in (zeta9, galois_apply(CONJUGATION, zeta9))
            assert {theta[3], theta[4]} == {ZETA3, ZETA3 ** 2}

    def test_survivors_are_conjugate(self, survivors):
        a, b = survivors
        assert tuple(galois_apply(CONJUGATION, x) for x in a.theta) == b.theta

    def test_gauss_sum_product(self, dims, survivors):
        for tt in survivors:
            product = gauss_sum(tt.theta, dims, 1) * gauss_sum(tt.theta, dims, -1)
            assert product == global_dimension(dims)


# ---------------------------------------------------------------------------
# Tests: Verlinde
# ---------------------------------------------------------------------------


class TestVerlinde:
    """Balancing S-matrices and the failing Verlinde sum."""

    def test_s_matrix_shape(self, dims, survivors):
        ring = builtin_R()
        for tt in survivors:
            S = balancing_s_matrix(tt.theta, dims, ring)
            assert is_symmetric(S)
            assert S[0] == list(dims)

    def test_witness_at_111(self, dims, survivors):
        ring = builtin_R()
        for tt in survivors:
            S = balancing_s_matrix(tt.theta, dims, ring)
            residuals = verlinde_residuals(S, ring, dims)
            assert not residuals['structural_failure']
            witness = witness_of(residuals)
            assert witness['triple'] == (1, 1, 1)
            assert witness['computed'] == 1
            assert witness['expected'] == 0
            assert verlinde_value(S, global_dimension(dims), 1, 1, 1) == 1

    def test_run_obstruction_counts(self):
        report = run_obstruction()
        assert report['counts'] == (297, 2, 0)
        assert report['status'] == 'pass'
        assert report['conjugation_closed']
        assert [s['witness']['triple'] for s in report['survivors']] == [(1, 1, 1), (1, 1, 1)]

    def test_run_obstruction_full_audit(self):
        report = run_obstruction(full_audit=True)
        assert report['full_space_count'] == 297
        assert report['full_space_survivors'] == 2

    def test_rank_one_ring_is_inapplicable(self):
        assert run_obstruction(trivial_ring())['status'] == 'inapplicable'

    def test_non_character_dims_are_refused(self):
        report = run_obstruction(d=[ONE] * 6)
        assert report['status'] == 'refused'
        assert 'counts' not in report
