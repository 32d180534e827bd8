"""
d-Number Census Tests

Unit conjugation, orbit maximality, the census and the Figure-3 profile table.

Run with:
    pytest tests/test_dnumber_census.py -v
"""

import os

import mpmath
import pytest

from cyclotomic import BETA, U1, U2
from dnumber_census import (
    M0_LABELS, CensusError, DNumber, DimMonomial, ForgetfulProfile, build_figure3, cube_root_cases,
    divides_center_dimension, dnumber_of_square, enumerate_candidate_squared_dims, figure3_tsv,
    inew_thresholds, is_orbit_max, is_perfect_square, log_orbit_max_oracle, norm_is_power_of_three,
    orbit_conjugates, orbit_sizes, profile_equation_holds, profile_solutions, smallest_center_dimensions,
    square_root, totally_positive_unit_classify, unit_conjugate_exponents, verify_gaal,
)
from utils import fixture_body

FIGURE3_FIXTURE = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures", "figure3.tsv")


@pytest.fixture(scope="module")
def census():
    return enumerate_candidate_squared_dims()


@pytest.fixture(scope="module")
def figure3(census):
    return build_figure3(census)


# ---------------------------------------------------------------------------
# Tests: Units
# ---------------------------------------------------------------------------


class TestUnits:
    """Conjugates and total positivity of +-u1^x u2^y."""

    def test_conjugates_of_u1(self):
        assert unit_conjugate_exponents(1, 1, 0) == [(1, 1, 0), (-1, -1, 1), (1, 0, -1)]

    def test_conjugates_of_u2(self):
        assert unit_conjugate_exponents(1, 0, 1) == [(1, 0, 1), (1, -1, 0), (-1, 1, -1)]

    def test_classification_agrees_with_signs(self):
        assert totally_positive_unit_classify(1, 2, -4)
        assert not totally_positive_unit_classify(1, 1, 0)
        assert not totally_positive_unit_classify(-1, 0, 0)

    def test_cube_root_cases(self):
        assert cube_root_cases(3) == [(-1, -1), (-1, 2), (2, -1), (2, 2)]
        assert cube_root_cases(9) == [(-2, -2), (-2, 1), (1, -2), (1, 1)]
        with pytest.raises(ValueError):
            cube_root_cases(5)


# ---------------------------------------------------------------------------
# Tests: Orbit Maximality
# ---------------------------------------------------------------------------


class TestOrbitMaximality:
    """Exact orbit maximality and its logarithmic cross-check."""

    def test_known_cases(self):
        assert is_orbit_max(DNumber(0, 2, 2, 0))
        assert not is_orbit_max(DNumber(0, -4, 2, 0))
        assert log_orbit_max_oracle(DNumber(0, 2, 2, 0))
        assert not log_orbit_max_oracle(DNumber(0, -4, 2, 0))

    def test_small_orbit_representatives(self):
        assert is_orbit_max(DNumber(0, 0, 0, 1))
        assert is_orbit_max(DNumber(0, 1, 1, 0))
        assert not is_orbit_max(DNumber(0, -2, 1, 0))
        assert not is_orbit_max(DNumber(0, 1, -2, 0))

    def test_orbit_conjugates(self):
        assert orbit_conjugates(DNumber(0, 1, 1, 0)) == (DNumber(0, 1, 1, 0), DNumber(0, -2, 1, 0), DNumber(0, 1, -2, 0))

    def test_oracle_agrees_on_census(self, census):
        for n in census:
            assert is_orbit_max(n) == log_orbit_max_oracle(n), n

    def test_thresholds(self):
        expected = [0, mpmath.mpf(-1) / 3, mpmath.mpf(-2) / 3]
        for value, target in zip(inew_thresholds(), expected):
            assert mpmath.almosteq(value, target, 1e-30)

    def test_gaal_conjugates_match_galois_action(self, census):
        assert all(verify_gaal(n) for n in census)


# ---------------------------------------------------------------------------
# Tests: Squares and Profiles
# ---------------------------------------------------------------------------


class TestSquaresAndProfiles:
    """Square roots of d-numbers and forgetful profiles."""

    def test_square_root_with_odd_beta_power(self):
        n = DNumber(1, 0, 1, 1)
        assert is_perfect_square(n)
        root = square_root(n)
        assert root == DimMonomial(0, -1, 0, 2)
        assert root.label() == "u1^-1*beta^2"
        assert root.value() ** 2 == n.value()

    def test_not_a_square(self):
        assert square_root(DNumber(1, 0, 0, 0)) is None

    def test_dnumber_of_square(self):
        assert dnumber_of_square(U2 ** 4) == DNumber(0, 0, 2, 0)
        with pytest.raises(CensusError):
            dnumber_of_square(U2 ** 4 + 1)

    def test_norm_power_of_three(self):
        assert norm_is_power_of_three(DNumber(1, 0, 1, 1))

    def test_u2_squared_profiles(self):
        solutions = profile_solutions(U2 ** 2, True)
        assert (1, 1, 1, 0) in solutions
        assert (0, 1, 0, 1) in solutions

    def test_profiles_of_small_dimensions(self):
        assert profile_solutions(U2, False) == [(0, 1, 0, 0)]
        assert profile_solutions(U1 ** -1 * U2 * BETA, False) == [(0, 1, 1, 0)]

    def test_profiles_of_three_u2_squared(self):
        assert profile_solutions(3 * U2 ** 2, False) == [(0, 3, 0, 3)]
        with_unit = profile_solutions(3 * U2 ** 2, True)
        assert (0, 3, 0, 3) in with_unit
        assert (1, 3, 1, 2) in with_unit

    def test_smallest_center_dimensions(self):
        assert smallest_center_dimensions() == [U2, U1 * U2, U1 ** -1 * U2 ** 2, U1 ** -1 * U2 * BETA]

    def test_profile_row_rendering(self):
        row = ForgetfulProfile(9, 3, DimMonomial(0, -1, 1, 1), 0, 1, 1, 0)
        assert row.to_tsv() == "9\t3\tu1^-1*u2*beta\t0\t1\t1\t0"
        assert profile_equation_holds(row)
        assert divides_center_dimension(row)


# ---------------------------------------------------------------------------
# Tests: Figure 3
# ---------------------------------------------------------------------------


class TestFigure3:
    """The 21-row table of candidate dimensions."""

    def test_row_and_orbit_counts(self, figure3):
        assert len(figure3) == 21
        assert orbit_sizes(figure3) == [3, 3, 3, 3, 1, 1, 3, 3, 1]

    def test_matches_fixture(self, figure3):
        assert figure3_tsv(figure3) == fixture_body(FIGURE3_FIXTURE)

    def test_every_row_is_consistent(self, figure3):
        assert all(profile_equation_holds(r) for r in figure3)
        assert all(divides_center_dimension(r) for r in figure3)

    def test_unit_carrying_labels(self, figure3):
        assert tuple(r.label for r in figure3 if r.m0) == M0_LABELS

    def test_unit_row(self, figure3):
        assert figure3[0].counts == (1, 0, 0, 0)
        assert figure3[0].dim_value() == 1

    def test_label_nine_d_number(self, figure3):
        dim = figure3[9].dim_value()
        assert dnumber_of_square(dim * dim) == DNumber(0, -1, 1, 2)

    def test_parallel_census_is_identical(self, census):
        assert enumerate_candidate_squared_dims(jobs=2) == census
