"""
Fusion Ring Tests

Axiom checks, the built-in K(R), dimension characters and the .fring format.

Run with:
    pytest tests/test_fusion_ring.py -v
"""

import os

import pytest

from cyclotomic import IDENTITY, ONE, U1, U2, sigma
from fusion_ring import (
    FusionRing, FusionRingError, builtin_R, center_unit_dims_R, check_dim_hom, dump_fring,
    formal_codegrees_R, fpdim_data_R, galois_perm_on_simples, global_dimension, is_builtin_R,
    is_positive_character, load_fring, parse_fring, product_dims, product_ring, ring_characters_R,
    ring_summary, trivial_ring, validate,
)

FIXTURE_RING = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures", "kr.fring")


@pytest.fixture(scope="module")
def ring():
    return builtin_R()


def _mutate(ring: FusionRing, i: int, j: int, k: int, delta: int = 1) -> FusionRing:
    tables = [[list(row) for row in table] for table in ring.N]
    tables[i][j][k] += delta
    return FusionRing.from_tables(tables, ring.dual)


# ---------------------------------------------------------------------------
# Tests: Validation
# ---------------------------------------------------------------------------


class TestValidation:
    """Ring identities and their violation reports."""

    def test_builtin_ring_is_valid(self, ring):
        assert validate(ring) == []
        assert ring.rank == 6
        assert ring.is_commutative()
        assert ring.dual == (0, 1, 2, 3, 4, 5)

    def test_trivial_ring(self):
        trivial = trivial_ring()
        assert trivial.rank == 1
        assert validate(trivial) == []

    def test_single_entry_mutants_are_caught(self, ring):
        mutants = 0
        for i in range(6):
            for j in range(6):
                for k in range(6):
                    if j == k:
                        continue
                    assert validate(_mutate(ring, i, j, k)), (i, j, k)
                    mutants += 1
        assert mutants >= 50

    def test_negative_entry_reported(self, ring):
        violations = validate(_mutate(ring, 3, 4, 4, -3))
        assert any(v.startswith("nonnegativity") for v in violations)

    def test_bad_dual_reported(self, ring):
        broken = FusionRing.from_tables(ring.N, (0, 2, 1, 3, 4, 5))
        assert any(v.startswith("duality") for v in validate(broken))

    def test_summary(self, ring):
        summary = ring_summary(ring)
        assert summary == {'rank': 6, 'valid': True, 'violations': [], 'commutative': True}


# ---------------------------------------------------------------------------
# Tests: Dimensions
# ---------------------------------------------------------------------------


class TestDimensions:
    """FP dimensions, codegrees and characters of K(R)."""

    def test_fpdims_are_a_character(self, ring):
        d, total = fpdim_data_R()
        assert d == [ONE, U2, U2, U1 * U2, U1 ** -1 * U2 ** 2, U2]
        assert check_dim_hom(ring, d)
        assert total == 9 * U2 ** 2
        assert global_dimension(d) == total

    def test_wrong_dims_rejected(self, ring):
        d, _ = fpdim_data_R()
        assert not check_dim_hom(ring, [ONE, U2, U2, U2, U2, U2])
        assert not check_dim_hom(ring, d[:5])

    def test_formal_codegrees(self):
        assert formal_codegrees_R() == [9 * U2 ** 2, 9 * ONE, 9 * ONE, 9 * U1 ** -2, 9 * U1 ** 2 * U2 ** -2, 9 * ONE]

    def test_center_unit_dims(self):
        d, _ = fpdim_data_R()
        assert center_unit_dims_R() == [x * x for x in d]

    def test_only_fp_character_is_positive(self, ring):
        characters = ring_characters_R()
        assert len(characters) == 6
        assert all(check_dim_hom(ring, chi) for chi in characters)
        assert [n for n, chi in enumerate(characters) if is_positive_character(chi)] == [0]

    def test_galois_permutation_of_simples(self):
        d, total = fpdim_data_R()
        assert galois_perm_on_simples(d, sigma(), total) == [3, 1, 2, 4, 0, 5]

    def test_identity_fixes_every_simple(self):
        d, total = fpdim_data_R()
        assert galois_perm_on_simples(d, IDENTITY, total) == list(range(6))

    def test_sigma_permutation_has_order_three(self):
        d, total = fpdim_data_R()
        p = galois_perm_on_simples(d, sigma(), total)
        assert [p[p[p[i]]] for i in range(6)] == list(range(6))
        assert p != list(range(6))
        assert galois_perm_on_simples(d, sigma().power(3), total) == list(range(6))

    def test_relabeled_ring_keeps_its_character(self, ring):
        d, _ = fpdim_data_R()
        perm = (0, 2, 1, 4, 3, 5)
        tables = [[[0] * 6 for _ in range(6)] for _ in range(6)]
        for i in range(6):
            for j in range(6):
                for k in range(6):
                    tables[perm[i]][perm[j]][perm[k]] = ring.N[i][j][k]
        relabeled_d = [None] * 6
        for i in range(6):
            relabeled_d[perm[i]] = d[i]
        relabeled = FusionRing.from_tables(tables, ring.dual)
        assert validate(relabeled) == []
        assert check_dim_hom(relabeled, relabeled_d)


# ---------------------------------------------------------------------------
# Tests: Products and Files
# ---------------------------------------------------------------------------


class TestProductsAndFiles:
    """Product rings and the .fring reader/writer."""

    def test_product_with_trivial_ring(self, ring):
        product = product_ring(ring, trivial_ring())
        assert product.rank == 6
        assert validate(product) == []
        assert product.N == ring.N

    def test_product_dims(self):
        d, _ = fpdim_data_R()
        assert product_dims(d, [ONE]) == d

    @pytest.mark.slow
    def test_square_of_builtin_ring(self, ring):
        d, total = fpdim_data_R()
        product = product_ring(ring, ring)
        dims = product_dims(d, d)
        assert product.rank == 36
        assert check_dim_hom(product, dims)
        assert global_dimension(dims) == total * total
        assert global_dimension(dims) == (9 * U2 ** 2) ** 2

    def test_dump_parse_round_trip(self, ring):
        assert parse_fring(dump_fring(ring, header=["K(R)"])) == ring

    def test_fixture_is_builtin_ring(self):
        assert is_builtin_R(load_fring(FIXTURE_RING))

    def test_parse_errors(self):
        with pytest.raises(FusionRingError):
            parse_fring("rank 2\n")
        with pytest.raises(FusionRingError):
            parse_fring("rank 1\ndual 0\n1 0\n")
        with pytest.raises(FusionRingError):
            parse_fring("rank 1\ndual 0\nx\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FusionRingError):
            load_fring(str(tmp_path / "absent.fring"))
