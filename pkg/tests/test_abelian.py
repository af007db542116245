"""Test Smith normal form, abelianization and order-four quotients."""

import random
from itertools import product

import pytest
from pydantic import ValidationError
from sympy import Matrix

from fpcensus.abelian import (
    IntMatrix,
    abelianization,
    count_order4_quotients,
    enumerate_order4_quotients,
    hermite_normal_form,
    order4_quotient_counts,
    smith_normal_form,
    xgcd,
)
from fpcensus.models import AbelianInvariants, QuotientType, parse_invariants
from fpcensus.presentation import Presentation, invert, parse_presentation


def random_matrix(rng: random.Random) -> IntMatrix:
    rows, cols = rng.randint(1, 12), rng.randint(1, 12)
    return IntMatrix.from_rows(
        [[rng.randint(-50, 50) for _ in range(cols)] for _ in range(rows)], cols
    )


def check_smith_form(a: IntMatrix):
    d, u, v = smith_normal_form(a)
    assert u @ a @ v == d
    assert d.is_diagonal()
    assert abs(u.determinant()) == 1
    assert abs(v.determinant()) == 1
    diagonal = d.diagonal()
    assert all(x >= 0 for x in diagonal)
    for x, y in zip(diagonal, diagonal[1:]):
        assert (y == 0) if x == 0 else (y % x == 0)
    return diagonal


def subgroups_of_index(orders, index):
    """All subgroups of Z/d1 + ... + Z/dk of the given index, by closure."""
    elements = list(product(*(range(d) for d in orders)))
    zero = tuple(0 for _ in orders)

    def add(x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, orders))

    def join(subgroup, g):
        multiples = [zero]
        current = g
        while current != zero:
            multiples.append(current)
            current = add(current, g)
        return frozenset(add(h, m) for h in subgroup for m in multiples)

    seen = {frozenset([zero])}
    frontier = list(seen)
    while frontier:
        next_frontier = []
        for subgroup in frontier:
            for g in elements:
                if g in subgroup:
                    continue
                bigger = join(subgroup, g)
                if bigger not in seen:
                    seen.add(bigger)
                    next_frontier.append(bigger)
        frontier = next_frontier
    return [s for s in seen if len(s) * index == len(elements)]


class TestIntMatrix:
    """Test the integer matrix type."""

    def test_dimension_mismatch_rejected(self):
        """Test that the entry count must match the shape."""
        with pytest.raises(ValueError):
            IntMatrix(2, 2, (1, 2, 3))

    def test_determinant_matches_sympy(self):
        """Test Bareiss determinants against sympy."""
        rng = random.Random(7)
        for _ in range(50):
            n = rng.randint(1, 7)
            rows = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(n)]
            assert IntMatrix.from_rows(rows).determinant() == Matrix(rows).det()

    def test_determinant_needing_row_swap(self):
        """Test a zero leading entry."""
        assert IntMatrix.from_rows([[0, 1], [1, 0]]).determinant() == -1
        assert IntMatrix.from_rows([[0, 0], [1, 0]]).determinant() == 0

    def test_xgcd(self):
        """Test Bezout coefficients."""
        for a, b in [(12, 18), (-4, 6), (0, 5), (7, 0), (0, 0)]:
            x, y, g = xgcd(a, b)
            assert x * a + y * b == g
            assert g >= 0


class TestSmithNormalForm:
    """Test Smith normal form."""

    def test_known_examples(self):
        """Test small matrices with known invariant factors."""
        assert check_smith_form(IntMatrix.from_rows([[2, 0], [0, 3], [7, 7]])) == [1, 1]
        assert check_smith_form(IntMatrix.from_rows([[2, 4], [6, 8]])) == [2, 4]
        assert check_smith_form(IntMatrix.identity(2)) == [1, 1]
        assert check_smith_form(IntMatrix.from_rows([[0]])) == [0]

    def test_empty_matrix(self):
        """Test that an empty matrix has identity transforms."""
        a = IntMatrix(0, 3, ())
        d, u, v = smith_normal_form(a)
        assert d == a
        assert u == IntMatrix.identity(0)
        assert v == IntMatrix.identity(3)

    def test_random_matrices(self):
        """Test the defining properties on 1000 random matrices."""
        rng = random.Random(2024)
        for _ in range(1000):
            check_smith_form(random_matrix(rng))

    def test_invariant_under_transpose_and_permutation(self):
        """Test that the diagonal does not depend on row order or transposition."""
        rng = random.Random(11)
        for _ in range(100):
            a = random_matrix(rng)
            diagonal = smith_normal_form(a)[0].diagonal()
            assert smith_normal_form(a.transpose())[0].diagonal() == diagonal
            rows = a.to_rows()
            rng.shuffle(rows)
            assert smith_normal_form(IntMatrix.from_rows(rows, a.cols))[0].diagonal() == diagonal


class TestHermiteNormalForm:
    """Test row-style Hermite normal form."""

    def test_lattice_of_even_sum_vectors(self):
        """Test a redundant generating set."""
        assert hermite_normal_form([[2, 0], [0, 2], [1, 1]], 2) == [[1, 1], [0, 2]]

    def test_zero_rows_removed(self):
        """Test that dependent rows vanish."""
        assert hermite_normal_form([[2, 4], [1, 2]], 2) == [[1, 2]]


class TestAbelianization:
    """Test abelian invariants of presentations."""

    def test_cyclic(self):
        """Test a finite cyclic group."""
        assert abelianization(parse_presentation("< a | a^5 >")) == AbelianInvariants(torsion=(5,))

    def test_surface_group(self, surface2):
        """Test that the genus-2 surface group has free abelianization of rank 4."""
        assert abelianization(surface2) == AbelianInvariants(free_rank=4)

    def test_triangle_group_is_perfect(self):
        """Test the (2,3,7) triangle group."""
        assert abelianization(parse_presentation("< a, b | a^2, b^3, (a*b)^7 >")) == AbelianInvariants()

    def test_free_group(self, free2):
        """Test generators without relators."""
        assert abelianization(free2) == AbelianInvariants(free_rank=2)

    def test_mixed(self):
        """Test torsion with a free part."""
        h1 = abelianization(parse_presentation("< a, b, c | a^2, b^4, [a,b], [a,c], [b,c] >"))
        assert h1 == AbelianInvariants(torsion=(2, 4), free_rank=1)
        assert str(h1) == "C2 x C4 x Z"

    def test_invariant_under_relator_changes(self):
        """Test reordering, inverting and rotating relators."""
        p = parse_presentation("< a, b, c | a^4*b^2, a^2*b^6*c^3, [a,b]*c^6 >")
        expected = abelianization(p)
        variants = [
            tuple(reversed(p.relators)),
            tuple(invert(r) for r in p.relators),
            tuple(type(r)(r.letters[1:] + r.letters[:1]) for r in p.relators),
        ]
        for relators in variants:
            assert abelianization(Presentation(p.generator_names, relators)) == expected


class TestInvariantsModel:
    """Test the abelian invariants model."""

    def test_divisibility_chain_enforced(self):
        """Test that invariant factors must divide each other."""
        with pytest.raises(ValidationError):
            AbelianInvariants(torsion=(2, 3))

    def test_string_forms(self):
        """Test the published-table text form."""
        assert str(AbelianInvariants.from_cyclic_orders([2, 4, 31])) == "C2 x C4 x C31"
        assert str(AbelianInvariants.from_cyclic_orders([2, 2, 13])) == "C2^2 x C13"
        assert str(AbelianInvariants(free_rank=2)) == "Z^2"
        assert str(AbelianInvariants()) == "trivial"

    def test_parse_invariants(self):
        """Test reading invariants back from text."""
        assert parse_invariants("C2 x C4 x C31").torsion == (2, 124)
        assert parse_invariants("C2^4 x C3") == AbelianInvariants.from_cyclic_orders([2, 2, 2, 2, 3])
        assert parse_invariants("C3^3 x C3").torsion == (3, 3, 3, 3)
        assert parse_invariants("Z^2") == AbelianInvariants(free_rank=2)
        assert parse_invariants("trivial") == AbelianInvariants()
        with pytest.raises(ValueError):
            parse_invariants("D4")

    def test_order(self):
        """Test group order of finite and infinite groups."""
        assert parse_invariants("C2 x C4 x C31").order == 248
        assert AbelianInvariants(free_rank=1).order is None


class TestOrderFourQuotients:
    """Test counting and enumeration of order-four quotients."""

    @pytest.mark.parametrize("text, expected", [
        ("C2 x C4 x C31", 3),
        ("C2^4", 35),
        ("C2^6", 651),
        ("C3^3", 0),
        ("Z^2", 7),
        ("C2^2", 1),
        ("C2^3", 7),
        ("C8", 1),
        ("C2 x C3 x C4^2", 19),
        ("C2^2 x C3 x C4", 11),
    ])
    def test_counts(self, text, expected):
        """Test counts for groups from the census table."""
        assert count_order4_quotients(parse_invariants(text)) == expected

    def test_free_abelian_split(self):
        """Test the cyclic/Klein split for Z^2."""
        assert order4_quotient_counts(AbelianInvariants(free_rank=2)) == {
            QuotientType.C4: 6,
            QuotientType.V4: 1,
        }

    @pytest.mark.parametrize("orders", [
        [2, 4], [4, 4], [2, 8], [2, 2, 4], [2, 2, 2], [3, 4], [2, 4, 4], [2, 2, 2, 2], [6, 12],
    ])
    def test_counts_match_exhaustive_oracle(self, orders):
        """Test counts against closure-based subgroup enumeration."""
        g = AbelianInvariants.from_cyclic_orders(orders)
        assert count_order4_quotients(g) == len(subgroups_of_index(orders, 4))

    def test_free_part_matches_sublattice_count(self):
        """Test Z^2 against Hermite-form enumeration of index-4 sublattices."""
        sublattices = [
            (a, b, d) for a in (1, 2, 4) for d in (1, 2, 4) if a * d == 4 for b in range(d)
        ]
        assert count_order4_quotients(AbelianInvariants(free_rank=2)) == len(sublattices)

    def test_enumerate_cyclic(self):
        """Test the unique index-four subgroup of C8."""
        descriptors = enumerate_order4_quotients(parse_invariants("C8"))
        assert len(descriptors) == 1
        assert descriptors[0].quotient_type is QuotientType.C4

    def test_enumerate_klein(self):
        """Test that C2 x C2 has the trivial kernel."""
        descriptors = enumerate_order4_quotients(parse_invariants("C2^2"))
        assert len(descriptors) == 1
        assert descriptors[0].quotient_type is QuotientType.V4
        assert descriptors[0].kernel_basis.to_rows() == [[2, 0], [0, 2]]

    def test_enumerate_free_rank_two(self):
        """Test the seven index-four sublattices of Z^2."""
        descriptors = enumerate_order4_quotients(AbelianInvariants(free_rank=2))
        kinds = [d.quotient_type for d in descriptors]
        assert kinds.count(QuotientType.C4) == 6
        assert kinds.count(QuotientType.V4) == 1
        klein = next(d for d in descriptors if d.quotient_type is QuotientType.V4)
        assert klein.kernel_basis.to_rows() == [[2, 0], [0, 2]]
        for d in descriptors:
            assert abs(d.kernel_basis.determinant()) == 4

    def test_enumerate_agrees_with_count_and_is_sorted(self):
        """Test that enumeration and the closed formula agree."""
        for text in ["C2 x C4 x C31", "C2^4", "C2 x Z", "C4^2", "C2^2 x C3 x C4", "C3^3"]:
            g = parse_invariants(text)
            descriptors = enumerate_order4_quotients(g)
            assert len(descriptors) == count_order4_quotients(g)
            keys = [d.sort_key() for d in descriptors]
            assert keys == sorted(keys)
            assert len(set(keys)) == len(keys)
