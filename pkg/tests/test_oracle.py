from fractions import Fraction

import pytest

from ssmass import fingrp, oracle
from ssmass.errors import UnsupportedInputError
from ssmass.numfield import FieldSpec


class TestEnumSp:
    @pytest.mark.parametrize(
        "m,q,expected",
        [(1, 2, 6), (1, 3, 24), (1, 4, 60), (1, 5, 120), (2, 2, 720)],
    )
    def test_counts(self, m, q, expected):
        result = oracle.enum_sp(m, q)
        assert result.count == expected
        assert result.elapsed >= 0
        assert "symplectic" in result.method

    def test_matches_closed_form(self):
        for m, q in [(1, 2), (1, 3), (1, 4), (1, 5), (1, 7), (2, 2), (2, 3)]:
            assert oracle.enum_sp(m, q).count == fingrp.sp_order(m, q).value

    def test_bounds(self):
        with pytest.raises(UnsupportedInputError):
            oracle.enum_sp(1, 11)
        with pytest.raises(UnsupportedInputError):
            oracle.enum_sp(2, 7)
        with pytest.raises(UnsupportedInputError):
            oracle.enum_sp(3, 2)
        with pytest.raises(UnsupportedInputError):
            oracle.enum_sp(1, 6)  # not a prime power


class TestEnumIsotropic:
    @pytest.mark.parametrize(
        "m,q,expected", [(1, 2, 3), (1, 3, 4), (2, 2, 15), (2, 3, 40)]
    )
    def test_counts(self, m, q, expected):
        assert oracle.enum_isotropic(m, q).count == expected

    def test_matches_closed_form(self):
        for m, q in [(1, 2), (1, 3), (1, 5), (2, 2), (2, 3)]:
            assert (
                oracle.enum_isotropic(m, q).count
                == fingrp.isotropic_coset_count(m, q).value
            )

    def test_bounds(self):
        with pytest.raises(UnsupportedInputError):
            oracle.enum_isotropic(2, 7)


class TestEnumSpMod:
    def test_counts(self):
        assert oracle.enum_sp_mod(1, 4).count == 48
        assert oracle.enum_sp_mod(1, 9).count == 648
        assert oracle.enum_sp_mod(1, 2).count == 6

    def test_matches_lifted_closed_form(self):
        for p in (2, 3):
            assert (
                oracle.enum_sp_mod(1, p * p).count
                == fingrp.sp_order_mod_N(1, FieldSpec.rationals(), p * p).value
            )

    def test_bounds(self):
        with pytest.raises(UnsupportedInputError):
            oracle.enum_sp_mod(2, 4)
        with pytest.raises(UnsupportedInputError):
            oracle.enum_sp_mod(1, 25)


class TestBernoulliTriangle:
    def test_examples(self):
        assert oracle.bernoulli_alt(0) == 1
        assert oracle.bernoulli_alt(2) == Fraction(1, 6)
        assert oracle.bernoulli_alt(10) == Fraction(5, 66)

    def test_first_convention(self):
        assert oracle.bernoulli_alt(1) == Fraction(-1, 2)

    def test_bounds(self):
        with pytest.raises(UnsupportedInputError):
            oracle.bernoulli_alt(31)


class TestStabilizerCrossCheck:
    def test_parabolic_order_by_exhaustion_sp4_f2(self):
        """The closed form q^(m^2) prod (q^i - 1) is pinned by exhaustively
        counting the stabilizer of the standard maximal isotropic subspace
        inside Sp_4(F_2)."""
        import itertools

        def pairing(u, v):
            return (
                u[0] * v[2] + u[1] * v[3] - u[2] * v[0] - u[3] * v[1]
            ) % 2

        basis = [
            (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
        ]
        gram = [[pairing(a, b) for b in basis] for a in basis]

        def is_symplectic(mat):
            for a in range(4):
                for b in range(4):
                    val = pairing(
                        tuple(mat[r][a] for r in range(4)),
                        tuple(mat[r][b] for r in range(4)),
                    )
                    if val != gram[a][b]:
                        return False
            return True

        def stabilizes_span_e1_e2(mat):
            # columns of the first two basis vectors stay in span(e1, e2)
            return mat[2][0] == mat[3][0] == mat[2][1] == mat[3][1] == 0

        total = 0
        stab = 0
        for bits in itertools.product((0, 1), repeat=16):
            mat = [list(bits[4 * r: 4 * r + 4]) for r in range(4)]
            if is_symplectic(mat):
                total += 1
                if stabilizes_span_e1_e2(mat):
                    stab += 1
        assert total == 720
        assert stab == 48
        assert fingrp.siegel_parabolic_order(2, 2).value == stab
        assert total // stab == fingrp.isotropic_coset_count(2, 2).value
