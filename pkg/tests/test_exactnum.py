from fractions import Fraction

import pytest

from ssmass import exactnum, oracle
from ssmass.errors import NonConvergenceError, UnsupportedInputError
from ssmass.numfield import FieldSpec


Q = FieldSpec.rationals()
F5 = FieldSpec.real_quadratic(5)
F8 = FieldSpec.real_quadratic(8)


class TestBernoulli:
    @pytest.mark.parametrize(
        "n,expected",
        [
            (0, Fraction(1)),
            (1, Fraction(-1, 2)),
            (2, Fraction(1, 6)),
            (4, Fraction(-1, 30)),
            (12, Fraction(-691, 2730)),
        ],
    )
    def test_small_values(self, n, expected):
        assert exactnum.bernoulli(n) == expected

    def test_odd_vanish(self):
        for n in range(3, 31, 2):
            assert exactnum.bernoulli(n) == 0

    def test_von_staudt_clausen_denominators(self):
        for k in range(1, 11):
            denom = 1
            p = 2
            while p <= 2 * k + 1:
                if (2 * k) % (p - 1) == 0:
                    denom *= p
                p += 1
                while not _is_prime(p):
                    p += 1
            assert exactnum.bernoulli(2 * k).denominator == denom

    def test_sign_alternation(self):
        for k in range(1, 11):
            value = exactnum.bernoulli(2 * k)
            assert (-1) ** (k + 1) * value > 0

    def test_matches_triangle_oracle(self):
        for n in range(31):
            assert exactnum.bernoulli(n) == oracle.bernoulli_alt(n)

    def test_negative_rejected(self):
        with pytest.raises(UnsupportedInputError):
            exactnum.bernoulli(-1)


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


class TestBernoulliPolynomial:
    def test_at_zero_is_bernoulli(self):
        assert exactnum.bernoulli_polynomial(1, 0) == Fraction(-1, 2)
        for n in range(8):
            assert exactnum.bernoulli_polynomial(n, 0) == exactnum.bernoulli(n)

    def test_examples(self):
        assert exactnum.bernoulli_polynomial(2, Fraction(1, 5)) == Fraction(1, 150)
        assert exactnum.bernoulli_polynomial(4, Fraction(2, 5)) == Fraction(91, 3750)

    def test_difference_equation(self):
        # B_n(x+1) - B_n(x) = n x^(n-1)
        for n in range(1, 8):
            for x in (Fraction(1, 3), Fraction(2, 7), 3):
                x = Fraction(x)
                lhs = exactnum.bernoulli_polynomial(n, x + 1) - \
                    exactnum.bernoulli_polynomial(n, x)
                assert lhs == n * x ** (n - 1)


class TestZetaValues:
    @pytest.mark.parametrize(
        "i,expected",
        [
            (1, Fraction(-1, 12)),
            (2, Fraction(1, 120)),
            (6, Fraction(691, 32760)),
        ],
    )
    def test_riemann(self, i, expected):
        assert exactnum.riemann_zeta_neg(i) == expected

    @pytest.mark.parametrize(
        "n,disc,expected",
        [
            (2, 5, Fraction(4, 5)),
            (4, 5, Fraction(-8)),
            (2, 8, Fraction(2)),
        ],
    )
    def test_gen_bernoulli(self, n, disc, expected):
        assert exactnum.gen_bernoulli(n, disc) == expected

    def test_gen_bernoulli_odd_vanish(self):
        # the Kronecker character of a real quadratic field is even
        for disc in (5, 8, 12, 13):
            for n in (1, 3, 5):
                assert exactnum.gen_bernoulli(n, disc) == 0

    def test_gen_bernoulli_rejects_non_fundamental(self):
        for bad in (9, 10, 15, 1, 0, -4):
            with pytest.raises(UnsupportedInputError):
                exactnum.gen_bernoulli(2, bad)

    def test_dedekind_rational(self):
        value = exactnum.dedekind_zeta_neg(Q, 1)
        assert value.value == Fraction(-1, 12)
        assert value.argument == -1

    def test_dedekind_quadratic(self):
        assert exactnum.dedekind_zeta_neg(F5, 1).value == Fraction(1, 30)
        assert exactnum.dedekind_zeta_neg(F5, 2).value == Fraction(1, 60)

    def test_dedekind_nonzero(self):
        for field in (Q, F5, F8, FieldSpec.real_quadratic(13)):
            for i in range(1, 7):
                assert exactnum.dedekind_zeta_neg(field, i).value != 0


class TestFunctionalEquation:
    @pytest.mark.parametrize("field", [Q, F5, F8])
    @pytest.mark.parametrize("i", [1, 2])
    def test_passes(self, field, i):
        report = exactnum.zeta_functional_check(field, i, 1e-9)
        assert report.passed
        assert report.error_bound <= 1e-9

    def test_small_budget_fails_to_certify(self):
        with pytest.raises(NonConvergenceError):
            exactnum.zeta_functional_check(F5, 1, 1e-9, term_budget=50)

    def test_out_of_range_i(self):
        with pytest.raises(UnsupportedInputError):
            exactnum.zeta_functional_check(Q, 5, 1e-9)
