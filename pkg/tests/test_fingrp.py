import pytest

from ssmass import fingrp
from ssmass.errors import UnsupportedInputError
from ssmass.fingrp import (
    GroupOrder,
    PowerFactor,
    CycloFactor,
    gl_order,
    is_prime_power,
    isotropic_coset_count,
    local_index,
    siegel_parabolic_order,
    sp_order,
    sp_order_mod_N,
)
from ssmass.numfield import FieldSpec
from ssmass.quatalg import discriminant, split_algebra, twist_by_Bp_infty


Q = FieldSpec.rationals()
F5 = FieldSpec.real_quadratic(5)
PRIME_POWERS_16 = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


class TestOrders:
    @pytest.mark.parametrize(
        "m,q,expected", [(1, 2, 6), (2, 2, 720), (2, 3, 51840)]
    )
    def test_sp(self, m, q, expected):
        assert sp_order(m, q).value == expected

    @pytest.mark.parametrize("m,q,expected", [(1, 5, 4), (2, 2, 6), (2, 3, 48)])
    def test_gl(self, m, q, expected):
        assert gl_order(m, q).value == expected

    def test_gl_matches_product_form(self):
        for m in (1, 2, 3):
            for q in (2, 3, 4, 5):
                direct = 1
                for i in range(m):
                    direct *= q**m - q**i
                assert gl_order(m, q).value == direct

    @pytest.mark.parametrize("m,q,expected", [(1, 2, 2), (1, 3, 6), (2, 2, 48)])
    def test_parabolic(self, m, q, expected):
        assert siegel_parabolic_order(m, q).value == expected

    @pytest.mark.parametrize(
        "m,q,expected", [(1, 2, 3), (2, 2, 15), (2, 3, 40)]
    )
    def test_cosets(self, m, q, expected):
        assert isotropic_coset_count(m, q).value == expected

    def test_product_identity(self):
        for m in range(1, 6):
            for q in PRIME_POWERS_16:
                assert (
                    sp_order(m, q).value
                    == isotropic_coset_count(m, q).value
                    * siegel_parabolic_order(m, q).value
                )

    def test_factored_presentations_multiply(self):
        for builder in (sp_order, gl_order, siegel_parabolic_order,
                        isotropic_coset_count):
            for m in (1, 2, 3):
                for q in (2, 3, 4, 9):
                    order = builder(m, q)
                    prod = 1
                    for factor in order.factors:
                        prod *= factor.value
                    assert prod == order.value

    def test_prime_power_guard(self):
        assert is_prime_power(16) and is_prime_power(27)
        assert not is_prime_power(6) and not is_prime_power(1)
        with pytest.raises(UnsupportedInputError):
            sp_order(1, 6)

    def test_group_order_consistency_check(self):
        with pytest.raises(UnsupportedInputError):
            GroupOrder(5, (PowerFactor(2, 1),))


class TestLocalIndex:
    def test_rational_ramified_everywhere(self):
        twisted = twist_by_Bp_infty(split_algebra(Q), 7)
        delta = discriminant(twisted)
        for m in (1, 2, 3):
            assert local_index(Q, 7, delta, m).value == 1

    def test_inert_prime(self):
        assert local_index(F5, 2, [], 1).value == 5
        assert local_index(F5, 2, [], 2).value == 85

    def test_split_prime_partial(self):
        twisted = twist_by_Bp_infty(split_algebra(F5), 11)
        delta = discriminant(twisted)
        # both places above 11 are on the discriminant: empty product
        assert local_index(F5, 11, delta, 3).value == 1
        # and with a bare discriminant both contribute
        assert local_index(F5, 11, [], 1).value == 12 * 12

    def test_ramified_prime_rejected(self):
        with pytest.raises(UnsupportedInputError):
            local_index(F5, 5, [], 1)


class TestSpOrderModN:
    def test_prime_levels(self):
        assert sp_order_mod_N(1, Q, 3).value == 24
        assert sp_order_mod_N(1, F5, 3).value == 720

    def test_prime_power_lift(self):
        assert sp_order_mod_N(1, Q, 4).value == 48
        for m in (1, 2):
            for ell, k in ((2, 2), (3, 2), (5, 2), (2, 3)):
                expected = sp_order(m, ell).value * ell ** (
                    m * (2 * m + 1) * (k - 1)
                )
                assert sp_order_mod_N(m, Q, ell**k).value == expected

    def test_multiplicative(self):
        for m in (1, 2):
            for a, b in ((3, 4), (5, 9), (4, 7), (3, 25)):
                lhs = sp_order_mod_N(m, Q, a * b).value
                rhs = (
                    sp_order_mod_N(m, Q, a).value
                    * sp_order_mod_N(m, Q, b).value
                )
                assert lhs == rhs

    def test_ramified_level_prime(self):
        # 5 ramifies in Q(sqrt 5): one place, e = 2, kappa = F_5
        expected = sp_order(1, 5).value * 5 ** (1 * 3 * (2 - 1))
        assert sp_order_mod_N(1, F5, 5).value == expected

    def test_small_level_rejected(self):
        with pytest.raises(UnsupportedInputError):
            sp_order_mod_N(1, Q, 2)
