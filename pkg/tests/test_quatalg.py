import pytest

from ssmass import quatalg
from ssmass.errors import InvalidAlgebraError, UnsupportedInputError
from ssmass.numfield import FieldSpec, places_above
from ssmass.quatalg import (
    QuaternionRamification,
    discriminant,
    local_group_type,
    parse_algebra,
    rational_definite_algebra,
    split_algebra,
    twist_by_Bp_infty,
    validate,
)


Q = FieldSpec.rationals()
F5 = FieldSpec.real_quadratic(5)
F8 = FieldSpec.real_quadratic(8)
PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


class TestValidate:
    def test_matrix_algebra(self):
        report = validate(split_algebra(Q))
        assert report.valid and report.totally_indefinite
        assert not report.totally_definite

    def test_odd_parity_invalid(self):
        bad = QuaternionRamification(Q, frozenset({(2, 0)}), frozenset())
        report = validate(bad)
        assert not report.valid
        assert "reciprocity" in report.messages[0]

    def test_definite_quadratic(self):
        algebra = QuaternionRamification(F5, frozenset(), frozenset({0, 1}))
        report = validate(algebra)
        assert report.valid and report.totally_definite
        # trivial discriminant is flagged
        assert any("division" in msg for msg in report.messages)

    def test_structural_bounds(self):
        with pytest.raises(InvalidAlgebraError):
            QuaternionRamification(Q, frozenset({(11, 1)}), frozenset())
        with pytest.raises(InvalidAlgebraError):
            QuaternionRamification(Q, frozenset(), frozenset({1}))

    def test_b_p_infty(self):
        algebra = rational_definite_algebra(2)
        report = validate(algebra)
        assert report.valid and report.totally_definite
        assert discriminant(algebra)[0].residue_size == 2


class TestTwist:
    def test_rational_split(self):
        twisted = twist_by_Bp_infty(split_algebra(Q), 7)
        assert twisted.ramified_finite == frozenset({(7, 0)})
        assert twisted.ramified_infinite == frozenset({0})

    def test_inert_prime_drops_out(self):
        twisted = twist_by_Bp_infty(split_algebra(F5), 2)
        assert twisted.ramified_finite == frozenset()
        assert twisted.ramified_infinite == frozenset({0, 1})
        assert discriminant(twisted) == []

    def test_split_prime_both_places(self):
        twisted = twist_by_Bp_infty(split_algebra(F5), 11)
        assert twisted.ramified_finite == frozenset({(11, 0), (11, 1)})
        places = discriminant(twisted)
        assert [v.residue_size for v in places] == [11, 11]

    def test_preconditions(self):
        with pytest.raises(UnsupportedInputError):
            twist_by_Bp_infty(split_algebra(F5), 5)  # ramified in the field
        definite = QuaternionRamification(F5, frozenset(), frozenset({0, 1}))
        with pytest.raises(InvalidAlgebraError):
            twist_by_Bp_infty(definite, 2)
        ramified_at_p = QuaternionRamification(
            Q, frozenset({(3, 0), (5, 0)}), frozenset()
        )
        with pytest.raises(UnsupportedInputError):
            twist_by_Bp_infty(ramified_at_p, 3)

    def test_involutive_on_invariants(self):
        for field in (Q, F5, F8):
            base_sets = [frozenset()]
            if field.degree == 1:
                base_sets.append(frozenset({(11, 0), (13, 0)}))
            else:
                base_sets.append(frozenset({(3, 0), (7, 0)}))
            for finite in base_sets:
                algebra = QuaternionRamification(field, finite, frozenset())
                for p in PRIMES:
                    if field.discriminant % p == 0:
                        continue
                    once = quatalg._xor_twist(algebra, p)
                    twice = quatalg._xor_twist(once, p)
                    assert twice == algebra

    def test_output_parity_and_definite(self):
        for field in (Q, F5, F8):
            algebra = split_algebra(field)
            for p in PRIMES:
                if field.discriminant % p == 0:
                    continue
                twisted = twist_by_Bp_infty(algebra, p)
                report = validate(twisted)
                assert report.valid, (field, p)
                assert report.totally_definite, (field, p)

    def test_away_from_p_preserved(self):
        algebra = QuaternionRamification(
            Q, frozenset({(11, 0), (13, 0)}), frozenset()
        )
        twisted = twist_by_Bp_infty(algebra, 3)
        for key in ((11, 0), (13, 0)):
            assert key in twisted.ramified_finite


class TestLocalGroupType:
    def test_rational(self):
        twisted = twist_by_Bp_infty(split_algebra(Q), 2)
        place = places_above(Q, 2)[0]
        assert local_group_type(twisted, place).kind == "quaternion-unitary"

    def test_quadratic(self):
        twisted = twist_by_Bp_infty(split_algebra(F5), 2)
        place = places_above(F5, 2)[0]
        assert local_group_type(twisted, place).kind == "symplectic"
        twisted11 = twist_by_Bp_infty(split_algebra(F5), 11)
        for place in places_above(F5, 11):
            assert local_group_type(twisted11, place).kind == "quaternion-unitary"

    def test_foreign_place_rejected(self):
        from ssmass.numfield import PlaceData

        twisted = twist_by_Bp_infty(split_algebra(Q), 2)
        with pytest.raises(UnsupportedInputError):
            local_group_type(twisted, PlaceData(2, 1, 2, 4, 0))


class TestParse:
    def test_split(self):
        assert parse_algebra(Q, "split") == split_algebra(Q)

    def test_finite_markers(self):
        algebra = parse_algebra(F5, "11:0,11:1")
        assert algebra.ramified_finite == frozenset({(11, 0), (11, 1)})

    def test_infinite_markers(self):
        algebra = parse_algebra(Q, "2:0,inf:0")
        assert algebra == rational_definite_algebra(2)

    def test_bad_input(self):
        with pytest.raises(UnsupportedInputError):
            parse_algebra(Q, "2")
        with pytest.raises(UnsupportedInputError):
            parse_algebra(Q, "4:0")
        with pytest.raises(UnsupportedInputError):
            parse_algebra(Q, "2:x")
