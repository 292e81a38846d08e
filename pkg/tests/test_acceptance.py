"""Acceptance suite: every criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion; any failure fails the corresponding test.
"""

import time
from fractions import Fraction

from ssmass import exactnum, fingrp, massfml, oracle
from ssmass.dieudonne import (
    automorphism_shape,
    good_basis,
    scramble,
    standard_module,
    verify_good_basis,
)
from ssmass.numfield import FieldSpec
from ssmass.quatalg import split_algebra


Q = FieldSpec.rationals()
F5 = FieldSpec.real_quadratic(5)
F8 = FieldSpec.real_quadratic(8)
SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def _report(number, description):
    print(f"ACCEPTANCE {number}: PASS - {description}")


def test_criterion_1_classical_masses():
    for p in SMALL_PRIMES:
        assert massfml.mass_classical(1, p).value == Fraction(p - 1, 24)
    assert massfml.mass_classical(2, 2).value == Fraction(1, 1152)
    # steady-state runtime < 1 ms per evaluation
    worst = 0.0
    for p in SMALL_PRIMES + [2]:
        start = time.perf_counter()
        massfml.mass_classical(1, p)
        worst = max(worst, time.perf_counter() - start)
    start = time.perf_counter()
    massfml.mass_classical(2, 2)
    worst = max(worst, time.perf_counter() - start)
    assert worst < 1e-3, f"slowest classical mass took {worst * 1e3:.3f} ms"
    _report(1, f"classical masses exact; slowest call {worst * 1e6:.0f} us")


def test_criterion_2_specialization():
    checked = 0
    for p in SMALL_PRIMES:
        for g in range(1, 5):
            assert (
                massfml.mass_quaternionic(Q, split_algebra(Q), p, g).value
                == massfml.mass_classical(g, p).value
            )
            checked += 1
    _report(2, f"split-over-Q mass equals classical mass on {checked} grid points")


def test_criterion_3_decomposition():
    checked = 0
    for field in (Q, F5, F8):
        algebra = split_algebra(field)
        for p in SMALL_PRIMES:
            if field.discriminant % p == 0:
                continue
            for m in (1, 2, 3):
                report = massfml.mass_decomposition_check(field, algebra, p, m)
                assert report.holds, (field, p, m)
                checked += 1
    _report(3, f"mass = definite mass * local index on {checked} grid points")


def test_criterion_4_zeta_special_values():
    start = time.perf_counter()
    assert exactnum.dedekind_zeta_neg(F5, 1).value == Fraction(1, 30)
    assert exactnum.dedekind_zeta_neg(F5, 2).value == Fraction(1, 60)
    for field in (Q, F5, F8):
        for i in (1, 2):
            report = exactnum.zeta_functional_check(field, i, 1e-9)
            assert report.passed, (field, i, report.rel_error)
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"zeta checks took {elapsed:.1f} s"
    _report(4, f"zeta values exact and functional equation holds at 1e-9 "
               f"({elapsed:.1f} s)")


def test_criterion_5_group_order_oracles():
    for m, q in [(1, 2), (1, 3), (1, 4), (1, 5), (2, 2), (2, 3)]:
        assert oracle.enum_sp(m, q).count == fingrp.sp_order(m, q).value
        if q <= 5:
            assert (
                oracle.enum_isotropic(m, q).count
                == fingrp.isotropic_coset_count(m, q).value
            )
    assert oracle.enum_sp_mod(1, 4).count == 48
    assert oracle.enum_sp_mod(1, 4).count == fingrp.sp_order_mod_N(1, Q, 4).value
    big = oracle.enum_sp(2, 3)
    assert big.count == 51840
    assert big.elapsed < 60.0, f"enum_sp(2,3) took {big.elapsed:.1f} s"
    _report(5, f"enumeration matches closed forms; enum_sp(2,3) = 51840 in "
               f"{big.elapsed:.2f} s")


def test_criterion_6_point_count_integrality():
    checked = 0
    for field in (Q, F5):
        algebra = split_algebra(field)
        for p in (2, 3, 5, 7):
            if field.discriminant % p == 0:
                continue
            for m in (1, 2):
                for level in (3, 4, 5, 7):
                    if level % p == 0:
                        continue
                    result = massfml.superspecial_point_count(
                        field, algebra, p, m, level
                    )
                    assert result.count >= 1
                    checked += 1
    _report(6, f"point counts are positive integers on {checked} grid points")


def test_criterion_7_good_basis_recovery():
    start = time.perf_counter()
    trials = 0
    for p in (2, 3):
        for f in (1, 2, 3):
            for m in (1, 2):
                module, _ = standard_module(p, f, m)
                for seed in range(50):
                    scrambled = scramble(module, seed)
                    basis = good_basis(scrambled)
                    ok, violations = verify_good_basis(scrambled, basis)
                    assert ok, (p, f, m, seed, violations[:2])
                    trials += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 120.0, f"basis recovery took {elapsed:.1f} s"
    _report(7, f"{trials} scramble-and-recover trials verified in "
               f"{elapsed:.1f} s")


def test_criterion_8_automorphism_count():
    module, basis = standard_module(2, 2, 1)
    ring = module.ring
    elements = list(ring.elements())
    reductions = set()
    for a in elements:
        for b in elements:
            for c in elements:
                for d in elements:
                    phi = [[a, b], [c, d]]
                    report = automorphism_shape(module, basis, phi)
                    if report.accepted:
                        assert report.b_block_zero_mod_p
                        key = tuple(
                            tuple(ring.reduce(e).coeffs for e in row)
                            for row in phi
                        )
                        reductions.add(key)
    parabolic = fingrp.siegel_parabolic_order(1, 4).value
    assert parabolic == 12
    assert len(reductions) == parabolic
    assert fingrp.sp_order(1, 4).value // parabolic == 5
    assert fingrp.isotropic_coset_count(1, 4).value == 5
    _report(8, f"{len(reductions)} accepted mod-p blocks = parabolic order 12; "
               f"index 5 matches the coset count")
