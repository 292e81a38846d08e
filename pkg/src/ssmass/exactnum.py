"""Exact rational special values: Bernoulli numbers and zeta at negative odd integers.

Conventions, fixed once and for all:

* B_1 = -1/2 (the "first" Bernoulli convention), so the defining
  recurrence sum_{k=0}^{n} C(n+1, k) B_k = 0 holds for n >= 1.
* Generalized Bernoulli numbers use the sum over a = 1..D (not 0..D-1):
  B_{n,chi} = D^{n-1} * sum_{a=1}^{D} chi(a) B_n(a/D).
* zeta(1-2i) = -B_{2i}/(2i); L(1-n, chi) = -B_{n,chi}/n.

The independent cross-check for the Bernoulli path lives in
:mod:`ssmass.oracle` and uses a structurally different scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NonConvergenceError, UnsupportedInputError
from .numfield import FieldSpec, is_fundamental_discriminant, kronecker_symbol

__all__ = [
    "Rational",
    "ZetaValue",
    "FunctionalEquationReport",
    "bernoulli",
    "bernoulli_polynomial",
    "riemann_zeta_neg",
    "gen_bernoulli",
    "dedekind_zeta_neg",
    "zeta_functional_check",
    "DEFAULT_TERM_BUDGET",
]

# Exact rationals are stdlib Fractions: always in lowest terms, positive
# denominator, structural equality.
Rational = Fraction

DEFAULT_TERM_BUDGET = 10**6


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2, via the defining recurrence."""
    if n < 0:
        raise UnsupportedInputError("Bernoulli index must be nonnegative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    acc = Fraction(0)
    for k in range(n):
        acc += math.comb(n + 1, k) * bernoulli(k)
    return -acc / (n + 1)


def bernoulli_polynomial(n: int, x) -> Fraction:
    """B_n(x) = sum_k C(n,k) B_k x^(n-k)."""
    if n < 0:
        raise UnsupportedInputError("Bernoulli polynomial degree must be nonnegative")
    x = Fraction(x)
    acc = Fraction(0)
    for k in range(n + 1):
        acc += math.comb(n, k) * bernoulli(k) * x ** (n - k)
    return acc


def riemann_zeta_neg(i: int) -> Fraction:
    """zeta(1-2i) = -B_{2i}/(2i) for i >= 1."""
    if i < 1:
        raise UnsupportedInputError("need i >= 1")
    return -bernoulli(2 * i) / (2 * i)


def gen_bernoulli(n: int, discriminant: int) -> Fraction:
    """Generalized Bernoulli number B_{n,chi} for the Kronecker character of D > 1."""
    if n < 1:
        raise UnsupportedInputError("need n >= 1")
    if discriminant <= 1 or not is_fundamental_discriminant(discriminant):
        raise UnsupportedInputError(
            f"{discriminant} is not a fundamental discriminant > 1"
        )
    d = discriminant
    acc = Fraction(0)
    for a in range(1, d + 1):
        chi = kronecker_symbol(d, a)
        if chi:
            acc += chi * bernoulli_polynomial(n, Fraction(a, d))
    return d ** (n - 1) * acc


@dataclass(frozen=True)
class ZetaValue:
    """An exact value zeta_F(1-2i) of the Dedekind zeta function."""

    field: FieldSpec
    argument: int
    value: Fraction

    def __post_init__(self):
        if self.argument >= 0 or self.argument % 2 == 0:
            raise UnsupportedInputError("argument must be a negative odd integer 1-2i")


def dedekind_zeta_neg(field: FieldSpec, i: int) -> ZetaValue:
    """zeta_F(1-2i), exactly.

    For Q this is zeta(1-2i); for a real quadratic field of discriminant D
    it factors as zeta(1-2i) * L(1-2i, chi_D) with L(1-n, chi) = -B_{n,chi}/n.
    """
    if i < 1:
        raise UnsupportedInputError("need i >= 1")
    if field.degree == 1:
        value = riemann_zeta_neg(i)
    elif field.degree == 2:
        n = 2 * i
        l_value = -gen_bernoulli(n, field.discriminant) / n
        value = riemann_zeta_neg(i) * l_value
    else:  # unreachable with current FieldSpec, kept as a guard
        raise UnsupportedInputError(f"unsupported field degree {field.degree}")
    return ZetaValue(field, 1 - 2 * i, value)


def _zeta_numeric(s: int, budget: int) -> tuple[float, float]:
    """Partial sum of zeta(s) plus an integral tail estimate.

    Returns (estimate, bound): the tail of sum n^-s over n > N is bracketed
    by the integrals over [N+1, oo) and [N, oo); we take the midpoint and
    half the bracket width as the error bound.
    """
    n_terms = budget
    partial = math.fsum(k ** (-float(s)) for k in range(1, n_terms + 1))
    upper = n_terms ** (1.0 - s) / (s - 1.0)
    lower = (n_terms + 1.0) ** (1.0 - s) / (s - 1.0)
    return partial + 0.5 * (upper + lower), 0.5 * (upper - lower)


def _dirichlet_l_numeric(discriminant: int, s: int, budget: int) -> tuple[float, float]:
    """Partial sum of L(s, chi_D) with an Abel-summation tail bound.

    Partial sums of chi_D over any interval are bounded by the maximum
    partial sum over one period, so the tail after N terms is at most
    2 * max|S_chi| * (N+1)^-s.
    """
    d = discriminant
    chi = [kronecker_symbol(d, a) for a in range(d)]
    running = 0
    max_partial = 0
    for a in range(d):
        running += chi[a]
        max_partial = max(max_partial, abs(running))
    n_terms = budget
    partial = math.fsum(
        chi[k % d] * k ** (-float(s)) for k in range(1, n_terms + 1) if chi[k % d]
    )
    return partial, 2.0 * max_partial * (n_terms + 1.0) ** (-float(s))


@dataclass(frozen=True)
class FunctionalEquationReport:
    field: FieldSpec
    i: int
    numeric_value: float        # zeta_F(2i) from the series
    predicted: float            # zeta_F(1-2i) through the completed-zeta symmetry
    exact: Fraction             # dedekind_zeta_neg
    rel_error: float
    error_bound: float          # a-priori relative bound from the tail estimates
    terms: int
    passed: bool


def zeta_functional_check(
    field: FieldSpec,
    i: int,
    rel_tol: float = 1e-9,
    term_budget: int = DEFAULT_TERM_BUDGET,
) -> FunctionalEquationReport:
    """Check zeta_F(1-2i) against the symmetry of the completed zeta function.

    The completed zeta Lambda_F(s) = |D|^(s/2) (pi^(-s/2) Gamma(s/2))^d zeta_F(s)
    satisfies Lambda_F(s) = Lambda_F(1-s); evaluating zeta_F(2i) numerically and
    mapping it through the symmetry predicts zeta_F(1-2i), which must agree
    with the exact value to the requested relative tolerance.
    """
    if i < 1 or i > 4:
        raise UnsupportedInputError("functional-equation check supports 1 <= i <= 4")
    s = 2 * i
    zeta_est, zeta_bound = _zeta_numeric(s, term_budget)
    rel_bound = zeta_bound / zeta_est
    if field.degree == 2:
        l_est, l_bound = _dirichlet_l_numeric(field.discriminant, s, term_budget)
        rel_bound += l_bound / abs(l_est)
        numeric = zeta_est * l_est
    else:
        numeric = zeta_est

    d = field.degree
    disc = abs(field.discriminant)
    gamma_ratio = (
        math.pi ** ((1 - 2 * s) / 2.0)
        * math.gamma(s / 2.0)
        / math.gamma((1 - s) / 2.0)
    )
    predicted = disc ** (s - 0.5) * gamma_ratio**d * numeric

    if rel_bound > rel_tol:
        raise NonConvergenceError(
            f"term budget {term_budget} certifies only {rel_bound:.3e} "
            f"relative error, worse than rel_tol {rel_tol:.3e}"
        )
    exact = dedekind_zeta_neg(field, i).value
    rel_error = abs(predicted - float(exact)) / abs(float(exact))
    return FunctionalEquationReport(
        field=field,
        i=i,
        numeric_value=numeric,
        predicted=predicted,
        exact=exact,
        rel_error=rel_error,
        error_bound=rel_bound,
        terms=term_budget,
        passed=rel_error <= rel_tol,
    )
