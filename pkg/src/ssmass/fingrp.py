"""Closed-form orders of finite symplectic groups and friends.

Every order is returned with a factored presentation (prime-power and
q^i +- 1 factors) whose product is the value, so the CLI can print the
product shapes instead of an opaque integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import UnsupportedInputError
from .numfield import FieldSpec, PlaceData, places_above

__all__ = [
    "PowerFactor",
    "CycloFactor",
    "GroupOrder",
    "is_prime_power",
    "sp_order",
    "gl_order",
    "siegel_parabolic_order",
    "isotropic_coset_count",
    "local_index",
    "sp_order_mod_N",
]


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    for p in range(2, q + 1):
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
    return False


@dataclass(frozen=True)
class PowerFactor:
    """A factor base^exponent."""

    base: int
    exponent: int

    @property
    def value(self) -> int:
        return self.base**self.exponent

    def __str__(self) -> str:
        return f"{self.base}^{self.exponent}"


@dataclass(frozen=True)
class CycloFactor:
    """A factor q^i + sign with sign in {+1, -1}."""

    q: int
    i: int
    sign: int

    @property
    def value(self) -> int:
        return self.q**self.i + self.sign

    def __str__(self) -> str:
        op = "+" if self.sign > 0 else "-"
        return f"({self.q}^{self.i} {op} 1)"


@dataclass(frozen=True)
class GroupOrder:
    value: int
    factors: tuple

    def __post_init__(self):
        if self.value < 1:
            raise UnsupportedInputError("group order must be positive")
        prod = 1
        for f in self.factors:
            prod *= f.value
        if prod != self.value:
            raise UnsupportedInputError(
                f"factored presentation {self.factored_string()} does not "
                f"multiply to {self.value}"
            )

    @classmethod
    def from_factors(cls, factors) -> "GroupOrder":
        factors = tuple(f for f in factors if not _is_trivial(f))
        prod = 1
        for f in factors:
            prod *= f.value
        return cls(prod, factors)

    def __int__(self) -> int:
        return self.value

    def __mul__(self, other: "GroupOrder") -> "GroupOrder":
        return GroupOrder(self.value * other.value, self.factors + other.factors)

    def factored_string(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(str(f) for f in self.factors)


def _is_trivial(factor) -> bool:
    return isinstance(factor, PowerFactor) and factor.exponent == 0


def _require_prime_power(q: int):
    if not is_prime_power(q):
        raise UnsupportedInputError(f"{q} is not a prime power")


def sp_order(m: int, q: int) -> GroupOrder:
    """|Sp_{2m}(F_q)| = q^(m^2) * prod_{i=1}^{m} (q^(2i) - 1)."""
    if m < 1:
        raise UnsupportedInputError("need m >= 1")
    _require_prime_power(q)
    factors = [PowerFactor(q, m * m)]
    factors += [CycloFactor(q, 2 * i, -1) for i in range(1, m + 1)]
    return GroupOrder.from_factors(factors)


def gl_order(m: int, q: int) -> GroupOrder:
    """|GL_m(F_q)| = prod_{i=0}^{m-1} (q^m - q^i) = q^(m(m-1)/2) prod (q^i - 1)."""
    if m < 1:
        raise UnsupportedInputError("need m >= 1")
    _require_prime_power(q)
    factors = [PowerFactor(q, m * (m - 1) // 2)]
    factors += [CycloFactor(q, i, -1) for i in range(1, m + 1)]
    return GroupOrder.from_factors(factors)


def siegel_parabolic_order(m: int, q: int) -> GroupOrder:
    """Order of the stabilizer of a maximal isotropic subspace in Sp_{2m}(F_q).

    Equals q^((m^2+m)/2) * |GL_m(F_q)| = q^(m^2) * prod_{i=1}^{m} (q^i - 1);
    the exponent is pinned by the brute-force coset enumeration
    (720 / 15 = 48 at m = 2, q = 2).
    """
    if m < 1:
        raise UnsupportedInputError("need m >= 1")
    _require_prime_power(q)
    factors = [PowerFactor(q, m * m)]
    factors += [CycloFactor(q, i, -1) for i in range(1, m + 1)]
    return GroupOrder.from_factors(factors)


def isotropic_coset_count(m: int, q: int) -> GroupOrder:
    """Number of maximal isotropic subspaces: prod_{i=1}^{m} (q^i + 1)."""
    if m < 1:
        raise UnsupportedInputError("need m >= 1")
    _require_prime_power(q)
    return GroupOrder.from_factors(
        CycloFactor(q, i, +1) for i in range(1, m + 1)
    )


def local_index(
    field: FieldSpec, p: int, delta_prime: list[PlaceData], m: int
) -> GroupOrder:
    """prod over places v | p away from the discriminant of prod (q_v^i + 1).

    ``delta_prime`` is the discriminant place list of the twisted algebra;
    only its places above p matter here.  Empty product is 1.
    """
    if m < 1:
        raise UnsupportedInputError("need m >= 1")
    if field.discriminant % p == 0:
        raise UnsupportedInputError(
            f"prime {p} ramifies in {field}; the local index assumes p "
            f"unramified"
        )
    excluded = {
        (v.residue_char, v.index) for v in delta_prime if v.residue_char == p
    }
    factors = []
    for place in places_above(field, p):
        if (p, place.index) in excluded:
            continue
        factors += [
            CycloFactor(place.residue_size, i, +1) for i in range(1, m + 1)
        ]
    return GroupOrder.from_factors(factors)


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def sp_order_mod_N(m: int, field: FieldSpec, n_level: int) -> GroupOrder:
    """Order of the symplectic similitude-free group over (O_F / N).

    For each prime power l^k dividing N and each place v | l the factor is
    |Sp_{2m}(kappa_v)| * q_v^(m(2m+1) * (k e_v - 1)), using smoothness of
    the symplectic group scheme to lift through residue rings; the lifting
    exponent m(2m+1) = dim Sp_{2m} is validated against the exhaustive
    count over Z/4.  Only the split (matrix-algebra) situation is
    supported; coprimality of N with the working prime p is the caller's
    responsibility.
    """
    if m < 1:
        raise UnsupportedInputError("need m >= 1")
    if n_level < 3:
        raise UnsupportedInputError("level N must be at least 3")
    dim = m * (2 * m + 1)
    factors = []
    for ell, k in _factorize(n_level):
        for place in places_above(field, ell):
            q_v = place.residue_size
            factors += list(sp_order(m, q_v).factors)
            exponent = dim * (k * place.ram_index - 1)
            if exponent:
                factors.append(PowerFactor(q_v, exponent))
    return GroupOrder.from_factors(factors)
