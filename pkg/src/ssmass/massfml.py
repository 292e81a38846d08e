"""The exact mass formulas and superspecial point counts.

Masses are assembled as

    sign / 2^(m d) * prod_{i=1}^{m} { zeta_F(1-2i)
        * prod_{v | Delta} (N(v)^i + (-1)^i)
        * prod_{v | p, v not | Delta} (N(v)^i + 1) }

with sign = (-1)^(d m(m+1)/2), and every ingredient is kept in the
factored presentation so the product shape can be printed, not just the
reduced fraction.  The products are read as parenthesized per factor,
(N(v)^i + (-1)^i); the g = 1 value (p-1)/24 and the decomposition
identity pin this grouping down.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    InternalConsistencyError,
    InvalidAlgebraError,
    UnsupportedInputError,
)
from . import exactnum
from .exactnum import ZetaValue
from .fingrp import GroupOrder, local_index, sp_order_mod_N
from .numfield import FieldSpec, PlaceData, is_prime, is_unramified, places_above
from .quatalg import (
    QuaternionRamification,
    discriminant,
    split_algebra,
    twist_by_Bp_infty,
    validate,
)

__all__ = [
    "LocalFactor",
    "ExactMass",
    "PointCount",
    "ZetaTable",
    "DecompositionReport",
    "mass_classical",
    "mass_quaternionic",
    "mass_shimura",
    "mass_decomposition_check",
    "superspecial_point_count",
]


@dataclass(frozen=True)
class LocalFactor:
    """One factor N(v)^i + sign attached to a place."""

    place: PlaceData
    i: int
    sign: int  # -1 on the discriminant (alternating), +1 for the index part

    @property
    def value(self) -> int:
        return self.place.residue_size**self.i + self.sign

    def __str__(self) -> str:
        op = "+" if self.sign > 0 else "-"
        return f"({self.place.residue_size}^{self.i} {op} 1)"


@dataclass(frozen=True)
class ExactMass:
    """An exact positive rational mass with its factored presentation."""

    value: Fraction
    sign: int
    two_exponent: int
    zeta_factors: tuple  # ZetaValue, one per i = 1..m
    local_factors: tuple  # LocalFactor

    def __post_init__(self):
        if self.value <= 0:
            raise InternalConsistencyError(
                f"mass {self.value} is not positive"
            )
        if self.factored_value() != self.value:
            raise InternalConsistencyError(
                "mass factors do not multiply to the value"
            )

    def factored_value(self) -> Fraction:
        prod = Fraction(self.sign, 2**self.two_exponent)
        for z in self.zeta_factors:
            prod *= z.value
        for f in self.local_factors:
            prod *= f.value
        return prod

    def factored_string(self) -> str:
        pieces = [f"{self.sign}/2^{self.two_exponent}"]
        pieces += [
            f"zeta_F({z.argument})[{z.value}]" for z in self.zeta_factors
        ]
        pieces += [str(f) for f in self.local_factors]
        return " * ".join(pieces)


@dataclass(frozen=True)
class PointCount:
    level: int
    group_order: GroupOrder
    mass: ExactMass
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise InternalConsistencyError("point count must be positive")
        if self.group_order.value * self.mass.value != self.count:
            raise InternalConsistencyError(
                "point count is not group order times mass"
            )


class ZetaTable:
    """Externally supplied zeta_F(1-2i) values keyed by (discriminant, i).

    Entries would override computed values only for fields of degree >= 3;
    for the supported degree <= 2 fields the computed value always wins, so
    the table is an ingestion surface, never an override of exact
    in-package arithmetic.

    File format: UTF-8 lines "D <tab> i <tab> numerator/denominator";
    lines starting with '#' are ignored.
    """

    def __init__(self, entries: dict | None = None):
        self._entries: dict[tuple[int, int], Fraction] = {}
        for (disc, i), value in (entries or {}).items():
            self._entries[(int(disc), int(i))] = Fraction(value)

    @classmethod
    def from_text(cls, text: str) -> "ZetaTable":
        entries = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise UnsupportedInputError(
                    f"zeta table line {lineno}: expected 3 tab-separated "
                    f"fields, got {len(parts)}"
                )
            try:
                disc = int(parts[0])
                i = int(parts[1])
                value = Fraction(parts[2])
            except (ValueError, ZeroDivisionError) as exc:
                raise UnsupportedInputError(
                    f"zeta table line {lineno}: {exc}"
                ) from None
            entries[(disc, i)] = value
        return cls(entries)

    @classmethod
    def from_file(cls, path) -> "ZetaTable":
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_text(handle.read())

    def lookup(self, discriminant: int, i: int):
        return self._entries.get((discriminant, i))

    def __len__(self) -> int:
        return len(self._entries)


def _zeta_for(field: FieldSpec, i: int, table: ZetaTable | None) -> ZetaValue:
    # Degree <= 2 is computed exactly in-package; table entries only apply
    # to degree >= 3 fields, which FieldSpec cannot currently represent.
    if field.degree <= 2:
        return exactnum.dedekind_zeta_neg(field, i)
    value = table.lookup(field.discriminant, i) if table else None
    if value is None:
        raise UnsupportedInputError(
            f"no external zeta value for discriminant {field.discriminant}, "
            f"i={i}"
        )
    return ZetaValue(field, 1 - 2 * i, value)


def _assemble(
    field: FieldSpec,
    m: int,
    ramified: list[PlaceData],
    index_places: list[PlaceData],
    table: ZetaTable | None,
) -> ExactMass:
    d = field.degree
    sign = (-1) ** ((d * m * (m + 1) // 2) % 2)
    zetas = []
    locals_ = []
    value = Fraction(sign, 2 ** (m * d))
    for i in range(1, m + 1):
        z = _zeta_for(field, i, table)
        zetas.append(z)
        value *= z.value
        for v in ramified:
            f = LocalFactor(v, i, (-1) ** i)
            locals_.append(f)
            value *= f.value
        for v in index_places:
            f = LocalFactor(v, i, +1)
            locals_.append(f)
            value *= f.value
    return ExactMass(
        value=value,
        sign=sign,
        two_exponent=m * d,
        zeta_factors=tuple(zetas),
        local_factors=tuple(locals_),
    )


def mass_classical(g: int, p: int) -> ExactMass:
    """Mass of the g-dimensional superspecial principally polarized locus
    in characteristic p:

        (-1)^(g(g+1)/2) / 2^g * prod zeta(1-2i) * prod (p^i + (-1)^i).
    """
    if g < 1:
        raise UnsupportedInputError("need g >= 1")
    if not is_prime(p):
        raise UnsupportedInputError(f"{p} is not a prime")
    place = places_above(FieldSpec.rationals(), p)[0]
    return _assemble(FieldSpec.rationals(), g, [place], [], None)


def _check_quaternionic_preconditions(
    field: FieldSpec, algebra: QuaternionRamification, p: int, m: int
):
    if m < 1:
        raise UnsupportedInputError("need m >= 1")
    if algebra.field != field:
        raise InvalidAlgebraError(
            f"algebra is defined over {algebra.field}, not {field}"
        )
    report = validate(algebra)
    if not report.valid:
        raise InvalidAlgebraError("; ".join(report.messages))
    if not report.totally_indefinite:
        raise InvalidAlgebraError(
            "the mass formula requires a totally indefinite algebra"
        )
    if not is_unramified(field, p):
        raise UnsupportedInputError(
            f"prime {p} ramifies in {field}"
        )
    for q, idx in sorted(algebra.ramified_finite):
        if q == p:
            raise UnsupportedInputError(
                f"algebra ramifies at place {idx} above p={p}"
            )


def mass_quaternionic(
    field: FieldSpec,
    algebra: QuaternionRamification,
    p: int,
    m: int,
    zeta: ZetaTable | None = None,
) -> ExactMass:
    """Mass of the superspecial locus for a totally indefinite algebra.

    The discriminant of the twisted (totally definite) algebra contributes
    (N(v)^i + (-1)^i) factors; the places above p away from it contribute
    (N(v)^i + 1).
    """
    _check_quaternionic_preconditions(field, algebra, p, m)
    twisted = twist_by_Bp_infty(algebra, p)
    delta_prime = discriminant(twisted)
    on_disc = {(v.residue_char, v.index) for v in delta_prime}
    index_places = [
        v
        for v in places_above(field, p)
        if (v.residue_char, v.index) not in on_disc
    ]
    return _assemble(field, m, delta_prime, index_places, zeta)


def mass_shimura(
    field: FieldSpec,
    algebra: QuaternionRamification,
    m: int,
    zeta: ZetaTable | None = None,
) -> ExactMass:
    """Mass of a rank-m Hermitian lattice over a totally definite algebra:

        (-1)^(d m(m+1)/2) / 2^(md) * prod_i { zeta_F(1-2i)
            * prod_{v | Delta} (N(v)^i + (-1)^i) }.
    """
    if m < 1:
        raise UnsupportedInputError("need m >= 1")
    if algebra.field != field:
        raise InvalidAlgebraError(
            f"algebra is defined over {algebra.field}, not {field}"
        )
    report = validate(algebra)
    if not report.valid:
        raise InvalidAlgebraError("; ".join(report.messages))
    if not report.totally_definite:
        raise InvalidAlgebraError(
            "this mass formula requires a totally definite algebra"
        )
    return _assemble(field, m, discriminant(algebra), [], zeta)


@dataclass(frozen=True)
class DecompositionReport:
    holds: bool
    quaternionic: ExactMass
    definite: ExactMass
    index: GroupOrder


def mass_decomposition_check(
    field: FieldSpec,
    algebra: QuaternionRamification,
    p: int,
    m: int,
    zeta: ZetaTable | None = None,
) -> DecompositionReport:
    """Verify exactly that the indefinite mass equals the definite mass of
    the twist times the local index at p."""
    lhs = mass_quaternionic(field, algebra, p, m, zeta)
    twisted = twist_by_Bp_infty(algebra, p)
    rhs_mass = mass_shimura(field, twisted, m, zeta)
    index = local_index(field, p, discriminant(twisted), m)
    holds = lhs.value == rhs_mass.value * index.value
    return DecompositionReport(
        holds=holds, quaternionic=lhs, definite=rhs_mass, index=index
    )


def superspecial_point_count(
    field: FieldSpec,
    algebra: QuaternionRamification,
    p: int,
    m: int,
    n_level: int,
    zeta: ZetaTable | None = None,
) -> PointCount:
    """Number of superspecial points with a symplectic level-N structure:
    the group order over Z/N times the mass.  Integrality is asserted, not
    assumed: a non-integer signals a bug."""
    if not isinstance(n_level, int) or n_level < 3:
        raise UnsupportedInputError("level N must be an integer >= 3")
    if gcd(n_level, p) != 1:
        raise UnsupportedInputError(
            f"level N={n_level} must be prime to p={p}"
        )
    ramified_primes = {q for q, _ in algebra.ramified_finite}
    n = n_level
    ell = 2
    while ell * ell <= n:
        if n % ell == 0:
            if ell in ramified_primes:
                raise UnsupportedInputError(
                    f"algebra ramifies at {ell} | N; the level group order "
                    f"is only supported in the split case"
                )
            while n % ell == 0:
                n //= ell
        ell += 1
    if n > 1 and n in ramified_primes:
        raise UnsupportedInputError(
            f"algebra ramifies at {n} | N; the level group order is only "
            f"supported in the split case"
        )

    mass = mass_quaternionic(field, algebra, p, m, zeta)
    group = sp_order_mod_N(m, field, n_level)
    total = group.value * mass.value
    if total.denominator != 1 or total <= 0:
        raise InternalConsistencyError(
            f"point count {total} is not a positive integer"
        )
    return PointCount(
        level=n_level, group_order=group, mass=mass, count=int(total)
    )
