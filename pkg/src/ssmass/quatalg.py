"""Quaternion algebras over the base field, encoded purely by ramification.

An algebra is the set of places where it ramifies; Hasse invariants live
in Z/2 and twisting is XOR on invariants.  No structure constants are ever
needed: every formula downstream consumes only ramification sets and
residue data.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

from .errors import InvalidAlgebraError, UnsupportedInputError
from .numfield import FieldSpec, PlaceData, is_prime, is_unramified, places_above

__all__ = [
    "QuaternionRamification",
    "LocalGroupType",
    "ValidationReport",
    "split_algebra",
    "rational_definite_algebra",
    "validate",
    "twist_by_Bp_infty",
    "discriminant",
    "local_group_type",
    "parse_algebra",
]


@dataclass(frozen=True)
class QuaternionRamification:
    """Ramification data of a quaternion algebra over ``field``.

    ``ramified_finite`` holds pairs (p, place_index) indexing into
    ``places_above(field, p)``; ``ramified_infinite`` holds infinite-place
    indices 0..degree-1.  Reciprocity parity is *not* enforced here so that
    :func:`validate` can report it; every operation validates first.
    """

    field: FieldSpec
    ramified_finite: frozenset = dataclass_field(default_factory=frozenset)
    ramified_infinite: frozenset = dataclass_field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "ramified_finite", frozenset(self.ramified_finite))
        object.__setattr__(
            self, "ramified_infinite", frozenset(self.ramified_infinite)
        )
        for p, idx in self.ramified_finite:
            n_places = len(places_above(self.field, p))
            if not 0 <= idx < n_places:
                raise InvalidAlgebraError(
                    f"place index {idx} out of range for prime {p} "
                    f"({n_places} places)"
                )
        for idx in self.ramified_infinite:
            if not 0 <= idx < self.field.degree:
                raise InvalidAlgebraError(
                    f"infinite place index {idx} out of range for degree "
                    f"{self.field.degree}"
                )

    def __str__(self) -> str:
        if not self.ramified_finite and not self.ramified_infinite:
            return f"M2({self.field})"
        fin = ",".join(f"{p}:{i}" for p, i in sorted(self.ramified_finite))
        inf = ",".join(f"inf:{i}" for i in sorted(self.ramified_infinite))
        return f"B/{self.field}[{','.join(s for s in (fin, inf) if s)}]"


def split_algebra(field: FieldSpec) -> QuaternionRamification:
    """The matrix algebra M2(F): no ramification anywhere."""
    return QuaternionRamification(field)


def rational_definite_algebra(p: int) -> QuaternionRamification:
    """The quaternion algebra over Q ramified exactly at p and infinity."""
    if not is_prime(p):
        raise UnsupportedInputError(f"{p} is not a prime")
    return QuaternionRamification(
        FieldSpec.rationals(), frozenset({(p, 0)}), frozenset({0})
    )


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    totally_indefinite: bool
    totally_definite: bool
    messages: tuple


def validate(algebra: QuaternionRamification) -> ValidationReport:
    """Check reciprocity parity and classify the infinite behaviour.

    The number of ramified places (finite plus infinite) must be even.
    """
    n_ram = len(algebra.ramified_finite) + len(algebra.ramified_infinite)
    messages = []
    valid = n_ram % 2 == 0
    if not valid:
        messages.append(
            f"reciprocity violated: {n_ram} ramified places (odd)"
        )
    totally_indefinite = not algebra.ramified_infinite
    totally_definite = len(algebra.ramified_infinite) == algebra.field.degree
    if valid and totally_definite and not algebra.ramified_finite:
        messages.append(
            "totally definite with trivial discriminant: definite but not "
            "a division algebra"
        )
    return ValidationReport(
        valid=valid,
        totally_indefinite=totally_indefinite,
        totally_definite=totally_definite,
        messages=tuple(messages),
    )


def _xor_twist(
    algebra: QuaternionRamification, p: int
) -> QuaternionRamification:
    """Add the invariants of the rational (p, infinity)-algebra, base-changed.

    At a place v | p the added local invariant is [F_v : Q_p]/2 mod 1, so v
    flips exactly when e_v * f_v is odd; finite places away from p are
    untouched; every infinite place flips.  Applying this twice is the
    identity.
    """
    fld = algebra.field
    finite = set(algebra.ramified_finite)
    for place in places_above(fld, p):
        if place.local_degree % 2 == 1:
            key = (p, place.index)
            if key in finite:
                finite.discard(key)
            else:
                finite.add(key)
    infinite = frozenset(range(fld.degree)) - algebra.ramified_infinite
    return QuaternionRamification(fld, frozenset(finite), infinite)


def twist_by_Bp_infty(
    algebra: QuaternionRamification, p: int
) -> QuaternionRamification:
    """Twist a totally indefinite algebra by the rational (p, infinity)-algebra.

    Preconditions: the algebra is valid and totally indefinite, p is
    unramified in the field, and no place of the algebra above p ramifies.
    The result is totally definite.
    """
    report = validate(algebra)
    if not report.valid:
        raise InvalidAlgebraError("; ".join(report.messages))
    if not report.totally_indefinite:
        raise InvalidAlgebraError(
            "twist requires a totally indefinite algebra"
        )
    if not is_prime(p):
        raise UnsupportedInputError(f"{p} is not a prime")
    if not is_unramified(algebra.field, p):
        raise UnsupportedInputError(
            f"prime {p} ramifies in {algebra.field}; the twist requires p "
            f"unramified in the field"
        )
    for q, idx in algebra.ramified_finite:
        if q == p:
            raise UnsupportedInputError(
                f"algebra already ramifies at place {idx} above {p}; the "
                f"twist requires p unramified in the algebra"
            )
    return _xor_twist(algebra, p)


def discriminant(algebra: QuaternionRamification) -> list[PlaceData]:
    """The finite ramified places with full (e, f, q) data, canonically ordered."""
    report = validate(algebra)
    if not report.valid:
        raise InvalidAlgebraError("; ".join(report.messages))
    out = []
    for p, idx in sorted(algebra.ramified_finite):
        out.append(places_above(algebra.field, p)[idx])
    return out


@dataclass(frozen=True)
class LocalGroupType:
    place: PlaceData
    kind: str  # "symplectic" or "quaternion-unitary"


def local_group_type(
    algebra: QuaternionRamification, place: PlaceData
) -> LocalGroupType:
    """Classify the local group at a place: symplectic away from the
    discriminant, quaternion-unitary on it."""
    known = places_above(algebra.field, place.residue_char)
    if place.index >= len(known) or known[place.index] != place:
        raise UnsupportedInputError(
            f"{place} is not a place of {algebra.field}"
        )
    ramified = (place.residue_char, place.index) in algebra.ramified_finite
    return LocalGroupType(
        place=place, kind="quaternion-unitary" if ramified else "symplectic"
    )


def parse_algebra(field: FieldSpec, text: str) -> QuaternionRamification:
    """Parse the textual algebra form: "split" or "p:idx,..." finite markers,
    optionally with "inf:idx" infinite markers."""
    text = text.strip()
    if text == "split":
        return split_algebra(field)
    finite = set()
    infinite = set()
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        left, _, right = piece.partition(":")
        if not right:
            raise UnsupportedInputError(f"bad algebra marker {piece!r}")
        try:
            idx = int(right)
        except ValueError:
            raise UnsupportedInputError(f"bad place index {right!r}") from None
        if left == "inf":
            infinite.add(idx)
        else:
            try:
                p = int(left)
            except ValueError:
                raise UnsupportedInputError(f"bad prime {left!r}") from None
            if not is_prime(p):
                raise UnsupportedInputError(f"{p} is not a prime")
            finite.add((p, idx))
    return QuaternionRamification(field, frozenset(finite), frozenset(infinite))
