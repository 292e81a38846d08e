"""Totally real base fields of degree at most 2 and their prime splitting.

A field is either Q (discriminant 1) or the real quadratic field of a
fundamental discriminant D > 1.  Places above a rational prime carry only
the data every formula downstream consumes: ramification index e, residue
degree f, residue size q = p^f, and a position index to tell apart the
two places of a split prime.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedInputError

__all__ = [
    "FieldSpec",
    "PlaceData",
    "is_prime",
    "is_fundamental_discriminant",
    "kronecker_symbol",
    "places_above",
    "is_unramified",
    "parse_field",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _is_squarefree(n: int) -> bool:
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def is_fundamental_discriminant(d: int) -> bool:
    """True for 1 (the discriminant of Q) and for fundamental D of quadratic fields."""
    if d == 1:
        return True
    if d % 4 == 1:
        return _is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _is_squarefree(m)
    return False


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extended to all integers n.

    Multiplicative in n, with (a/2) = 0, 1, -1 for a even, a = +-1 mod 8,
    a = +-3 mod 8, and (a/-1) = sign of a.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # Jacobi symbol loop for odd n >= 1.
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class FieldSpec:
    """Q or a real quadratic field, identified by its fundamental discriminant."""

    discriminant: int

    def __post_init__(self):
        d = self.discriminant
        if d < 1 or not is_fundamental_discriminant(d):
            raise UnsupportedInputError(
                f"{d} is not a fundamental discriminant of a supported field"
            )

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(1)

    @classmethod
    def real_quadratic(cls, discriminant: int) -> "FieldSpec":
        if discriminant <= 1:
            raise UnsupportedInputError(
                "real quadratic field needs a fundamental discriminant > 1"
            )
        return cls(discriminant)

    @property
    def degree(self) -> int:
        return 1 if self.discriminant == 1 else 2

    @property
    def kind(self) -> str:
        return "rational" if self.degree == 1 else "real-quadratic"

    def __str__(self) -> str:
        return "Q" if self.degree == 1 else f"Q(sqrt:{self.discriminant})"


@dataclass(frozen=True)
class PlaceData:
    """A finite place above a rational prime.

    ``index`` is the position in the canonical list returned by
    :func:`places_above`; it distinguishes the two places of a split prime.
    """

    residue_char: int
    ram_index: int
    residue_degree: int
    residue_size: int
    index: int = 0

    def __post_init__(self):
        if self.residue_size != self.residue_char ** self.residue_degree:
            raise UnsupportedInputError(
                f"residue size {self.residue_size} is not "
                f"{self.residue_char}^{self.residue_degree}"
            )
        if self.ram_index < 1 or self.residue_degree < 1:
            raise UnsupportedInputError("e and f must be positive")

    @property
    def local_degree(self) -> int:
        return self.ram_index * self.residue_degree

    def __str__(self) -> str:
        return (
            f"v{self.index}|{self.residue_char}"
            f"(e={self.ram_index},f={self.residue_degree},q={self.residue_size})"
        )


def places_above(field: FieldSpec, p: int) -> list[PlaceData]:
    """Decompose the rational prime p in the field.

    The output order is canonical: sorted by (e, f), split places numbered
    0 and 1.
    """
    if not is_prime(p):
        raise UnsupportedInputError(f"{p} is not a prime")
    if field.degree == 1:
        return [PlaceData(p, 1, 1, p, 0)]
    chi = kronecker_symbol(field.discriminant, p)
    if chi == 1:
        return [PlaceData(p, 1, 1, p, 0), PlaceData(p, 1, 1, p, 1)]
    if chi == -1:
        return [PlaceData(p, 1, 2, p * p, 0)]
    return [PlaceData(p, 2, 1, p, 0)]


def is_unramified(field: FieldSpec, p: int) -> bool:
    """True iff p does not divide the field discriminant."""
    if not is_prime(p):
        raise UnsupportedInputError(f"{p} is not a prime")
    return field.discriminant % p != 0


def parse_field(text: str) -> FieldSpec:
    """Parse the textual field form used by the CLI: "Q" or "Q(sqrt:D)"."""
    text = text.strip()
    if text == "Q":
        return FieldSpec.rationals()
    if text.startswith("Q(sqrt:") and text.endswith(")"):
        body = text[len("Q(sqrt:"):-1]
        try:
            d = int(body)
        except ValueError:
            raise UnsupportedInputError(f"bad discriminant {body!r}") from None
        return FieldSpec.real_quadratic(d)
    raise UnsupportedInputError(f"cannot parse field {text!r}")
