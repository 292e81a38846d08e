"""Brute-force ground truth, independent of every closed form in the package.

The symplectic group is counted by enumerating ordered symplectic bases
(pick a vector, pick its companion with pairing 1, recurse on the
perpendicular complement), maximal isotropic subspaces by scanning echelon
forms, and Bernoulli numbers come from the Akiyama-Tanigawa triangle.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedInputError

__all__ = [
    "EnumerationResult",
    "enum_sp",
    "enum_isotropic",
    "enum_sp_mod",
    "bernoulli_alt",
]


@dataclass(frozen=True)
class EnumerationResult:
    count: int
    elapsed: float
    method: str


# ---------------------------------------------------------------------------
# Small finite fields, table driven.  Elements are integers 0..q-1 whose
# base-p digits are the coefficients of a polynomial reduced mod the
# lexicographically-first irreducible polynomial of the right degree.
# ---------------------------------------------------------------------------

def _factor_prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise UnsupportedInputError(f"{q} is not a prime power")
            return p, k
    raise UnsupportedInputError(f"{q} is not a prime power")


def _poly_mul_mod(a, b, modulus, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    deg = len(modulus) - 1
    for i in range(len(out) - 1, deg - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(deg):
                out[i - deg + j] = (out[i - deg + j] - c * modulus[j]) % p
    return out[:deg] + [0] * (deg - len(out))


def _first_irreducible(p: int, k: int) -> list[int]:
    """Lexicographically-first monic irreducible of degree k over F_p (low coeffs first)."""
    if k == 1:
        return [0, 1]
    for idx in range(p**k):
        coeffs = []
        n = idx
        for _ in range(k):
            coeffs.append(n % p)
            n //= p
        poly = coeffs + [1]
        if _is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")


def _poly_gcd(a, b, p):
    def trim(c):
        while c and c[-1] % p == 0:
            c = c[:-1]
        return c

    a, b = trim([x % p for x in a]), trim([x % p for x in b])
    while b:
        inv_lead = pow(b[-1], -1, p)
        r = list(a)
        while len(r) >= len(b) and trim(r):
            shift = len(r) - len(b)
            factor = (r[-1] * inv_lead) % p
            for i, c in enumerate(b):
                r[shift + i] = (r[shift + i] - factor * c) % p
            r = trim(r)
        a, b = b, r
    return a


def _is_irreducible(poly, p) -> bool:
    """Monic poly of degree k >= 2 over F_p: x^(p^k) == x mod poly and
    gcd(x^(p^(k/l)) - x, poly) = 1 for every prime l dividing k."""
    k = len(poly) - 1
    x_poly = [0, 1] + [0] * (k - 2)

    def pth_power(c):
        acc = [1] + [0] * (k - 1)
        for _ in range(p):
            acc = _poly_mul_mod(acc, c, poly, p)
        return acc

    def frob_iter(times):
        cur = list(x_poly)
        for _ in range(times):
            cur = pth_power(cur)
        return cur

    if frob_iter(k) != x_poly:
        return False
    for ell in range(2, k + 1):
        if k % ell == 0 and _is_prime_small(ell):
            diff = [(a - b) % p for a, b in zip(frob_iter(k // ell), x_poly)]
            if len(_poly_gcd(diff, poly, p)) != 1:
                return False
    return True


def _is_prime_small(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


def _gf_tables(q: int):
    """(add, mul, neg) tables for GF(q)."""
    p, k = _factor_prime_power(q)
    if k == 1:
        add = tuple(tuple((a + b) % p for b in range(p)) for a in range(p))
        mul = tuple(tuple((a * b) % p for b in range(p)) for a in range(p))
        neg = tuple((-a) % p for a in range(p))
        return add, mul, neg
    modulus = _first_irreducible(p, k)

    def decode(n):
        c = []
        for _ in range(k):
            c.append(n % p)
            n //= p
        return c

    def encode(c):
        n = 0
        for d in reversed(c):
            n = n * p + d
        return n

    elems = [decode(n) for n in range(q)]
    add = tuple(
        tuple(encode([(x + y) % p for x, y in zip(a, b)]) for b in elems)
        for a in elems
    )
    mul = tuple(
        tuple(encode(_poly_mul_mod(a, b, modulus, p)) for b in elems) for a in elems
    )
    neg = tuple(encode([(-x) % p for x in a]) for a in elems)
    return add, mul, neg


class _Symplectic:
    """Standard symplectic space F_q^(2m) with pairing sum x_j y_(m+j) - x_(m+j) y_j."""

    def __init__(self, m: int, q: int):
        self.m = m
        self.q = q
        self.add, self.mul, self.neg = _gf_tables(q)
        self.dim = 2 * m
        self.vectors = self._all_vectors(self.dim)

    def _all_vectors(self, dim):
        vecs = [()]
        for _ in range(dim):
            vecs = [v + (a,) for v in vecs for a in range(self.q)]
        return vecs

    def pairing(self, u, v) -> int:
        add, mul, neg = self.add, self.mul, self.neg
        m = self.m
        acc = 0
        for j in range(m):
            acc = add[acc][mul[u[j]][v[m + j]]]
            acc = add[acc][neg[mul[u[m + j]][v[j]]]]
        return acc


def enum_sp(m: int, q: int) -> EnumerationResult:
    """Count Sp_{2m}(F_q) by enumerating ordered symplectic bases.

    Each basis is visited: pick a nonzero vector, pick its companion with
    pairing 1, restrict to the perpendicular complement of the pair and
    recurse.  A pairing lookup table keeps the inner loops cheap.
    """
    if m == 1:
        if q > 9:
            raise UnsupportedInputError("enum_sp supports q <= 9 for m = 1")
    elif m == 2:
        if q > 5:
            raise UnsupportedInputError("enum_sp supports q <= 5 for m = 2")
    else:
        raise UnsupportedInputError("enum_sp supports m in {1, 2}")
    _factor_prime_power(q)
    start = time.perf_counter()
    space = _Symplectic(m, q)
    vectors = space.vectors
    n_vec = len(vectors)
    pair_tab = [
        [space.pairing(vectors[i], vectors[j]) for j in range(n_vec)]
        for i in range(n_vec)
    ]

    def count_bases(candidates, pairs_left):
        if pairs_left == 0:
            return 1
        total = 0
        for v in candidates:
            if v == 0:  # index 0 encodes the zero vector
                continue
            row_v = pair_tab[v]
            for w in candidates:
                if row_v[w] != 1:
                    continue
                row_w = pair_tab[w]
                complement = [
                    u for u in candidates if row_v[u] == 0 and row_w[u] == 0
                ]
                total += count_bases(complement, pairs_left - 1)
        return total

    count = count_bases(list(range(n_vec)), m)
    elapsed = time.perf_counter() - start
    return EnumerationResult(
        count=count,
        elapsed=elapsed,
        method=f"ordered symplectic bases of F_{q}^{2*m}",
    )


def enum_isotropic(m: int, q: int) -> EnumerationResult:
    """Count maximal isotropic subspaces of F_q^(2m) by scanning echelon forms."""
    if m not in (1, 2) or q > 5:
        raise UnsupportedInputError("enum_isotropic supports m in {1, 2}, q <= 5")
    _factor_prime_power(q)
    start = time.perf_counter()
    space = _Symplectic(m, q)
    dim = 2 * m
    count = 0
    for pivots in _combinations(range(dim), m):
        free_positions = [
            (r, c)
            for r in range(m)
            for c in range(pivots[r] + 1, dim)
            if c not in pivots
        ]
        for values in _tuples(q, len(free_positions)):
            rows = [[0] * dim for _ in range(m)]
            for r, piv in enumerate(pivots):
                rows[r][piv] = 1
            for (r, c), val in zip(free_positions, values):
                rows[r][c] = val
            vecs = [tuple(r) for r in rows]
            if all(
                space.pairing(vecs[a], vecs[b]) == 0
                for a in range(m)
                for b in range(a + 1, m)
            ) and all(space.pairing(v, v) == 0 for v in vecs):
                count += 1
    elapsed = time.perf_counter() - start
    return EnumerationResult(
        count=count,
        elapsed=elapsed,
        method=f"echelon-form scan of {m}-dimensional isotropic subspaces",
    )


def _combinations(pool, r):
    pool = list(pool)
    n = len(pool)
    if r == 0:
        yield ()
        return
    for i in range(n - r + 1):
        for rest in _combinations(pool[i + 1:], r - 1):
            yield (pool[i],) + rest


def _tuples(q, length):
    out = [()]
    for _ in range(length):
        out = [t + (a,) for t in out for a in range(q)]
    return out


def enum_sp_mod(m: int, modulus: int) -> EnumerationResult:
    """Count 2x2 determinant-1 matrices over Z/modulus by exhaustive scan."""
    if m != 1:
        raise UnsupportedInputError("enum_sp_mod supports m = 1 only")
    if modulus < 2 or modulus > 16:
        raise UnsupportedInputError("enum_sp_mod supports moduli 2..16")
    start = time.perf_counter()
    count = 0
    rng = range(modulus)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if (a * d - b * c) % modulus == 1:
                        count += 1
    elapsed = time.perf_counter() - start
    return EnumerationResult(
        count=count,
        elapsed=elapsed,
        method=f"exhaustive scan of 2x2 matrices over Z/{modulus}",
    )


def bernoulli_alt(n: int) -> Fraction:
    """B_n via the Akiyama-Tanigawa triangle.

    The triangle natively produces the B_1 = +1/2 convention; the sign is
    flipped at n = 1 so the result matches the package convention B_1 = -1/2.
    All other values coincide.
    """
    if n < 0 or n > 30:
        raise UnsupportedInputError("bernoulli_alt supports 0 <= n <= 30")
    row = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        row[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            row[j - 1] = j * (row[j - 1] - row[j])
    return -row[0] if n == 1 else row[0]
