"""Truncated Witt rings W_level(F_{p^degree}) for level 1 or 2, with linear algebra.

Level 2 is the working precision of the whole subpackage: relations like
F Y = pX are invisible mod p and fully visible mod p^2.  Level 1 is the
residue field, used for all mod-p computations.

An element is a coefficient tuple of length ``degree`` over Z/p^level,
representing a polynomial in a root of the lexicographically-first monic
irreducible polynomial h of that degree over F_p (lifted verbatim to
Z/p^2).  The Frobenius sigma sends the root to the Hensel lift of its
p-th power, so sigma reduces to x -> x^p mod p and sigma^degree = id.
"""

from __future__ import annotations

from ..errors import UnsupportedInputError

__all__ = [
    "TruncWittRing",
    "WittElem",
    "build_witt_ring",
    "FieldSolver",
    "RingSolver",
    "solve_mod_p",
]

_MAX_DEGREE = 12


def _first_irreducible(p: int, degree: int) -> list[int]:
    """Lex-first monic irreducible of given degree over F_p, low coefficients first."""
    if degree == 1:
        return [0, 1]
    for code in range(p**degree):
        coeffs = []
        n = code
        for _ in range(degree):
            coeffs.append(n % p)
            n //= p
        poly = coeffs + [1]
        if _poly_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")


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
    out = out[:deg]
    return out + [0] * (deg - len(out))


def _poly_gcd(a, b, p):
    """GCD of coefficient lists over F_p (low coefficients first)."""

    def trim(c):
        while c and c[-1] % p == 0:
            c = c[:-1]
        return c

    a, b = trim([x % p for x in a]), trim([x % p for x in b])
    while b:
        # a mod b
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


def _poly_irreducible(poly, p) -> bool:
    """Monic poly of degree k >= 2 over F_p: x^(p^k) = x mod poly and
    gcd(x^(p^(k/l)) - x, poly) = 1 for every prime l | k."""
    k = len(poly) - 1
    x_elem = ([0, 1] + [0] * (k - 2))[:k]

    def pth_power(c):
        acc = [1] + [0] * (k - 1)
        for _ in range(p):
            acc = _poly_mul_mod(acc, c, poly, p)
        return acc

    def frobenius_power(times):
        cur = list(x_elem)
        for _ in range(times):
            cur = pth_power(cur)
        return cur

    if frobenius_power(k) != x_elem:
        return False
    for ell in range(2, k + 1):
        if k % ell == 0 and all(ell % d for d in range(2, ell)):
            diff = [
                (a - b) % p for a, b in zip(frobenius_power(k // ell), x_elem)
            ]
            if len(_poly_gcd(diff, poly, p)) != 1:
                return False
    return True


class WittElem:
    """Immutable element of a TruncWittRing; coefficient tuple over Z/p^level."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = coeffs

    def __add__(self, other):
        mod = self.ring.modulus
        return WittElem(
            self.ring,
            tuple((a + b) % mod for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __sub__(self, other):
        mod = self.ring.modulus
        return WittElem(
            self.ring,
            tuple((a - b) % mod for a, b in zip(self.coeffs, other.coeffs)),
        )

    def __neg__(self):
        mod = self.ring.modulus
        return WittElem(self.ring, tuple((-a) % mod for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            mod = self.ring.modulus
            return WittElem(
                self.ring, tuple((a * other) % mod for a in self.coeffs)
            )
        return WittElem(
            self.ring, self.ring._mul_coeffs(self.coeffs, other.coeffs)
        )

    def __rmul__(self, other):
        return self.__mul__(other)

    def __eq__(self, other):
        return (
            isinstance(other, WittElem)
            and self.ring is other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.ring), self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"W{self.coeffs}"

    def is_unit(self) -> bool:
        return any(a % self.ring.p for a in self.coeffs)


class TruncWittRing:
    """W_level(F_{p^degree}) as (Z/p^level)[x]/(h~)."""

    def __init__(self, p: int, degree: int, level: int = 2):
        if level not in (1, 2):
            raise UnsupportedInputError("only truncation levels 1 and 2 exist")
        if degree < 1 or degree > _MAX_DEGREE:
            raise UnsupportedInputError(f"ring degree {degree} out of range")
        self.p = p
        self.degree = degree
        self.level = level
        self.modulus = p**level
        # h over F_p and its verbatim lift; the lift of an irreducible h
        # presents the unramified extension at any level.
        self.h_mod_p = _first_irreducible(p, degree)
        self.h_lift = [c % self.modulus for c in self.h_mod_p]
        self._red_rows = self._reduction_rows()
        self.zero = WittElem(self, (0,) * degree)
        self.one = self.from_int(1)
        self._residue = None
        self._sigma_mats = self._build_sigma()

    # -- construction ------------------------------------------------------

    def _reduction_rows(self):
        """Coefficient rows of x^k mod h~ for k = degree .. 2*degree-2."""
        deg, mod = self.degree, self.modulus
        rows = {}
        cur = [(-c) % mod for c in self.h_lift[:deg]]  # x^degree
        rows[deg] = list(cur)
        for k in range(deg + 1, 2 * deg - 1):
            shifted = [0] + cur[: deg - 1]
            top = cur[deg - 1]
            if top:
                for j in range(deg):
                    shifted[j] = (shifted[j] + top * rows[deg][j]) % mod
            cur = shifted
            rows[k] = list(cur)
        return rows

    def _mul_coeffs(self, a, b):
        deg, mod = self.degree, self.modulus
        if deg == 1:
            return ((a[0] * b[0]) % mod,)
        out = [0] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % mod
        for k in range(2 * deg - 2, deg - 1, -1):
            c = out[k]
            if c:
                row = self._red_rows[k]
                for j in range(deg):
                    out[j] = (out[j] + c * row[j]) % mod
        return tuple(out[:deg])

    def _build_sigma(self):
        """Matrices of sigma^e for e = 0..degree-1 (columns: images of x^j)."""
        deg = self.degree
        if deg == 1:
            ident = [[1]]
            return [ident]
        x = self.from_coeffs((0, 1) + (0,) * (deg - 2))
        y = x
        for _ in range(self.p - 1):
            y = y * x  # y = x^p
        if self.level == 2:
            y = self._hensel_root(y)
        if self._eval_poly(self.h_lift, y):
            raise AssertionError("Frobenius image is not a root of h")
        # powers of y give the images of the power basis under sigma
        def mat_of_root(root):
            cols = []
            acc = self.one
            for _ in range(deg):
                cols.append(acc.coeffs)
                acc = acc * root
            # matrix[row][col] = coefficient `row` of root^col
            return [[cols[c][r] for c in range(deg)] for r in range(deg)]

        mats = [None] * deg
        mats[0] = [
            [1 if r == c else 0 for c in range(deg)] for r in range(deg)
        ]
        current_root = y
        for e in range(1, deg):
            mats[e] = mat_of_root(current_root)
            current_root = self._apply_mat(mats[1], current_root)
        # sanity: sigma^degree = identity, i.e. sigma^(degree-1) applied to y is x
        final = self._apply_mat(mats[deg - 1], y)
        if final != x:
            raise AssertionError("Frobenius does not have the expected order")
        return mats

    def _apply_mat(self, mat, elem):
        deg, mod = self.degree, self.modulus
        c = elem.coeffs
        return WittElem(
            self,
            tuple(
                sum(mat[r][j] * c[j] for j in range(deg)) % mod
                for r in range(deg)
            ),
        )

    def _eval_poly(self, int_coeffs, elem):
        acc = self.zero
        for c in reversed(int_coeffs):
            acc = acc * elem + self.from_int(c)
        return acc

    def _hensel_root(self, approx):
        """One Newton step sends a mod-p root of h~ to a mod-p^2 root."""
        deriv = [(k * c) % self.modulus for k, c in enumerate(self.h_lift)][1:]
        value = self._eval_poly(self.h_lift, approx)
        slope = self._eval_poly(deriv, approx)
        return approx - value * self.inverse(slope)

    # -- basic API ----------------------------------------------------------

    def from_int(self, n: int) -> WittElem:
        return WittElem(
            self, (n % self.modulus,) + (0,) * (self.degree - 1)
        )

    def from_coeffs(self, coeffs) -> WittElem:
        coeffs = tuple(int(c) % self.modulus for c in coeffs)
        if len(coeffs) != self.degree:
            raise UnsupportedInputError(
                f"expected {self.degree} coefficients, got {len(coeffs)}"
            )
        return WittElem(self, coeffs)

    @property
    def size(self) -> int:
        return self.modulus**self.degree

    @property
    def residue_ring(self) -> "TruncWittRing":
        """The residue field (level-1 ring with the same h)."""
        if self.level == 1:
            return self
        if self._residue is None:
            self._residue = TruncWittRing(self.p, self.degree, level=1)
        return self._residue

    def elements(self):
        """All ring elements in lexicographic coefficient order (first
        coefficient most significant)."""
        deg, mod = self.degree, self.modulus
        for code in range(mod**deg):
            coeffs = []
            n = code
            for _ in range(deg):
                coeffs.append(n % mod)
                n //= mod
            yield WittElem(self, tuple(reversed(coeffs)))

    def sigma(self, elem: WittElem, power: int = 1) -> WittElem:
        e = power % self.degree
        if e == 0:
            return elem
        return self._apply_mat(self._sigma_mats[e], elem)

    def sigma_inv(self, elem: WittElem) -> WittElem:
        return self.sigma(elem, self.degree - 1)

    def reduce(self, elem: WittElem) -> WittElem:
        """Level-2 element -> residue field element."""
        res = self.residue_ring
        return WittElem(res, tuple(c % self.p for c in elem.coeffs))

    def lift(self, elem: WittElem) -> WittElem:
        """Residue field element -> level-2 element (verbatim coefficients)."""
        if self.level == 1:
            raise UnsupportedInputError("lift only makes sense at level 2")
        return WittElem(self, tuple(elem.coeffs))

    def times_p(self, residue_elem: WittElem) -> WittElem:
        """p * (any lift of a residue element); well defined at level 2."""
        return WittElem(
            self, tuple((self.p * c) % self.modulus for c in residue_elem.coeffs)
        )

    def divisible_by_p(self, elem: WittElem) -> bool:
        return all(c % self.p == 0 for c in elem.coeffs)

    def div_p(self, elem: WittElem) -> WittElem:
        """Exact division by p of a level-2 element; the result is a residue
        field element (the quotient is only defined mod p)."""
        if not self.divisible_by_p(elem):
            raise UnsupportedInputError("element is not divisible by p")
        res = self.residue_ring
        return WittElem(res, tuple((c // self.p) % self.p for c in elem.coeffs))

    def inverse(self, elem: WittElem) -> WittElem:
        if not elem.is_unit():
            raise UnsupportedInputError(f"{elem} is not a unit")
        if self.level == 1:
            # power to q-2 in the residue field
            q = self.size
            result = self.one
            base = elem
            e = q - 2
            while e:
                if e & 1:
                    result = result * base
                base = base * base
                e >>= 1
            return result
        res_inv = self.residue_ring.inverse(self.reduce(elem))
        approx = self.lift(res_inv)
        return approx * (self.from_int(2) - elem * approx)


def build_witt_ring(p: int, f: int) -> TruncWittRing:
    """The level-2 truncated Witt ring of the degree-f unramified extension.

    Sizes are deliberately small: p <= 5 and f <= 4.
    """
    if p not in (2, 3, 5):
        raise UnsupportedInputError("supported primes are 2, 3, 5")
    if not 1 <= f <= 4:
        raise UnsupportedInputError("supported degrees are 1..4")
    return TruncWittRing(p, f, level=2)


# ---------------------------------------------------------------------------
# Vector and matrix helpers (entries are WittElems of one ring).
# ---------------------------------------------------------------------------

def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v):
    return [a - b for a, b in zip(u, v)]


def vec_neg(u):
    return [-a for a in u]


def vec_scale(c, u):
    return [c * a for a in u]


def vec_sigma(ring, u, power=1):
    return [ring.sigma(a, power) for a in u]


def mat_vec(mat, vec):
    zero = None
    out = []
    for row in mat:
        acc = None
        for a, b in zip(row, vec):
            if not a or not b:
                continue
            term = a * b
            acc = term if acc is None else acc + term
        if acc is None:
            if zero is None:
                zero = vec[0].ring.zero
            acc = zero
        out.append(acc)
    return out


def mat_mul(a, b):
    n, k = len(a), len(b)
    cols = len(b[0])
    zero = a[0][0].ring.zero
    out = []
    for i in range(n):
        row_a = a[i]
        row = []
        for j in range(cols):
            acc = None
            for t in range(k):
                x = row_a[t]
                if not x:
                    continue
                y = b[t][j]
                if not y:
                    continue
                term = x * y
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else zero)
        out.append(row)
    return out


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def mat_identity(ring, n):
    return [
        [ring.one if i == j else ring.zero for j in range(n)] for i in range(n)
    ]


def mat_scalar(ring, n, value: int):
    c = ring.from_int(value)
    return [
        [c if i == j else ring.zero for j in range(n)] for i in range(n)
    ]


def mat_sigma(ring, a, power=1):
    return [[ring.sigma(x, power) for x in row] for row in a]


def mat_equal(a, b) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_is_zero(a) -> bool:
    return all(not x for row in a for x in row)


def reduce_vec(ring, u):
    return [ring.reduce(a) for a in u]


def reduce_mat(ring, a):
    return [[ring.reduce(x) for x in row] for row in a]


def lift_vec(ring, u):
    return [ring.lift(a) for a in u]


def lift_mat(ring, a):
    return [[ring.lift(x) for x in row] for row in a]


def divp_vec(ring, u):
    return [ring.div_p(a) for a in u]


def times_p_vec(ring, u):
    return [ring.times_p(a) for a in u]


# ---------------------------------------------------------------------------
# Linear solving.
# ---------------------------------------------------------------------------

class FieldSolver:
    """Gaussian elimination over the residue field with a frozen pivot
    pattern, so solutions are a fixed linear function of the right side."""

    def __init__(self, ring, rows):
        self.ring = ring
        self.n_rows = len(rows)
        self.n_cols = len(rows[0]) if rows else 0
        # eliminate [A | I]
        a = [list(r) for r in rows]
        e = mat_identity(ring, self.n_rows)
        pivots = []  # (row, col)
        r = 0
        for c in range(self.n_cols):
            pivot_row = None
            for rr in range(r, self.n_rows):
                if a[rr][c]:
                    pivot_row = rr
                    break
            if pivot_row is None:
                continue
            a[r], a[pivot_row] = a[pivot_row], a[r]
            e[r], e[pivot_row] = e[pivot_row], e[r]
            inv = ring.inverse(a[r][c])
            a[r] = [inv * x for x in a[r]]
            e[r] = [inv * x for x in e[r]]
            for rr in range(self.n_rows):
                if rr != r and a[rr][c]:
                    factor = a[rr][c]
                    a[rr] = [x - factor * y for x, y in zip(a[rr], a[r])]
                    e[rr] = [x - factor * y for x, y in zip(e[rr], e[r])]
            pivots.append((r, c))
            r += 1
            if r == self.n_rows:
                break
        self.rref = a
        self.elim = e
        self.pivots = pivots
        self.rank = len(pivots)

    def solve(self, b):
        """A particular solution with free variables zero, or None."""
        ring = self.ring
        c = mat_vec(self.elim, b)
        for r in range(self.rank, self.n_rows):
            if c[r]:
                return None
        x = [ring.zero] * self.n_cols
        for r, col in self.pivots:
            x[col] = c[r]
        # with free vars zero, pivot rows may still involve free columns,
        # but those contribute nothing; A x reproduces b by construction
        return x

    def kernel(self):
        ring = self.ring
        pivot_cols = {c for _, c in self.pivots}
        basis = []
        for free in range(self.n_cols):
            if free in pivot_cols:
                continue
            v = [ring.zero] * self.n_cols
            v[free] = ring.one
            for r, col in self.pivots:
                v[col] = -self.rref[r][free]
            basis.append(v)
        return basis


def field_matrix_inverse(ring, a):
    n = len(a)
    solver = FieldSolver(ring, a)
    if solver.rank != n:
        return None
    cols = []
    for j in range(n):
        e = [ring.one if i == j else ring.zero for i in range(n)]
        cols.append(solver.solve(e))
    return [[cols[j][i] for j in range(n)] for i in range(n)]


class RingSolver:
    """Solves A x = b over a level-2 ring without dividing by non-units.

    Splits x = x0 + (kernel part) + p x1: the mod-p system fixes x0, the
    p-part is corrected over the residue field, and mod-p kernel directions
    are engaged only when the plain correction is inconsistent (keeping the
    mod-p part of the solution stable under p-multiple changes of b).
    """

    def __init__(self, ring, mat):
        self.ring = ring
        self.mat = mat
        res = ring.residue_ring
        self.res = res
        abar = reduce_mat(ring, mat)
        self.base = FieldSolver(res, abar)
        kernel = self.base.kernel()
        self.kernel_lifts = [lift_vec(ring, k) for k in kernel]
        p_cols = [
            divp_vec(ring, mat_vec(mat, kl)) for kl in self.kernel_lifts
        ]
        if kernel:
            augmented = [
                row + [p_cols[t][i] for t in range(len(kernel))]
                for i, row in enumerate(abar)
            ]
            self.augmented = FieldSolver(res, augmented)
        else:
            self.augmented = None
        self.n_cols = len(mat[0])

    def solve(self, b):
        ring = self.ring
        bbar = reduce_vec(ring, b)
        x0 = self.base.solve(bbar)
        if x0 is None:
            return None
        x0l = lift_vec(ring, x0)
        residual = vec_sub(b, mat_vec(self.mat, x0l))
        if not all(ring.divisible_by_p(e) for e in residual):
            return None
        rho = divp_vec(ring, residual)
        x1 = self.base.solve(rho)
        if x1 is not None:
            return vec_add(x0l, times_p_vec(ring, x1))
        if self.augmented is None:
            return None
        combined = self.augmented.solve(rho)
        if combined is None:
            return None
        x1_part = combined[: self.n_cols]
        coeff_part = combined[self.n_cols:]
        x = vec_add(x0l, times_p_vec(ring, x1_part))
        for c, kl in zip(coeff_part, self.kernel_lifts):
            # c is a residue-field element; scale the frozen lift by an
            # integer representative so scalar and lift commute exactly
            scaled = [ring.lift(c) * entry for entry in kl]
            x = vec_add(x, scaled)
        return x


def solve_mod_p(rows, rhs, p):
    """Tiny dense solver over F_p for integer matrices; returns one solution
    (free variables zero) or None."""
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    a = [[x % p for x in row] + [r % p] for row, r in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = None
        for rr in range(r, n_rows):
            if a[rr][c] % p:
                pivot = rr
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for rr in range(n_rows):
            if rr != r and a[rr][c]:
                f = a[rr][c]
                a[rr] = [(x - f * y) % p for x, y in zip(a[rr], a[r])]
        pivots.append((r, c))
        r += 1
        if r == n_rows:
            break
    for rr in range(len(pivots), n_rows):
        if a[rr][n_cols]:
            return None
    x = [0] * n_cols
    for r, c in pivots:
        x[c] = a[r][n_cols]
    return x
