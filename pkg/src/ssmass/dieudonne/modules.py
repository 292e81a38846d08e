"""Graded semilinear modules at truncation level 2.

A module has f graded pieces, each free of rank 2m over the level-2 ring,
with F of degree +1 (sigma-semilinear), V of degree -1 (sigma^-1-
semilinear), FV = VF = p, and a perfect alternating pairing under which
the graded pieces are self-dual and mutually orthogonal.

For an odd number of grades the ring is the unramified quadratic
extension of the "natural" one (degree 2f instead of f): the odd-grade
normalization needs norms from that extension, exactly like passing from
Z_q to Z_{q^2}.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NotSuperspecialError, UnsupportedInputError
from .wittring import (
    TruncWittRing,
    WittElem,
    build_witt_ring,
    field_matrix_inverse,
    lift_mat,
    mat_equal,
    mat_identity,
    mat_mul,
    mat_scalar,
    mat_sigma,
    mat_transpose,
    mat_vec,
    reduce_mat,
    vec_sigma,
)

__all__ = [
    "GradedSemilinearModule",
    "GoodBasis",
    "XorShift",
    "standard_module",
    "scramble",
]

_MAX_GRADES = 4
_MAX_RANK = 4


class XorShift:
    """xorshift64* stream; the scramble's only source of randomness.

    Fixed parameters (12, 25, 27, multiplier 0x2545F4914F6CDD1D); a zero
    seed is replaced by a fixed odd constant.  Bounded draws use plain
    remainders, so the stream consumption per draw is always one step.
    """

    MASK = (1 << 64) - 1
    MULT = 0x2545F4914F6CDD1D

    def __init__(self, seed: int):
        self.state = (seed & self.MASK) or 0x9E3779B97F4A7C15

    def next64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & self.MASK
        x ^= x >> 27
        self.state = x
        return (x * self.MULT) & self.MASK

    def below(self, n: int) -> int:
        return self.next64() % n


@dataclass(frozen=True)
class GoodBasis:
    """Per graded index i, vectors X^i_1..X^i_m and Y^i_1..Y^i_m, as
    coordinate vectors in the module's working basis."""

    x_vectors: tuple  # x_vectors[i][j]: list of 2m WittElems
    y_vectors: tuple

    @property
    def grades(self) -> int:
        return len(self.x_vectors)

    @property
    def m(self) -> int:
        return len(self.x_vectors[0])


class GradedSemilinearModule:
    def __init__(self, ring, grades, m, f_mats, v_mats, gram):
        self.ring = ring
        self.grades = grades
        self.m = m
        self.rank = 2 * m
        self.f_mats = [
            [list(row) for row in mat] for mat in f_mats
        ]
        self.v_mats = [[list(row) for row in mat] for mat in v_mats]
        self.gram = [[list(row) for row in mat] for mat in gram]

    def apply_f(self, grade: int, vec):
        """F on a grade-``grade`` coordinate vector; lands in grade+1."""
        return mat_vec(self.f_mats[grade], vec_sigma(self.ring, vec, 1))

    def apply_v(self, grade: int, vec):
        """V on a grade-``grade`` coordinate vector; lands in grade-1."""
        return mat_vec(
            self.v_mats[grade], vec_sigma(self.ring, vec, self.ring.degree - 1)
        )

    def pairing(self, grade: int, u, v) -> WittElem:
        acc = self.ring.zero
        j_mat = self.gram[grade]
        for a, ua in enumerate(u):
            if not ua:
                continue
            row = j_mat[a]
            for b, vb in enumerate(v):
                if vb and row[b]:
                    acc = acc + ua * row[b] * vb
        return acc

    def validate(self) -> list:
        """Check the structural module invariants; returns violation strings."""
        ring = self.ring
        f = self.grades
        problems = []
        p_ident = mat_scalar(ring, self.rank, ring.p)
        for i in range(f):
            # F(V(x)) on grade i: matrix A_{i-1} sigma(V_i)
            fv = mat_mul(self.f_mats[(i - 1) % f], mat_sigma(ring, self.v_mats[i], 1))
            if not mat_equal(fv, p_ident):
                problems.append(f"FV != p on grade {i}")
            vf = mat_mul(
                self.v_mats[(i + 1) % f],
                mat_sigma(ring, self.f_mats[i], ring.degree - 1),
            )
            if not mat_equal(vf, p_ident):
                problems.append(f"VF != p on grade {i}")
            # pairing compatibility <F x, y> = sigma(<x, V y>)
            lhs = mat_mul(mat_transpose(self.f_mats[i]), self.gram[(i + 1) % f])
            rhs = mat_sigma(
                ring, mat_mul(self.gram[i], self.v_mats[(i + 1) % f]), 1
            )
            if not mat_equal(lhs, rhs):
                problems.append(f"pairing incompatible with F, V at grade {i}")
            # alternating perfect pairing per grade
            j_mat = self.gram[i]
            if any(j_mat[a][a] for a in range(self.rank)):
                problems.append(f"pairing not alternating at grade {i}")
            neg_t = [[-x for x in row] for row in mat_transpose(j_mat)]
            if not mat_equal(j_mat, neg_t):
                problems.append(f"pairing not skew at grade {i}")
            res = ring.residue_ring
            if field_matrix_inverse(res, reduce_mat(ring, j_mat)) is None:
                problems.append(f"pairing not perfect at grade {i}")
        return problems


def _standard_f_mat(ring, m):
    """F(X_j) = -Y_j, F(Y_j) = p X_j in block coordinates (X's then Y's)."""
    n = 2 * m
    mat = [[ring.zero for _ in range(n)] for _ in range(n)]
    for j in range(m):
        mat[m + j][j] = -ring.one
        mat[j][m + j] = ring.from_int(ring.p)
    return mat


def _standard_v_mat(ring, m):
    """V(X_j) = Y_j, V(Y_j) = -p X_j one grade down."""
    n = 2 * m
    mat = [[ring.zero for _ in range(n)] for _ in range(n)]
    for j in range(m):
        mat[m + j][j] = ring.one
        mat[j][m + j] = -ring.from_int(ring.p)
    return mat


def _standard_gram(ring, m):
    n = 2 * m
    mat = [[ring.zero for _ in range(n)] for _ in range(n)]
    for j in range(m):
        mat[j][m + j] = ring.one
        mat[m + j][j] = -ring.one
    return mat


def standard_module(p: int, f: int, m: int):
    """The split superspecial module with its declared good basis.

    Returns (module, basis): X^i_j is the j-th coordinate vector, Y^i_j the
    (m+j)-th, and the operators impose exactly F X = -Y, F Y = pX (grade up)
    and V X = Y, V Y = -pX (grade down).
    """
    if p not in (2, 3, 5):
        raise UnsupportedInputError("supported primes are 2, 3, 5")
    if not 1 <= f <= _MAX_GRADES:
        raise UnsupportedInputError(f"supported gradings are 1..{_MAX_GRADES}")
    if not 1 <= m <= _MAX_RANK:
        raise UnsupportedInputError(f"supported ranks are 1..{_MAX_RANK}")
    if f % 2 == 1:
        ring_degree = 2 * f
        if p ** (2 * f) > 729:
            raise UnsupportedInputError(
                f"odd grading {f} over p={p} needs residue searches over "
                f"{p ** (2 * f)} elements; the supported bound is 729"
            )
        ring = TruncWittRing(p, ring_degree, level=2)
    else:
        ring = build_witt_ring(p, f)
    f_mat = _standard_f_mat(ring, m)
    v_mat = _standard_v_mat(ring, m)
    gram = _standard_gram(ring, m)
    module = GradedSemilinearModule(
        ring, f, m, [f_mat] * f, [v_mat] * f, [gram] * f
    )
    basis_x = tuple(
        tuple(
            [ring.one if a == j else ring.zero for a in range(2 * m)]
            for j in range(m)
        )
        for _ in range(f)
    )
    basis_y = tuple(
        tuple(
            [ring.one if a == m + j else ring.zero for a in range(2 * m)]
            for j in range(m)
        )
        for _ in range(f)
    )
    return module, GoodBasis(basis_x, basis_y)


def _random_elem(rng: XorShift, ring) -> WittElem:
    return ring.from_coeffs(
        tuple(rng.below(ring.modulus) for _ in range(ring.degree))
    )


def _random_symmetric(rng, ring, m):
    mat = [[ring.zero for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            v = _random_elem(rng, ring)
            mat[i][j] = v
            mat[j][i] = v
    return mat


def _random_invertible(rng, ring, m):
    res = ring.residue_ring
    for _ in range(256):
        mat = [[_random_elem(rng, ring) for _ in range(m)] for _ in range(m)]
        if field_matrix_inverse(res, reduce_mat(ring, mat)) is not None:
            return mat
    raise NotSuperspecialError("could not draw an invertible matrix")


def _mat_inverse_level2(ring, mat):
    res = ring.residue_ring
    inv_bar = field_matrix_inverse(res, reduce_mat(ring, mat))
    if inv_bar is None:
        raise UnsupportedInputError("matrix is not invertible")
    x0 = lift_mat(ring, inv_bar)
    two_i = mat_scalar(ring, len(mat), 2)
    correction = [
        [a - b for a, b in zip(ra, rb)]
        for ra, rb in zip(two_i, mat_mul(mat, x0))
    ]
    return mat_mul(x0, correction)


def _block_matrix(ring, m, blocks):
    """Assemble [[TL, TR], [BL, BR]] from m x m blocks."""
    tl, tr, bl, br = blocks
    n = 2 * m
    out = [[ring.zero for _ in range(n)] for _ in range(n)]
    for i in range(m):
        for j in range(m):
            out[i][j] = tl[i][j]
            out[i][m + j] = tr[i][j]
            out[m + i][j] = bl[i][j]
            out[m + i][m + j] = br[i][j]
    return out


def _random_symplectic(rng, ring, m):
    ident = mat_identity(ring, m)
    zero = [[ring.zero for _ in range(m)] for _ in range(m)]
    j_block = _block_matrix(
        ring, m, (zero, ident, [[-x for x in row] for row in ident], zero)
    )
    result = mat_identity(ring, 2 * m)
    for _ in range(2 * m + 3):
        kind = rng.below(4)
        if kind == 0:
            s = _random_symmetric(rng, ring, m)
            factor = _block_matrix(ring, m, (ident, s, zero, ident))
        elif kind == 1:
            s = _random_symmetric(rng, ring, m)
            factor = _block_matrix(ring, m, (ident, zero, s, ident))
        elif kind == 2:
            u = _random_invertible(rng, ring, m)
            u_inv_t = mat_transpose(_mat_inverse_level2(ring, u))
            factor = _block_matrix(ring, m, (u, zero, zero, u_inv_t))
        else:
            factor = j_block
        result = mat_mul(result, factor)
    return result


def scramble(module: GradedSemilinearModule, seed: int) -> GradedSemilinearModule:
    """Apply an independent random symplectic change of basis to each graded
    piece, transporting F, V and the pairing.  The result is isomorphic to
    the input; the draw is reproducible from the seed via xorshift64*."""
    ring = module.ring
    f = module.grades
    rng = XorShift(seed)
    gs = [_random_symplectic(rng, ring, module.m) for _ in range(f)]
    g_invs = [_mat_inverse_level2(ring, g) for g in gs]
    new_f = [
        mat_mul(g_invs[(i + 1) % f], mat_mul(module.f_mats[i], mat_sigma(ring, gs[i], 1)))
        for i in range(f)
    ]
    new_v = [
        mat_mul(
            g_invs[(i - 1) % f],
            mat_mul(module.v_mats[i], mat_sigma(ring, gs[i], ring.degree - 1)),
        )
        for i in range(f)
    ]
    new_gram = [
        mat_mul(mat_transpose(gs[i]), mat_mul(module.gram[i], gs[i]))
        for i in range(f)
    ]
    return GradedSemilinearModule(ring, f, module.m, new_f, new_v, new_gram)
