"""Hecke symmetries on a 3-dimensional space as exact 9x9 operators.

Basis convention (used everywhere, including serialization): the tensor
``e_i (x) e_j`` has flat index ``3*i + j`` (0-based), and the matrix entry
``R[3*k + l, 3*i + j]`` is the coefficient of ``e_k (x) e_l`` in
``R(e_i (x) e_j)``.  Columns are images of basis tensors.

The quadratic form ``g`` of a parameter triple is stored as its symmetric
Gram matrix and the bivector ``t`` by its coordinates ``(t12, t13, t23)``
in the basis ``e1^e2, e1^e3, e2^e3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .errors import (
    DeltaRelationViolated,
    DoesNotCommute,
    InternalInconsistency,
    InvalidParameter,
    Singular,
    WrongRank,
    ZeroParameter,
)
from .field import FieldDescriptor, FieldElem, sqrt_in_field
from .linalg import Matrix, kron, tensor

DIM = 3
PAIRS = ((0, 1), (0, 2), (1, 2))


def flat(i: int, j: int) -> int:
    return DIM * i + j


@dataclass(frozen=True)
class HeckeSymmetry:
    R: Matrix
    q: FieldElem

    @property
    def field(self) -> FieldDescriptor:
        return self.R.field

    @classmethod
    def checked(cls, R: Matrix, q) -> "HeckeSymmetry":
        """Construct, rejecting q = 0 and operators whose skewsymmetrizer is not of rank 3."""
        if R.shape != (9, 9):
            raise InvalidParameter(f"R must be 9x9, got {R.shape}")
        q = R.field(q)
        if not q:
            raise ZeroParameter("Hecke parameter q must be nonzero")
        h = cls(R, q)
        if h.skewsymmetrizer().rank() != 3:
            raise WrongRank("q*Id - R must have rank 3")
        return h

    def skewsymmetrizer(self) -> Matrix:
        """Y = q*Id - R."""
        return Matrix.identity(self.field, 9).scale(self.q) - self.R

    def __call__(self, i: int, j: int) -> dict[tuple[int, int], FieldElem]:
        """R(e_i e_j) as a sparse dict {(k, l): coefficient}, 0-based indices."""
        col = self.R.col(flat(i, j))
        return {divmod(n, DIM): c for n, c in enumerate(col) if c}


@dataclass(frozen=True)
class ParamTriple:
    t: tuple[FieldElem, FieldElem, FieldElem]
    g: Matrix
    q: FieldElem

    @property
    def field(self) -> FieldDescriptor:
        return self.g.field

    @classmethod
    def make(cls, field: FieldDescriptor, t: Sequence, g, q) -> "ParamTriple":
        gm = g if isinstance(g, Matrix) else Matrix(field, g)
        return cls(tuple(field(x) for x in t), gm, field(q))

    def scaled(self, c) -> "ParamTriple":
        """The triple (c t, g / c, q)."""
        c = self.field(c)
        return ParamTriple(tuple(c * x for x in self.t), self.g.scale(1 / c), self.q)

    def validate(self):
        f = self.field
        if self.g.shape != (3, 3):
            raise InvalidParameter("g must be 3x3")
        if self.g != self.g.T:
            raise InvalidParameter("g must be symmetric")
        if not self.q:
            raise ZeroParameter("q must be nonzero")
        if not any(self.t) or self.g.is_zero():
            raise ZeroParameter("t = 0 or g = 0 gives the flip; use flip()")
        lhs = (self.q - 1) ** 2
        rhs = -4 * delta(self.t, self.g)
        if lhs != rhs:
            raise DeltaRelationViolated(
                f"(q-1)^2 = {f.format(lhs)} but -4*Delta(t, g) = {f.format(rhs)}"
            )


# tensors ---------------------------------------------------------------


def _vec(field: FieldDescriptor, v: Sequence) -> tuple:
    return tuple(field(x) for x in v)


def basis_vector(field: FieldDescriptor, i: int, n: int = DIM) -> tuple:
    return tuple(field.one if k == i else field.zero for k in range(n))


def wedge_id(x: Sequence, y: Sequence, field: FieldDescriptor) -> tuple:
    """x (x) y - y (x) x in flat coordinates."""
    x, y = _vec(field, x), _vec(field, y)
    return tuple(a - b for a, b in zip(tensor(field, x, y), tensor(field, y, x)))


def wedge_zeta(zeta: Matrix, x: Sequence, y: Sequence) -> tuple:
    """zeta(x) (x) y - zeta(y) (x) x."""
    f = zeta.field
    x, y = _vec(f, x), _vec(f, y)
    zx, zy = zeta.apply(x), zeta.apply(y)
    return tuple(a - b for a, b in zip(tensor(f, zx, y), tensor(f, zy, x)))


def wedge3_zeta(zeta: Matrix, x: Sequence, y: Sequence, z: Sequence) -> tuple:
    """The alternating six-term degree-3 tensor built with zeta^2 (x) zeta (x) Id."""
    f = zeta.field
    x, y, z = _vec(f, x), _vec(f, y), _vec(f, z)
    z1 = {k: zeta.apply(v) for k, v in (("x", x), ("y", y), ("z", z))}
    z2 = {k: zeta.apply(v) for k, v in z1.items()}
    plain = {"x": x, "y": y, "z": z}
    terms = [
        (1, "x", "y", "z"),
        (1, "y", "z", "x"),
        (1, "z", "x", "y"),
        (-1, "x", "z", "y"),
        (-1, "y", "x", "z"),
        (-1, "z", "y", "x"),
    ]
    out = [f.zero] * 27
    for sign, a, b, c in terms:
        t = tensor(f, z2[a], z1[b], plain[c])
        out = [o + sign * v for o, v in zip(out, t)]
    return tuple(out)


# parameter triples -------------------------------------------------------


def bivector_matrix(field: FieldDescriptor, t: Sequence) -> Matrix:
    """Alternating matrix A with A[i][j] = t_ij for i < j (so a^b has A = ab^T - ba^T)."""
    t12, t13, t23 = (field(x) for x in t)
    z = field.zero
    return Matrix(field, [[z, t12, t13], [-t12, z, t23], [-t13, -t23, z]], _trusted=True)


def bivector_coords(field: FieldDescriptor, a: Sequence, b: Sequence) -> tuple:
    a, b = _vec(field, a), _vec(field, b)
    return tuple(a[i] * b[j] - a[j] * b[i] for i, j in PAIRS)


def factorize_bivector(field: FieldDescriptor, t: Sequence) -> tuple[tuple, tuple]:
    """Vectors (a, b) with a ^ b = t, read off the first two pivot columns of its alternating matrix."""
    t = _vec(field, t)
    if not any(t):
        raise ZeroParameter("zero bivector has no factorization")
    A = bivector_matrix(field, t)
    _, piv = A.rref()
    if len(piv) != 2:
        raise InternalInconsistency("nonzero bivector in dimension 3 must have rank 2")
    a, b = A.col(piv[0]), A.col(piv[1])
    w = bivector_coords(field, a, b)
    k = next(i for i, x in enumerate(t) if x)
    lam = w[k] / t[k]
    a = tuple(x / lam for x in a)
    if bivector_coords(field, a, b) != t:
        raise InternalInconsistency("bivector factorization failed")
    return a, b


def _bilinear(g: Matrix, x: Sequence, y: Sequence) -> FieldElem:
    gy = g.apply(y)
    s = g.field.zero
    for a, b in zip(x, gy):
        s = s + a * b
    return s


def delta(t: Sequence, g: Matrix) -> FieldElem:
    """g(a,a) g(b,b) - g(a,b)^2 for any factorization t = a ^ b."""
    f = g.field
    if not any(f(x) for x in t):
        return f.zero
    a, b = factorize_bivector(f, t)
    d = _bilinear(g, a, a) * _bilinear(g, b, b) - _bilinear(g, a, b) ** 2
    a2 = tuple(x + y for x, y in zip(a, b))  # (a + b) ^ b = a ^ b
    d2 = _bilinear(g, a2, a2) * _bilinear(g, b, b) - _bilinear(g, a2, b) ** 2
    if d != d2:
        raise InternalInconsistency("Delta depends on the factorization")
    return d


def q_candidates(t: Sequence, g: Matrix) -> list[FieldElem]:
    """The values q = 1 +- 2 sqrt(-Delta) that are nonzero and lie in the field."""
    f = g.field
    r = sqrt_in_field(-delta(t, g), f)
    if r is None:
        return []
    out = []
    for q in (1 + 2 * r, 1 - 2 * r):
        if q and q not in out:
            out.append(q)
    return out


def build_from_triple(tr: ParamTriple, factorization: tuple[Sequence, Sequence] | None = None) -> HeckeSymmetry:
    """The Hecke symmetry attached to (t, g, q).

    R(xy) = (q-1)/2 xy + (q+1)/2 yx - g(x,y) a^b - x^Ty - y^Tx with
    Tx = g(b,x) a - g(a,x) b and u^v = uv - vu.
    """
    tr.validate()
    f = tr.field
    if factorization is None:
        a, b = factorize_bivector(f, tr.t)
    else:
        a, b = (_vec(f, v) for v in factorization)
        if bivector_coords(f, a, b) != tr.t:
            raise InvalidParameter("given vectors do not factor t")
    g, q = tr.g, tr.q
    half = f(1) / 2
    c_same, c_swap = (q - 1) * half, (q + 1) * half
    ab = wedge_id(a, b, f)
    E = [basis_vector(f, i) for i in range(DIM)]

    def T(x):
        gb, ga = _bilinear(g, b, x), _bilinear(g, a, x)
        return tuple(gb * u - ga * v for u, v in zip(a, b))

    TE = [T(e) for e in E]
    cols = []
    for i, j in product(range(DIM), repeat=2):
        col = [f.zero] * 9
        col[flat(i, j)] += c_same
        col[flat(j, i)] += c_swap
        gij = g[i, j]
        w1, w2 = wedge_id(E[i], TE[j], f), wedge_id(E[j], TE[i], f)
        col = [c - gij * u - v - w for c, u, v, w in zip(col, ab, w1, w2)]
        cols.append(col)
    return HeckeSymmetry.checked(Matrix.from_columns(f, cols), q)


# the eight types, transcribed as tables of R(x_i x_j) ---------------------

# entries: (i, j) -> list of ((k, l), coefficient); coefficients are functions of q
_TYPE1 = {
    (1, 1): [((1, 1), "q")],
    (1, 2): [((1, 2), "q-1"), ((2, 1), 1)],
    (1, 3): [((1, 3), "q-1"), ((3, 1), 1)],
    (2, 1): [((1, 2), "q")],
    (2, 2): [((2, 2), "q")],
    (2, 3): [((3, 2), "q")],
    (3, 1): [((1, 3), "q")],
    (3, 2): [((3, 2), "q-1"), ((2, 3), 1)],
    (3, 3): [((3, 3), "q"), ((1, 2), -1), ((2, 1), 1)],
}
_TYPE3 = {
    (1, 1): [((1, 1), 1), ((1, 2), 1), ((2, 1), -1)],
    (1, 2): [((2, 1), 1)],
    (1, 3): [((3, 1), 1), ((2, 3), -1), ((3, 2), 1)],
    (2, 1): [((1, 2), 1)],
    (2, 2): [((2, 2), 1)],
    (2, 3): [((3, 2), 1)],
    (3, 1): [((1, 3), 1), ((2, 3), -1), ((3, 2), 1)],
    (3, 2): [((2, 3), 1)],
    (3, 3): [((3, 3), 1), ((1, 3), 2), ((3, 1), -2)],
}
_FLIP = {(i, j): [((j, i), 1)] for i in range(1, 4) for j in range(1, 4)}

TYPE_TABLES = {
    1: _TYPE1,
    2: {**_TYPE1, (3, 3): [((3, 3), "q")]},
    3: _TYPE3,
    4: {**_TYPE3, (3, 3): [((3, 3), 1), ((1, 2), -1), ((2, 1), 1)]},
    5: {**_TYPE3, (3, 3): [((3, 3), 1)]},
    6: {**_FLIP, (3, 3): [((3, 3), 1), ((1, 3), 2), ((3, 1), -2)]},
    7: _TYPE1,
    8: _FLIP,
}


def build_type(type_id: int, q, field: FieldDescriptor) -> HeckeSymmetry:
    """The operator of the given type (1..8) in the standard basis x_i = e_i."""
    if type_id not in TYPE_TABLES:
        raise InvalidParameter(f"type must be 1..8, got {type_id}")
    q = field(q)
    if type_id >= 3 and q != 1:
        raise InvalidParameter(f"type {type_id} requires q = 1")
    if type_id in (1, 2) and not q:
        raise ZeroParameter("q must be nonzero")
    if type_id == 2 and q == 1:
        raise InvalidParameter("type 2 requires q != 1 (at q = 1 it is the flip)")

    def coef(c):
        if c == "q":
            return q
        if c == "q-1":
            return q - 1
        return field(c)

    grid = [[field.zero] * 9 for _ in range(9)]
    for (i, j), terms in TYPE_TABLES[type_id].items():
        for (k, l), c in terms:
            grid[flat(k - 1, l - 1)][flat(i - 1, j - 1)] += coef(c)
    return HeckeSymmetry.checked(Matrix(field, grid, _trusted=True), q)


def flip(field: FieldDescriptor) -> HeckeSymmetry:
    return build_type(8, 1, field)


def twisted_flip(zeta: Matrix) -> HeckeSymmetry:
    """x (x) y -> zeta(y) (x) zeta^{-1}(x)."""
    f = zeta.field
    zinv = _inverse(zeta)
    cols = []
    for i, j in product(range(DIM), repeat=2):
        cols.append(tensor(f, zeta.col(j), zinv.col(i)))
    return HeckeSymmetry.checked(Matrix.from_columns(f, cols), 1)


# verification ---------------------------------------------------------------


def _id3(field):
    return Matrix.identity(field, DIM)


def braid_sides(h: HeckeSymmetry) -> tuple[Matrix, Matrix]:
    """(R(x)Id)(Id(x)R)(R(x)Id) and (Id(x)R)(R(x)Id)(Id(x)R) as 27x27 matrices."""
    I = _id3(h.field)
    r1, r2 = kron(h.R, I), kron(I, h.R)
    return r1 @ (r2 @ r1), r2 @ (r1 @ r2)


def check_braid(h: HeckeSymmetry) -> bool:
    lhs, rhs = braid_sides(h)
    return lhs == rhs


def check_hecke(h: HeckeSymmetry) -> bool:
    f = h.field
    I9 = Matrix.identity(f, 9)
    return ((h.R - I9.scale(h.q)) @ (h.R + I9)).is_zero()


def _inverse(zeta: Matrix) -> Matrix:
    if zeta.shape != (3, 3):
        raise InvalidParameter("twisting operator must be 3x3")
    try:
        return zeta.inverse()
    except Singular:
        raise Singular("twisting operator is not invertible") from None


def commutes_with_square(h: HeckeSymmetry, zeta: Matrix) -> bool:
    zz = kron(zeta, zeta)
    return zz @ h.R == h.R @ zz


def commutes_with_cubed_square(h: HeckeSymmetry, zeta: Matrix) -> bool:
    """R commutes with (zeta (x) zeta)^3; holds whenever the relations of R are the zeta-twisted ones."""
    zz3 = kron(zeta, zeta).power(3)
    return zz3 @ h.R == h.R @ zz3


def twist(h: HeckeSymmetry, zeta: Matrix) -> HeckeSymmetry:
    """R_zeta = (zeta (x) Id) R (zeta^-1 (x) Id), defined when zeta (x) zeta commutes with R."""
    zinv = _inverse(zeta)
    if not commutes_with_square(h, zeta):
        raise DoesNotCommute("zeta (x) zeta does not commute with R")
    I = _id3(h.field)
    left = kron(zeta, I) @ h.R @ kron(zinv, I)
    right = kron(I, zinv) @ h.R @ kron(I, zeta)
    if left != right:
        raise InternalInconsistency("the two twist formulas disagree")
    return HeckeSymmetry.checked(left, h.q)


def conjugate(h: HeckeSymmetry, phi: Matrix) -> HeckeSymmetry:
    """(phi (x) phi) R (phi (x) phi)^-1."""
    pinv = _inverse(phi)
    return HeckeSymmetry(kron(phi, phi) @ h.R @ kron(pinv, pinv), h.q)


def act_on_triple(phi: Matrix, tr: ParamTriple) -> ParamTriple:
    """phi . (t, g, q) = (phi a ^ phi b, g(phi^-1 ., phi^-1 .), q)."""
    f = tr.field
    A = bivector_matrix(f, tr.t)
    A2 = phi @ A @ phi.T
    pinv = _inverse(phi)
    return ParamTriple((A2[0, 1], A2[0, 2], A2[1, 2]), pinv.T @ tr.g @ pinv, tr.q)


def proportionality(tr: ParamTriple, other: ParamTriple) -> FieldElem | None:
    """c with other = c . tr under (t, g) -> (c t, g / c), or None."""
    if tr.q != other.q:
        return None
    k = next((i for i, x in enumerate(tr.t) if x), None)
    if k is None or not other.t[k]:
        return None
    c = other.t[k] / tr.t[k]
    return c if tr.scaled(c) == other else None
