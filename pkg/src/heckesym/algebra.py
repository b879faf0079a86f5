"""Quadratic relation spaces, the twisted polynomial algebra, and its low-degree pieces."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import InternalInconsistency, UnexpectedDimension, WrongRank
from .field import FieldDescriptor
from .hecke import DIM, PAIRS, HeckeSymmetry, _inverse, basis_vector, wedge3_zeta, wedge_zeta
from .linalg import Matrix, Subspace, column_space, kron, solve_coords, tensor

MAX_HILBERT_DEGREE = 4


@dataclass(frozen=True)
class RelationSpace:
    I2: Subspace

    @property
    def field(self) -> FieldDescriptor:
        return self.I2.field

    @property
    def dim(self) -> int:
        return self.I2.dim


def relations_of(h: HeckeSymmetry) -> RelationSpace:
    """Degree-2 relations: the image of R - q*Id, which must be 3-dimensional."""
    sub = column_space(h.skewsymmetrizer())
    if sub.dim != 3:
        raise WrongRank(f"image of R - q*Id has dimension {sub.dim}, expected 3")
    return RelationSpace(sub)


def twisted_relations(zeta: Matrix) -> RelationSpace:
    """Span of zeta(e_i) e_j - zeta(e_j) e_i for i < j."""
    _inverse(zeta)
    f = zeta.field
    vecs = [wedge_zeta(zeta, basis_vector(f, i), basis_vector(f, j)) for i, j in PAIRS]
    sub = Subspace.span(f, vecs, 9)
    if sub.dim != 3:
        raise InternalInconsistency("twisted relations must span a 3-dimensional space")
    return RelationSpace(sub)


def is_twisted_polynomial(h: HeckeSymmetry, zeta: Matrix) -> bool:
    """True when S(V, R) equals the polynomial algebra twisted by zeta (same relation space)."""
    sub = column_space(h.skewsymmetrizer())
    return sub == twisted_relations(zeta).I2


def _ideal_component(rel: RelationSpace, k: int) -> Subspace:
    """sum_i V^i (x) I2 (x) V^(k-2-i) inside V^(x)k."""
    f = rel.field
    E = [basis_vector(f, i) for i in range(DIM)]
    gens = []
    for i in range(k - 1):
        for left in product(E, repeat=i):
            for right in product(E, repeat=k - 2 - i):
                for r in rel.I2.vectors():
                    gens.append(tensor(f, *left, r, *right))
    return Subspace.span(f, gens, DIM**k)


def hilbert_dims(rel: RelationSpace, max_deg: int = 3) -> list[int]:
    """[dim A_0, ..., dim A_max_deg] for the quadratic algebra T(V)/(I2)."""
    if not 0 <= max_deg <= MAX_HILBERT_DEGREE:
        raise ValueError(f"max_deg must be in 0..{MAX_HILBERT_DEGREE}")
    dims = []
    for k in range(max_deg + 1):
        if k < 2:
            dims.append(DIM**k)
        else:
            dims.append(DIM**k - _ideal_component(rel, k).dim)
    return dims


def _left_right_products(rel: RelationSpace) -> tuple[Subspace, Subspace]:
    f = rel.field
    E = [basis_vector(f, i) for i in range(DIM)]
    left = Subspace.span(f, [tensor(f, r, e) for r in rel.I2.vectors() for e in E], 27)
    right = Subspace.span(f, [tensor(f, e, r) for r in rel.I2.vectors() for e in E], 27)
    return left, right


def upsilon3(zeta: Matrix) -> Subspace:
    """I2 V intersected with V I2 for the twisted relations; always a line."""
    rel = twisted_relations(zeta)
    left, right = _left_right_products(rel)
    inter = left.intersect(right)
    if inter.dim != 1:
        raise UnexpectedDimension(f"degree-3 intersection has dimension {inter.dim}")
    f = zeta.field
    gen = wedge3_zeta(zeta, *(basis_vector(f, i) for i in range(DIM)))
    if solve_coords(inter.basis, gen) is None:
        raise InternalInconsistency("alternating tensor is not in the degree-3 intersection")
    return inter


def degree3_sum_dim(zeta: Matrix) -> int:
    left, right = _left_right_products(twisted_relations(zeta))
    return (left + right).dim


def cyclic_shift(field: FieldDescriptor, t) -> tuple:
    """s(xyz) = yzx on flat 27-vectors."""
    out = [field.zero] * 27
    for a, b, c in product(range(DIM), repeat=3):
        out[9 * b + 3 * c + a] = t[9 * a + 3 * b + c]
    return tuple(out)


def cyclicity_twist(zeta: Matrix) -> Matrix:
    """psi = det(zeta) * zeta^-3."""
    return _inverse(zeta).power(3).scale(zeta.det())


def twisted_cyclicity_check(zeta: Matrix, psi: Matrix | None = None) -> bool:
    """t == (Id (x) Id (x) psi) s(t) for the generator t of the degree-3 line."""
    f = zeta.field
    if psi is None:
        psi = cyclicity_twist(zeta)
    t = upsilon3(zeta).vectors()[0]
    I = Matrix.identity(f, DIM)
    op = kron(kron(I, I), psi)
    return op.apply(cyclic_shift(f, t)) == t
