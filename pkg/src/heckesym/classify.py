"""Classification for a diagonal twisting operator.

Given eigenvalues (a1, a2, a3) of a diagonal zeta, this module decides which
of the eight types can be twisted by zeta, writes down one parameter triple
per type and eigenvalue ordering, reports the index of the centralizer in
the group of operators rescaling zeta, and looks up the number of
equivalence classes of Hecke symmetries in the closed-field table.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import permutations

from .errors import InternalInconsistency, InvalidParameter, NoRowMatches, ZeroParameter
from .field import FieldDescriptor, FieldElem, field_of
from .hecke import ParamTriple, act_on_triple, proportionality
from .linalg import Matrix

Q_GENERIC = "q!=1"
Q_ONE = "q=1"
REGIMES = (Q_GENERIC, Q_ONE)

# closed-field class counts per row: (q != 1, q = 1); the q = 1 column counts the flip
TABLE = {
    "distinct": (6, 1),
    "two-equal": (8, 2),
    "all-eps": (4, 2),
    "one-is-1": (3, 3),
    "minus-one": (4, 5),
    "all-1": (2, 6),
}
ROW_ORDER = ("distinct", "two-equal", "all-eps", "one-is-1", "minus-one", "all-1")

GENERIC_TYPES = (1, 2)
UNIT_TYPES = (3, 4, 5, 6, 7, 8)


@dataclass(frozen=True)
class DiagonalTwist:
    alphas: tuple

    def __post_init__(self):
        if len(self.alphas) != 3:
            raise InvalidParameter("a diagonal twist needs three eigenvalues")
        if any(not a for a in self.alphas):
            raise ZeroParameter("eigenvalues of a twisting operator must be nonzero")

    @classmethod
    def of(cls, field: FieldDescriptor, alphas) -> "DiagonalTwist":
        return cls(tuple(field(a) for a in alphas))

    @property
    def field(self) -> FieldDescriptor:
        return field_of(self.alphas[0])

    def matrix(self) -> Matrix:
        return Matrix.diag(self.field, self.alphas)

    @property
    def is_scalar(self) -> bool:
        return len(set(self.alphas)) == 1


@dataclass(frozen=True)
class SkewParams:
    """Commutation coefficients: x3 x2 = p1 x2 x3, x1 x3 = p2 x3 x1, x2 x1 = p3 x1 x2."""

    p1: FieldElem
    p2: FieldElem
    p3: FieldElem

    def __post_init__(self):
        if self.p1 * self.p2 * self.p3 != 1:
            raise InvalidParameter("skew parameters must multiply to 1")

    @classmethod
    def parse(cls, field: FieldDescriptor, p1, p2, p3) -> "SkewParams":
        """Each value is a field element or its text; the text ``eps`` is the cube root of 1."""
        return cls(field(p1), field(p2), field(p3))

    def as_tuple(self) -> tuple:
        return (self.p1, self.p2, self.p3)

    def rotations(self) -> list[tuple]:
        p = self.as_tuple()
        return [p[i:] + p[:i] for i in range(3)]

    def relations_text(self, fmt=str) -> list[str]:
        return [
            f"x3 x2 = {fmt(self.p1)} x2 x3",
            f"x1 x3 = {fmt(self.p2)} x3 x1",
            f"x2 x1 = {fmt(self.p3)} x1 x2",
        ]


def skew_params(d: DiagonalTwist) -> SkewParams:
    a1, a2, a3 = d.alphas
    return SkewParams(a2 / a3, a3 / a1, a1 / a2)


def _is_primitive_cube_root(x) -> bool:
    return x != 1 and x * x * x == 1


def group_index(d: DiagonalTwist) -> int:
    """3 when the eigenvalues are cyclically permuted by multiplying with a primitive cube root of 1."""
    a1, a2, a3 = d.alphas
    r = a1 / a2
    if r == a2 / a3 == a3 / a1 and _is_primitive_cube_root(r):
        return 3
    return 1


# the six table rows as predicates on one rotation of (p1, p2, p3)
def _row_predicates(p: SkewParams) -> dict[str, bool]:
    rots = p.rotations()
    vals = p.as_tuple()
    none_one = all(x != 1 for x in vals)
    return {
        "distinct": none_one and len(set(vals)) == 3,
        "two-equal": none_one and any(a == b != c for a, b, c in rots),
        "all-eps": vals[0] == vals[1] == vals[2] and _is_primitive_cube_root(vals[0]),
        "one-is-1": any(c == 1 and a != b for a, b, c in rots),
        "minus-one": any(a == b == -1 and c == 1 for a, b, c in rots),
        "all-1": all(x == 1 for x in vals),
    }


def table_row(p: SkewParams) -> str:
    matches = [name for name, hit in _row_predicates(p).items() if hit]
    if len(matches) > 1:
        raise InternalInconsistency(f"several table rows match {p}: {matches}")
    if not matches:
        raise NoRowMatches(f"no table row matches {p}")
    return matches[0]


def count_classes(p: SkewParams, q_regime: str) -> int:
    """Number of equivalence classes over an algebraically closed field."""
    if q_regime not in REGIMES:
        raise InvalidParameter(f"q regime must be one of {REGIMES}")
    return TABLE[table_row(p)][REGIMES.index(q_regime)]


def regime_of(q) -> str:
    if not q:
        raise ZeroParameter("q must be nonzero")
    return Q_ONE if q == 1 else Q_GENERIC


# types ----------------------------------------------------------------------


def _canonical_form(type_id: int, q, f: FieldDescriptor) -> list[list]:
    """Gram matrix of g in the eigenbasis where t = x1 ^ x2."""
    z, one = f.zero, f.one
    beta = (f(q) - 1) / 2
    shapes = {
        1: [[z, beta, z], [beta, z, z], [z, z, one]],
        2: [[z, beta, z], [beta, z, z], [z, z, z]],
        3: [[one, z, z], [z, z, one], [z, one, z]],
        4: [[one, z, z], [z, z, z], [z, z, one]],
        5: [[one, z, z], [z, z, z], [z, z, z]],
        6: [[z, z, z], [z, z, one], [z, one, z]],
        7: [[z, z, z], [z, z, z], [z, z, one]],
    }
    return shapes[type_id]


def _type_condition(type_id: int, a1, a2, a3) -> bool:
    """Which eigenvalue orderings a type tolerates, stated directly."""
    scalar = a1 == a2 == a3
    if type_id in (2, 8):
        return True
    if type_id in (1, 7):
        return a3 * a3 == a1 * a2
    if type_id == 3:
        return scalar
    if type_id == 4:
        return a1 == a2 and (a3 == -a1 or scalar)
    if type_id == 5:
        return a1 == a2
    if type_id == 6:
        return a1 == a3
    raise InvalidParameter(f"type must be 1..8, got {type_id}")


def _orderings(d: DiagonalTwist) -> list[tuple[tuple[int, ...], tuple]]:
    """Permutations giving distinct eigenvalue sequences, first representative kept."""
    seen, out = set(), []
    for perm in permutations(range(3)):
        vals = tuple(d.alphas[i] for i in perm)
        if vals not in seen:
            seen.add(vals)
            out.append((perm, vals))
    return out


def _permutation_matrix(f: FieldDescriptor, perm) -> Matrix:
    # sends e_k to e_perm[k]
    rows = [[f.zero] * 3 for _ in range(3)]
    for k, i in enumerate(perm):
        rows[i][k] = f.one
    return Matrix(f, rows)


def triple_in_ordering(type_id: int, q, perm, f: FieldDescriptor) -> ParamTriple:
    base = ParamTriple.make(f, (1, 0, 0), _canonical_form(type_id, q, f), q)
    return act_on_triple(_permutation_matrix(f, perm), base)


def is_stable(tr: ParamTriple, zeta: Matrix) -> bool:
    """zeta . (t, g, q) lies in the k^x orbit of (t, g, q)."""
    return proportionality(tr, act_on_triple(zeta, tr)) is not None


def allowed_types(d: DiagonalTwist) -> dict[int, list[tuple]]:
    """type -> list of eigenvalue orderings (permutations) realizing it."""
    f = d.field
    zeta = d.matrix()
    out: dict[int, list[tuple]] = {}
    for type_id in range(1, 9):
        for perm, vals in _orderings(d):
            stated = _type_condition(type_id, *vals)
            if type_id != 8:
                probe_q = f(3) if type_id in GENERIC_TYPES else f.one
                if is_stable(triple_in_ordering(type_id, probe_q, perm, f), zeta) != stated:
                    raise InternalInconsistency(f"type {type_id} stability disagrees with its condition for {vals}")
            if stated:
                out.setdefault(type_id, []).append(perm)
    return out


def canonical_triples(d: DiagonalTwist, q) -> list[tuple[int, tuple, ParamTriple]]:
    """(type, ordering, triple) for every permitted type compatible with q; the flip has no triple."""
    f = d.field
    q = f(q)
    if not q:
        raise ZeroParameter("q must be nonzero")
    types = GENERIC_TYPES if q != 1 else UNIT_TYPES
    zeta = d.matrix()
    out = []
    for type_id, perms in allowed_types(d).items():
        if type_id not in types or type_id == 8:
            continue
        for perm in perms:
            tr = triple_in_ordering(type_id, q, perm, f)
            tr.validate()
            if not is_stable(tr, zeta):
                raise InternalInconsistency("canonical triple is not zeta-stable")
            out.append((type_id, perm, tr))
    return out


@dataclass
class ClassReport:
    alphas: tuple
    q: FieldElem
    skew: SkewParams
    permitted_types: dict
    gzeta_index: int
    table_row: str
    canonical_triples: list
    class_counts: dict | None = None
    closed_field_counts: bool = True
    notes: list = dc_field(default_factory=list)


def classify(d: DiagonalTwist, q, with_counts: bool = True) -> ClassReport:
    """Everything known about twisting by diag(alphas) at parameter q.

    ``class_counts`` are the values for an algebraically closed field; over
    Q or F_p the actual number of classes can differ, which is recorded in
    ``notes``.  Pass ``with_counts=False`` to leave them out.
    """
    f = d.field
    q = f(q)
    sp = skew_params(d)
    row = table_row(sp)
    report = ClassReport(
        alphas=d.alphas,
        q=q,
        skew=sp,
        permitted_types=allowed_types(d),
        gzeta_index=group_index(d),
        table_row=row,
        canonical_triples=canonical_triples(d, q),
    )
    if with_counts:
        report.class_counts = {r: TABLE[row][i] for i, r in enumerate(REGIMES)}
        report.notes.append(f"counts are for an algebraically closed field containing {f}")
    else:
        report.closed_field_counts = False
    return report

