"""Dense exact matrices and subspaces over a :class:`FieldDescriptor`.

Matrices are immutable row-major grids of field elements.  Subspaces keep a
basis in reduced row-echelon form, which makes equality of subspaces plain
equality of basis matrices.  Sizes stay small here (at most 81 columns), so
everything is straightforward Gaussian elimination that skips zero entries.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import DimensionMismatch, FieldMismatch, InternalInconsistency, Singular
from .field import FieldDescriptor, FieldElem

Vector = tuple


class Matrix:
    __slots__ = ("field", "rows", "cols", "_e")

    def __init__(self, field: FieldDescriptor, entries: Iterable[Iterable], *, _trusted: bool = False):
        self.field = field
        if _trusted:
            grid = entries
        else:
            grid = [[field(x) for x in row] for row in entries]
        self._e = grid
        self.rows = len(grid)
        self.cols = len(grid[0]) if grid else 0
        if any(len(r) != self.cols for r in grid):
            raise DimensionMismatch("ragged matrix rows")

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, field: FieldDescriptor, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)], _trusted=True)

    @classmethod
    def identity(cls, field: FieldDescriptor, n: int) -> "Matrix":
        return cls.diag(field, [1] * n)

    @classmethod
    def diag(cls, field: FieldDescriptor, values: Sequence) -> "Matrix":
        n = len(values)
        z = field.zero
        grid = [[z] * n for _ in range(n)]
        for i, v in enumerate(values):
            grid[i][i] = field(v)
        return cls(field, grid, _trusted=True)

    @classmethod
    def from_columns(cls, field: FieldDescriptor, columns: Sequence[Sequence]) -> "Matrix":
        return cls(field, [list(r) for r in zip(*columns)])

    # access --------------------------------------------------------------
    def __getitem__(self, ij) -> FieldElem:
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> Vector:
        return tuple(self._e[i])

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self._e)

    def to_lists(self) -> list[list]:
        return [list(r) for r in self._e]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self._e)
        return f"Matrix[{self.field}]({body})"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self._e == other._e

    def __hash__(self):
        return hash((self.field, tuple(tuple(r) for r in self._e)))

    def is_zero(self) -> bool:
        return not any(x for r in self._e for x in r)

    # arithmetic ----------------------------------------------------------
    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], _trusted=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Matrix(self.field, [[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], _trusted=True)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, [[-a for a in r] for r in self._e], _trusted=True)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        return Matrix(self.field, [[c * a for a in r] for r in self._e], _trusted=True)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        z = self.field.zero
        # row-sparse product: skip zero coefficients
        brows = [[(j, x) for j, x in enumerate(r) if x] for r in other._e]
        out = []
        for r in self._e:
            acc = [z] * other.cols
            for k, a in enumerate(r):
                if a:
                    for j, b in brows[k]:
                        acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(self.field, out, _trusted=True)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"matrix with {self.cols} columns applied to length-{len(v)} vector")
        z = self.field.zero
        nz = [(k, x) for k, x in enumerate(v) if x]
        out = []
        for r in self._e:
            s = z
            for k, x in nz:
                if r[k]:
                    s = s + r[k] * x
            out.append(s)
        return tuple(out)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, [list(c) for c in zip(*self._e)], _trusted=True)

    # elimination ---------------------------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row-echelon form and the pivot columns."""
        m = [list(r) for r in self._e]
        pivots: list[int] = []
        pr = 0
        for c in range(self.cols):
            if pr == len(m):
                break
            sel = next((i for i in range(pr, len(m)) if m[i][c]), None)
            if sel is None:
                continue
            m[pr], m[sel] = m[sel], m[pr]
            inv = 1 / m[pr][c]
            m[pr] = [x * inv for x in m[pr]]
            piv = m[pr]
            nzcols = [j for j in range(c, self.cols) if piv[j]]
            for i in range(len(m)):
                f = m[i][c]
                if i != pr and f:
                    ri = m[i]
                    for j in nzcols:
                        ri[j] = ri[j] - f * piv[j]
            pivots.append(c)
            pr += 1
        return Matrix(self.field, m, _trusted=True), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[Vector]:
        """Basis of the right kernel {v : M v = 0}."""
        r, piv = self.rref()
        free = [j for j in range(self.cols) if j not in piv]
        z, one = self.field.zero, self.field.one
        basis = []
        for f in free:
            v = [z] * self.cols
            v[f] = one
            for i, pc in enumerate(piv):
                v[pc] = -r[i, f]
            basis.append(tuple(v))
        return basis

    def det(self) -> FieldElem:
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        m = [list(r) for r in self._e]
        n = self.rows
        d = self.field.one
        for c in range(n):
            sel = next((i for i in range(c, n) if m[i][c]), None)
            if sel is None:
                return self.field.zero
            if sel != c:
                m[c], m[sel] = m[sel], m[c]
                d = -d
            d = d * m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                f = m[i][c] * inv
                if f:
                    for j in range(c, n):
                        m[i][j] = m[i][j] - f * m[c][j]
        return d

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        one, z = self.field.one, self.field.zero
        aug = Matrix(
            self.field,
            [list(r) + [one if i == j else z for j in range(n)] for i, r in enumerate(self._e)],
            _trusted=True,
        )
        r, piv = aug.rref()
        if piv[:n] != list(range(n)):
            raise Singular("matrix is not invertible")
        return Matrix(self.field, [r.row(i)[n:] for i in range(n)], _trusted=True)

    def power(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse().power(-k)
        out = Matrix.identity(self.field, self.rows)
        for _ in range(k):
            out = out @ self
        return out


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; row index (i, k) -> i * b.rows + k."""
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    z = a.field.zero
    out = []
    for i in range(a.rows):
        arow = a._e[i]
        for k in range(b.rows):
            brow = b._e[k]
            row = []
            for x in arow:
                if x:
                    row.extend(x * y for y in brow)
                else:
                    row.extend([z] * b.cols)
            out.append(row)
    return Matrix(a.field, out, _trusted=True)


def tensor(field: FieldDescriptor, *vectors: Sequence) -> Vector:
    """Flat coordinates of v1 (x) v2 (x) ..., last factor fastest."""
    out = [field.one]
    for v in vectors:
        out = [a * b for a in out for b in v]
    return tuple(out)


def solve_coords(basis: Matrix, target: Sequence) -> Vector | None:
    """Coordinates c with sum_i c_i * basis.row(i) == target, or None."""
    if len(target) != basis.cols:
        raise DimensionMismatch("target length does not match basis")
    field = basis.field
    aug = Matrix(field, [list(basis.col(j)) + [field(target[j])] for j in range(basis.cols)])
    r, piv = aug.rref()
    if basis.rows in piv:
        return None
    z = field.zero
    c = [z] * basis.rows
    for i, pc in enumerate(piv):
        c[pc] = r[i, basis.rows]
    return tuple(c)


class Subspace:
    """Subspace of field^n with a canonical RREF basis (one row per basis vector)."""

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: FieldDescriptor, ambient_dim: int, basis: Matrix, pivots: list[int]):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, field: FieldDescriptor, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows = [list(v) for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(r)} in a {ambient_dim}-dimensional space")
        if not rows:
            return cls(field, ambient_dim, Matrix(field, []), [])
        r, piv = Matrix(field, rows).rref()
        return cls(field, ambient_dim, Matrix(field, [r.row(i) for i in range(len(piv))], _trusted=True), piv)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def vectors(self) -> list[Vector]:
        return [self.basis.row(i) for i in range(self.dim)]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field})"

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"ambient {self.ambient_dim} vs {other.ambient_dim}")
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        self._check(other)
        return self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.vectors() + other.vectors(), self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.span(self.field, [], self.ambient_dim)
        u, w = self.vectors(), other.vectors()
        # columns u_i and -w_j; kernel vectors (a, b) give sum a_i u_i = sum b_j w_j
        cols = u + [tuple(-x for x in v) for v in w]
        system = Matrix.from_columns(self.field, cols)
        z = self.field.zero
        gens = []
        for kv in system.nullspace():
            vec = [z] * self.ambient_dim
            for a, ui in zip(kv[: len(u)], u):
                if a:
                    vec = [x + a * y for x, y in zip(vec, ui)]
            gens.append(vec)
        out = Subspace.span(self.field, gens, self.ambient_dim)
        if out.dim != self.dim + other.dim - (self + other).dim:
            raise InternalInconsistency("intersection dimension disagrees with dim U + dim W - dim(U + W)")
        return out

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length does not match ambient dimension")
        if self.dim == 0:
            return not any(v)
        return solve_coords(self.basis, v) is not None

    def image(self, m: Matrix) -> "Subspace":
        if m.cols != self.ambient_dim:
            raise DimensionMismatch("operator does not act on this space")
        return Subspace.span(self.field, [m.apply(v) for v in self.vectors()], m.rows)


def span(field: FieldDescriptor, vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    return Subspace.span(field, vectors, ambient_dim)


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    return u + w


def subspace_intersect(u: Subspace, w: Subspace) -> Subspace:
    return u.intersect(w)


def subspace_equal(u: Subspace, w: Subspace) -> bool:
    return u == w


def column_space(m: Matrix) -> Subspace:
    return Subspace.span(m.field, [m.col(j) for j in range(m.cols)], m.rows)
