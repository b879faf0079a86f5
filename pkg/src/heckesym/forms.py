"""Linear forms attached to a Hecke symmetry with twisted polynomial relations.

Fix the trilinear volume form with omega(e1, e2, e3) = 1.  For x, y in V the
covector ``ell(x, y)`` sends z to the volume of x against Y(zeta(y) (x) z),
where Y = q*Id - R and the degree-2 tensor is read as a bivector through the
basis e_s ^ e_t = zeta(e_s) e_t - zeta(e_t) e_s.  ``ell_prime`` does the same
with Y' = (zeta^-1 (x) zeta^-1) Y (zeta (x) zeta).

All identities below are polynomial in the arguments; each check runs over a
set of vectors large enough to determine the polynomial (basis vectors plus
pairwise sums) and over a fixed seeded sample on top.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import product

from .algebra import is_twisted_polynomial
from .errors import ContextInvalid, EquivalenceViolated, NotInUpsilon3
from .field import FieldElem
from .hecke import DIM, PAIRS, HeckeSymmetry, _inverse, basis_vector, wedge3_zeta, wedge_zeta
from .linalg import Matrix, kron, solve_coords

Covector = tuple
SAMPLE_SEED = 20231
SAMPLE_SIZE = 20


def volume(x, y, z) -> FieldElem:
    """omega(x, y, z) = det[x y z]."""
    return (
        x[0] * (y[1] * z[2] - y[2] * z[1])
        - x[1] * (y[0] * z[2] - y[2] * z[0])
        + x[2] * (y[0] * z[1] - y[1] * z[0])
    )


def covector_wedge(f: Covector, g: Covector) -> tuple:
    """(f ^ g)(u, v) = f(u) g(v) - f(v) g(u) as a 3x3 grid."""
    return tuple(tuple(f[u] * g[v] - f[v] * g[u] for v in range(DIM)) for u in range(DIM))


def evaluate(f: Covector, z) -> FieldElem:
    return f[0] * z[0] + f[1] * z[1] + f[2] * z[2]


@dataclass
class FormsContext:
    """Everything needed to evaluate the forms for one (R, zeta).

    With ``validate=False`` the relation-space hypothesis is not checked and
    degree-2 tensors are projected onto their alternating part instead of
    being solved for exactly; that mode exists for negative controls.
    """

    h: HeckeSymmetry
    zeta: Matrix
    validate: bool = True
    Y: Matrix = dc_field(init=False)
    Yprime: Matrix = dc_field(init=False)
    upsilon2_basis: Matrix = dc_field(init=False)
    L: list = dc_field(init=False, repr=False)
    Lprime: list = dc_field(init=False, repr=False)

    def __post_init__(self):
        f = self.field
        self.zinv = _inverse(self.zeta)
        if self.validate and not is_twisted_polynomial(self.h, self.zeta):
            raise ContextInvalid("relations of R are not the twisted polynomial relations for zeta")
        self.Y = self.h.skewsymmetrizer()
        zz = kron(self.zeta, self.zeta)
        zzinv = kron(self.zinv, self.zinv)
        self.Yprime = zzinv @ self.Y @ zz
        E = [basis_vector(f, i) for i in range(DIM)]
        self.upsilon2_basis = Matrix(f, [wedge_zeta(self.zeta, E[s], E[t]) for s, t in PAIRS])
        self._zinv_left = kron(self.zinv, Matrix.identity(f, DIM))
        self.L = self._tensor(self.Y)
        self.Lprime = self._tensor(self.Yprime)

    @property
    def field(self):
        return self.h.field

    @property
    def q(self):
        return self.h.q

    @property
    def omega_normalization(self) -> FieldElem:
        return self.field.one

    def wedge_coords(self, w) -> tuple:
        """Coordinates of a degree-2 tensor in the basis e_s ^ e_t, (s, t) in (12, 13, 23)."""
        if self.validate:
            c = solve_coords(self.upsilon2_basis, w)
            if c is None:
                raise ContextInvalid("tensor is not in the degree-2 relation space")
            return c
        # coefficients of w in the basis zeta(e_s) (x) e_t, alternating part
        y = self._zinv_left.apply(w)
        half = self.field(1) / 2
        return tuple((y[3 * s + t] - y[3 * t + s]) * half for s, t in PAIRS)

    def _tensor(self, Y: Matrix) -> list:
        # T[r][i][j] = value at e_j of the form for (e_r, e_i)
        f = self.field
        E = [basis_vector(f, i) for i in range(DIM)]
        T = [[[f.zero] * DIM for _ in range(DIM)] for _ in range(DIM)]
        for i, j in product(range(DIM), repeat=2):
            w = Y.apply(_tensor2(self.zeta.col(i), E[j]))
            c = self.wedge_coords(w)
            for r in range(DIM):
                T[r][i][j] = sum((cst * volume(E[r], E[s], E[t]) for cst, (s, t) in zip(c, PAIRS)), f.zero)
        return T

    # forms -----------------------------------------------------------------
    def _form(self, T, x, y) -> Covector:
        f = self.field
        x = [f(v) for v in x]
        y = [f(v) for v in y]
        out = []
        for k in range(DIM):
            s = f.zero
            for r in range(DIM):
                if x[r]:
                    for i in range(DIM):
                        if y[i]:
                            s = s + x[r] * y[i] * T[r][i][k]
            out.append(s)
        return tuple(out)

    def ell(self, x, y) -> Covector:
        return self._form(self.L, x, y)

    def ell_prime(self, x, y) -> Covector:
        return self._form(self.Lprime, x, y)

    def ell_direct(self, x, y, prime: bool = False) -> Covector:
        """The form evaluated from its definition, without the precomputed tensor."""
        f = self.field
        Y = self.Yprime if prime else self.Y
        zy = self.zeta.apply([f(v) for v in y])
        E = [basis_vector(f, i) for i in range(DIM)]
        x = [f(v) for v in x]
        out = []
        for k in range(DIM):
            c = self.wedge_coords(Y.apply(_tensor2(zy, E[k])))
            out.append(sum((cst * volume(x, E[s], E[t]) for cst, (s, t) in zip(c, PAIRS)), f.zero))
        return tuple(out)

    def omega_tilde(self, t) -> FieldElem:
        return omega_tilde(self.zeta, t)


def _tensor2(x, y) -> tuple:
    return tuple(a * b for a in x for b in y)


def omega_tilde(zeta: Matrix, t) -> FieldElem:
    """The scalar c with t = c * (e1 ^ e2 ^ e3) in the degree-3 line."""
    f = zeta.field
    gen = wedge3_zeta(zeta, *(basis_vector(f, i) for i in range(DIM)))
    k = next(i for i, x in enumerate(gen) if x)
    c = f(t[k]) / gen[k]
    if any(f(a) != c * b for a, b in zip(t, gen)):
        raise NotInUpsilon3("tensor is not a multiple of e1 ^ e2 ^ e3")
    return c


# vector sets ------------------------------------------------------------------


def polarization_vectors(f) -> list[tuple]:
    E = [basis_vector(f, i) for i in range(DIM)]
    return E + [tuple(a + b for a, b in zip(E[i], E[j])) for i, j in PAIRS]


def sample_vectors(f, count: int, seed: int = SAMPLE_SEED) -> list[tuple]:
    rng = random.Random(seed)
    return [tuple(f(rng.choice((0, 1, -1, 2))) for _ in range(DIM)) for _ in range(count)]


def pair_set(f) -> list[tuple[tuple, tuple]]:
    """Pairs (x, y) used by the checks: all pairs of polarization vectors, then the seeded sample."""
    pol = polarization_vectors(f)
    pairs = list(product(pol, pol))
    s = sample_vectors(f, 2 * SAMPLE_SIZE)
    pairs += list(zip(s[::2], s[1::2]))
    return pairs


# identities -------------------------------------------------------------------


def check_forms_relation(ctx: FormsContext) -> bool:
    """ell'(x, y)(z) * det(zeta) == ell(zeta x, zeta y)(zeta z)."""
    f = ctx.field
    d = ctx.zeta.det()
    E = [basis_vector(f, i) for i in range(DIM)]
    s = sample_vectors(f, 3 * SAMPLE_SIZE, seed=SAMPLE_SEED + 1)
    triples = list(product(E, E, E)) + list(zip(s[0::3], s[1::3], s[2::3]))
    Z = ctx.zeta.apply
    for x, y, z in triples:
        lhs = evaluate(ctx.ell_prime(x, y), z) * d
        rhs = evaluate(ctx.ell(Z(x), Z(y)), Z(z))
        if lhs != rhs:
            return False
    return True


def check_wedge_identity(ctx: FormsContext) -> bool:
    """ell(x,y) ^ ell'(x,y) == ell(x,x) ^ ell'(y,y)."""
    for x, y in pair_set(ctx.field):
        lhs = covector_wedge(ctx.ell(x, y), ctx.ell_prime(x, y))
        rhs = covector_wedge(ctx.ell(x, x), ctx.ell_prime(y, y))
        if lhs != rhs:
            return False
    return True


def check_evaluation_identity(ctx: FormsContext) -> bool:
    """ell(x,y)(x) == ell(x,x)(y), and the same for ell'."""
    for x, y in pair_set(ctx.field):
        if evaluate(ctx.ell(x, y), x) != evaluate(ctx.ell(x, x), y):
            return False
        if evaluate(ctx.ell_prime(x, y), x) != evaluate(ctx.ell_prime(x, x), y):
            return False
    return True


def check_skew_identity(ctx: FormsContext) -> bool:
    """ell(x,y)(z) - ell(x,z)(y) == (q+1) omega(x,y,z), and the same for ell'; on basis triples."""
    f = ctx.field
    E = [basis_vector(f, i) for i in range(DIM)]
    for x, y, z in product(E, repeat=3):
        rhs = (ctx.q + 1) * volume(x, y, z)
        for form in (ctx.ell, ctx.ell_prime):
            if evaluate(form(x, y), z) - evaluate(form(x, z), y) != rhs:
                return False
    return True


def check_full_braid_identity(ctx: FormsContext) -> bool:
    """(ell(x,y) ^ ell'(x,z) - ell(x,x) ^ ell'(y,z))(u,v) == q omega(x,y,z) omega(x,u,v)."""
    f = ctx.field
    q = ctx.q
    E = [basis_vector(f, i) for i in range(DIM)]

    def lhs(x, y, z):
        w1 = covector_wedge(ctx.ell(x, y), ctx.ell_prime(x, z))
        w2 = covector_wedge(ctx.ell(x, x), ctx.ell_prime(y, z))
        return [[w1[u][v] - w2[u][v] for v in range(DIM)] for u in range(DIM)]

    # u, v over the basis: the wedge grid holds every value at once
    for x in polarization_vectors(f):
        for y, z in product(E, repeat=2):
            grid = lhs(x, y, z)
            scale = q * volume(x, y, z)
            if any(grid[u][v] != scale * volume(x, E[u], E[v]) for u in range(DIM) for v in range(DIM)):
                return False
    s = sample_vectors(f, 5 * SAMPLE_SIZE, seed=SAMPLE_SEED + 2)
    for x, y, z, u, v in zip(*(s[k::5] for k in range(5))):
        grid = lhs(x, y, z)
        val = sum((u[i] * v[j] * grid[i][j] for i in range(DIM) for j in range(DIM)), f.zero)
        if val != q * volume(x, y, z) * volume(x, u, v):
            return False
    return True


@dataclass(frozen=True)
class CommutationReport:
    """Five conditions that are equivalent for a valid context.

    commutes: R commutes with zeta (x) zeta; y_equal: Y' = Y;
    y_proportional: Y' = cY; forms_proportional: ell' = c ell;
    wedge_vanishes: ell(x,y) ^ ell'(x,y) = 0.
    """

    commutes: bool
    y_equal: bool
    y_proportional: bool
    forms_proportional: bool
    wedge_vanishes: bool
    c: FieldElem | None

    @property
    def all_true(self) -> bool:
        return all(self.as_tuple())

    def as_tuple(self) -> tuple[bool, ...]:
        return (self.commutes, self.y_equal, self.y_proportional, self.forms_proportional, self.wedge_vanishes)


def _proportional(a: list, b: list) -> FieldElem | None:
    """c with b == c * a (a not all zero), else None."""
    k = next((i for i, x in enumerate(a) if x), None)
    if k is None:
        return None
    c = b[k] / a[k]
    return c if all(y == c * x for x, y in zip(a, b)) else None


def commutation_report(ctx: FormsContext) -> CommutationReport:
    zz = kron(ctx.zeta, ctx.zeta)
    commutes = zz @ ctx.h.R == ctx.h.R @ zz
    y_equal = ctx.Yprime == ctx.Y
    flatY = [x for r in ctx.Y.to_lists() for x in r]
    flatYp = [x for r in ctx.Yprime.to_lists() for x in r]
    c = _proportional(flatY, flatYp)
    flatL = [x for a in ctx.L for b in a for x in b]
    flatLp = [x for a in ctx.Lprime for b in a for x in b]
    c_forms = _proportional(flatL, flatLp)
    zero = ((ctx.field.zero,) * DIM,) * DIM
    wedge_vanishes = all(covector_wedge(ctx.ell(x, y), ctx.ell_prime(x, y)) == zero for x, y in pair_set(ctx.field))
    rep = CommutationReport(commutes, y_equal, c is not None, c_forms is not None, wedge_vanishes, c)
    if ctx.validate and len(set(rep.as_tuple())) != 1:
        raise EquivalenceViolated(f"commutation conditions disagree: {rep}")
    return rep


def diagonal_forms(ctx: FormsContext) -> list[Covector]:
    return [ctx.ell(x, x) for x in polarization_vectors(ctx.field)]


def diagonal_rank(ctx: FormsContext) -> int:
    """Dimension of the span of the forms ell(x, x) over all x."""
    return Matrix(ctx.field, diagonal_forms(ctx)).rank()


def check_forms_nondegenerate(ctx: FormsContext) -> bool:
    """The forms ell(x, y) span V*, and neither slot of ell has a nonzero vector killing it."""
    f = ctx.field
    L = ctx.L
    spanning = Matrix(f, [L[r][i] for r in range(DIM) for i in range(DIM)]).rank() == DIM
    first = Matrix(f, [[L[r][i][j] for i in range(DIM) for j in range(DIM)] for r in range(DIM)]).rank() == DIM
    second = Matrix(f, [[L[r][i][j] for r in range(DIM) for j in range(DIM)] for i in range(DIM)]).rank() == DIM
    return spanning and first and second


def skewsymmetrizer_faithful(ctx: FormsContext) -> bool:
    """No nonzero a has Y(a x) = 0 for all x, nor Y(x a) = 0 for all x."""
    f = ctx.field
    Y = ctx.Y
    left = [[Y[n, 3 * a + x] for x in range(DIM) for n in range(9)] for a in range(DIM)]
    right = [[Y[n, 3 * x + a] for x in range(DIM) for n in range(9)] for a in range(DIM)]
    return Matrix(f, left).rank() == DIM and Matrix(f, right).rank() == DIM
