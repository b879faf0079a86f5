"""Exhaustive search over small prime fields.

For a diagonal zeta and a parameter q, list every triple (t, g, q) with
t, g nonzero, (q-1)^2 = -4 Delta(t, g) and zeta . (t, g, q) a multiple of
(t, g, q); count orbits under k^x and under the group of operators that
rescale zeta; and run the verification battery on every triple.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import permutations
from typing import Iterator

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels
from ._kernels.flags import DIAG_RANK, NAMES, THEOREM_BITS
from .classify import DiagonalTwist, Q_ONE, count_classes, regime_of, skew_params, table_row
from .errors import FieldTooLarge, InternalInconsistency, InvalidParameter
from .field import FieldDescriptor
from .algebra import is_twisted_polynomial
from .forms import (
    FormsContext,
    check_forms_nondegenerate,
    commutation_report,
    diagonal_rank,
    pair_set,
)
from .hecke import ParamTriple, build_from_triple, check_braid, check_hecke, commutes_with_square, twist

MAX_PRIME = 13
SAMPLE_LIMIT = 12


def _require_small_prime(f: FieldDescriptor) -> int:
    if f.is_rational:
        raise InvalidParameter("enumeration needs a prime field")
    if f.p > MAX_PRIME:
        raise FieldTooLarge(f"p = {f.p} exceeds the enumeration limit {MAX_PRIME}")
    return f.p


def _ints(d: DiagonalTwist) -> tuple[int, ...]:
    return tuple(int(a) for a in d.alphas)


def _scan_part(args):
    p, alphas, q, t12_values, backend = args
    _kernels.use_backend(backend)
    return _kernels.scan(p, alphas, q, t12_values)


def scan_p_zeta(d: DiagonalTwist, q, workers: int | None = None) -> np.ndarray:
    """All triples of P(zeta) at q as int rows [t12, t13, t23, g11, g12, g13, g22, g23, g33]."""
    f = d.field
    p = _require_small_prime(f)
    q = f(q)
    if not q:
        raise InvalidParameter("q must be nonzero")
    alphas = _ints(d)
    if not workers or workers <= 1:
        return _kernels.scan(p, alphas, int(q))
    # split by the leading bivector coordinate; merge in that order
    jobs = [(p, alphas, int(q), [t12], _kernels.backend_name()) for t12 in range(p)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_scan_part, jobs))
    return np.concatenate(parts) if parts else np.zeros((0, 9), dtype=np.int64)


def row_to_triple(f: FieldDescriptor, row, q) -> ParamTriple:
    t12, t13, t23, g11, g12, g13, g22, g23, g33 = (int(x) for x in row)
    return ParamTriple.make(f, (t12, t13, t23), [[g11, g12, g13], [g12, g22, g23], [g13, g23, g33]], q)


def triple_to_row(tr: ParamTriple) -> tuple[int, ...]:
    g = tr.g
    return tuple(int(x) for x in (*tr.t, g[0, 0], g[0, 1], g[0, 2], g[1, 1], g[1, 2], g[2, 2]))


def enumerate_p_zeta(d: DiagonalTwist, q, workers: int | None = None) -> Iterator[ParamTriple]:
    """The triples of P(zeta) at q, in lexicographic order."""
    f = d.field
    for row in scan_p_zeta(d, q, workers):
        yield row_to_triple(f, row, q)


# group actions ------------------------------------------------------------


def primitive_root(p: int) -> int:
    factors = {r for r in range(2, p) if (p - 1) % r == 0 and all(r % s for s in range(2, r))}
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // r, p) != 1 for r in factors))


def _elementary(i: int, j: int) -> np.ndarray:
    m = np.eye(3, dtype=np.int64)
    m[i, j] = 1
    return m


def _swap(i: int, j: int) -> np.ndarray:
    m = np.eye(3, dtype=np.int64)
    m[[i, j]] = m[[j, i]]
    return m


def centralizer_generators(d: DiagonalTwist) -> list[np.ndarray]:
    """Generators of the invertible operators commuting with diag(alphas)."""
    p = d.field.p
    g0 = primitive_root(p)
    gens = []
    for i in range(3):
        m = np.eye(3, dtype=np.int64)
        m[i, i] = g0
        gens.append(m)
    alphas = _ints(d)
    blocks: dict[int, list[int]] = {}
    for i, a in enumerate(alphas):
        blocks.setdefault(a % p, []).append(i)
    for idx in blocks.values():
        for a, b in zip(idx, idx[1:]):
            gens.append(_swap(a, b))
        if len(idx) > 1:
            gens.append(_elementary(idx[0], idx[1]))
    return gens


def rescaling_permutations(d: DiagonalTwist) -> list[np.ndarray]:
    """Permutation matrices phi with phi zeta phi^-1 = c zeta for some c != 1."""
    p = d.field.p
    alphas = _ints(d)
    out = []
    for perm in permutations(range(3)):
        # phi e_i = e_perm[i]; need alphas[i] = c * alphas[perm[i]]
        ratios = {alphas[i] * pow(alphas[perm[i]], -1, p) % p for i in range(3)}
        if len(ratios) == 1 and ratios != {1}:
            m = np.zeros((3, 3), dtype=np.int64)
            for i in range(3):
                m[perm[i], i] = 1
            out.append(m)
    return out


def _act(phi: np.ndarray, triples: np.ndarray, p: int) -> np.ndarray:
    """phi . (t, g): t -> phi A phi^T, g -> phi^-T G phi^-1, on int rows."""
    phinv = _inverse_mod(phi, p)
    A = np.zeros((len(triples), 3, 3), dtype=np.int64)
    for k, (i, j) in enumerate(((0, 1), (0, 2), (1, 2))):
        A[:, i, j] = triples[:, k]
        A[:, j, i] = -triples[:, k]
    G = triples[:, [3, 4, 5, 4, 6, 7, 5, 7, 8]].reshape(-1, 3, 3)
    A2 = (phi @ A @ phi.T) % p
    G2 = (phinv.T @ G @ phinv) % p
    out = np.empty_like(triples)
    out[:, 0], out[:, 1], out[:, 2] = A2[:, 0, 1], A2[:, 0, 2], A2[:, 1, 2]
    out[:, 3:] = G2.reshape(-1, 9)[:, [0, 1, 2, 4, 5, 8]]
    return out


def _inverse_mod(m: np.ndarray, p: int) -> np.ndarray:
    det = int(round(np.linalg.det(m))) % p
    adj = np.array(
        [[(m[(j + 1) % 3, (i + 1) % 3] * m[(j + 2) % 3, (i + 2) % 3]
           - m[(j + 1) % 3, (i + 2) % 3] * m[(j + 2) % 3, (i + 1) % 3]) for j in range(3)] for i in range(3)],
        dtype=np.int64,
    )
    return adj * pow(det, -1, p) % p


def _scale_action(triples: np.ndarray, c: int, p: int) -> np.ndarray:
    out = triples.copy()
    out[:, :3] = out[:, :3] * c % p
    out[:, 3:] = out[:, 3:] * pow(c, -1, p) % p
    return out


def _codes(triples: np.ndarray, p: int) -> np.ndarray:
    weights = p ** np.arange(8, -1, -1, dtype=np.int64)
    return triples @ weights


def _components(n: int, edges: list[tuple[np.ndarray, np.ndarray]]) -> tuple[int, np.ndarray]:
    if n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    src = np.concatenate([e[0] for e in edges])
    dst = np.concatenate([e[1] for e in edges])
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    return connected_components(graph, directed=True, connection="weak")


def orbit_counts(triples: np.ndarray, d: DiagonalTwist) -> tuple[int, int, np.ndarray]:
    """(k^x orbits, G(zeta) orbits, G(zeta) orbit label per triple)."""
    p = d.field.p
    triples = np.asarray(triples, dtype=np.int64)
    n = len(triples)
    codes = _codes(triples, p)
    if n and np.any(np.diff(codes) <= 0):
        raise InternalInconsistency("triples are not in strict lexicographic order")
    idx = np.arange(n)

    def edge(image: np.ndarray):
        c = _codes(image, p)
        pos = np.searchsorted(codes, c)
        pos = np.minimum(pos, max(n - 1, 0))
        if n and not np.array_equal(codes[pos], c):
            raise InternalInconsistency("the group action leaves the enumerated set")
        return idx, pos

    kx = [edge(_scale_action(triples, primitive_root(p), p))] if n else []
    n_kx, _ = _components(n, kx)
    gens = centralizer_generators(d) + rescaling_permutations(d)
    full = kx + [edge(_act(phi, triples, p)) for phi in gens] if n else []
    n_g, labels = _components(n, full)
    return n_kx, n_g, labels


# battery ------------------------------------------------------------------


def kernel_pairs(f: FieldDescriptor) -> np.ndarray:
    return np.array([[[int(v) for v in x], [int(v) for v in y]] for x, y in pair_set(f)], dtype=np.int64)


def exact_flags(tr: ParamTriple, d: DiagonalTwist) -> int:
    """The battery bits for one triple computed with exact library routines."""
    from ._kernels import flags as F

    bits = 0
    h = build_from_triple(tr)
    zeta = d.matrix()
    if not check_braid(h):
        bits |= F.BRAID
    if not check_hecke(h):
        bits |= F.HECKE
    if not commutes_with_square(h, zeta):
        return bits | F.COMMUTE
    hz = twist(h, zeta)
    if not is_twisted_polynomial(hz, zeta):
        return bits | F.TWISTED
    ctx = FormsContext(hz, zeta)
    if diagonal_rank(ctx) != 1:
        bits |= F.DIAG_RANK
    try:
        rep = commutation_report(ctx)
        if not rep.all_true:
            bits |= F.COMMUTATION_FALSE
    except InternalInconsistency:
        bits |= F.COMMUTATION_FALSE | F.COMMUTATION_DISAGREE
    if not check_forms_nondegenerate(ctx):
        bits |= F.NONDEGENERATE
    return bits


@dataclass
class EnumerationReport:
    field: FieldDescriptor
    zeta: DiagonalTwist
    q: object
    total_triples: int
    kx_orbits: int
    gzeta_orbits: int
    theorem_failures: int
    diag_rank_violations: int
    failure_counts: dict
    samples: list
    backend: str
    closed_field: dict = dc_field(default_factory=dict)

    def to_json_obj(self) -> dict:
        f = self.field
        return {
            "field": f.to_json(),
            "zeta": [f.format(a) for a in self.zeta.alphas],
            "q": f.format(self.q),
            "total_triples": self.total_triples,
            "kx_orbits": self.kx_orbits,
            "gzeta_orbits": self.gzeta_orbits,
            "theorem_failures": self.theorem_failures,
            "diag_rank_violations": self.diag_rank_violations,
            "failure_counts": self.failure_counts,
            "samples": self.samples,
            "closed_field": self.closed_field,
        }

    def to_json(self) -> str:
        """Canonical text: sorted keys, fixed separators; the backend is not part of it."""
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @property
    def clean(self) -> bool:
        return self.theorem_failures == 0 and self.diag_rank_violations == 0


def _closed_field_comparison(d: DiagonalTwist, q, gzeta_orbits: int) -> dict:
    f = d.field
    regime = regime_of(q)
    expected = count_classes(skew_params(d), regime)
    # the flip is an equivalence class at q = 1 but has no parameter triple
    observed = gzeta_orbits + (1 if regime == Q_ONE else 0)
    obstructions = [f"{f} has non-squares"]
    if f.primitive_cube_root() is None:
        obstructions.append(f"{f} has no primitive cube root of 1")
    return {
        "table_row": table_row(skew_params(d)),
        "regime": regime,
        "closed_field_count": expected,
        "observed_classes": observed,
        "match": observed == expected,
        "exploratory": True,
        "obstructions": obstructions,
    }


def empirical_theorem_check(
    triples: np.ndarray, d: DiagonalTwist, q, dedupe: bool = True
) -> EnumerationReport:
    f = d.field
    p = _require_small_prime(f)
    q = f(q)
    triples = np.asarray(triples, dtype=np.int64).reshape(-1, 9)
    flags = _kernels.check_batch(p, _ints(d), int(q), triples, kernel_pairs(f), dedupe=dedupe)
    n_kx, n_g, labels = orbit_counts(triples, d)
    failure_counts = {name: int(np.count_nonzero(flags & bit)) for bit, name in NAMES.items()}
    samples = []
    if len(triples):
        _, first = np.unique(labels, return_index=True)
        for i in sorted(first)[:SAMPLE_LIMIT]:
            samples.append([int(x) for x in triples[i]])
    return EnumerationReport(
        field=f,
        zeta=d,
        q=q,
        total_triples=len(triples),
        kx_orbits=n_kx,
        gzeta_orbits=n_g,
        theorem_failures=int(np.count_nonzero(flags & THEOREM_BITS)),
        diag_rank_violations=int(np.count_nonzero(flags & DIAG_RANK)),
        failure_counts=failure_counts,
        samples=samples,
        backend=_kernels.backend_name(),
        closed_field=_closed_field_comparison(d, q, n_g),
    )


def run(d: DiagonalTwist, q, workers: int | None = None) -> EnumerationReport:
    return empirical_theorem_check(scan_p_zeta(d, q, workers), d, q)


def admissible_qs(f: FieldDescriptor) -> list:
    _require_small_prime(f)
    return [f(v) for v in range(1, f.p)]
