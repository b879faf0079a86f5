"""Pure numpy implementation of the finite-field kernels.

Triples are int64 rows ``[t12, t13, t23, g11, g12, g13, g22, g23, g33]`` of
residues mod p.  All matrix products run in float64, which is exact here
because p is small (every partial sum stays far below 2**53).
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .flags import (
    BRAID,
    COMMUTATION_DISAGREE,
    COMMUTATION_FALSE,
    COMMUTE,
    DIAG_RANK,
    HECKE,
    NONDEGENERATE,
    RANK,
    TWISTED,
)

NAME = "numpy"
PAIRS = ((0, 1), (0, 2), (1, 2))
G_COORDS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
CHUNK = 2048


def _inv_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for v in range(1, p):
        inv[v] = pow(v, -1, p)
    return inv


def delta_target(p: int, q: int) -> int:
    """Delta value forced by (q-1)^2 = -4 Delta."""
    return (-(q - 1) ** 2 * pow(4, -1, p)) % p


def _support_scale(alphas, p, pairs_present) -> int | None:
    """Common value of a_i a_j over the given pairs, or None."""
    vals = {alphas[i] * alphas[j] % p for i, j in pairs_present}
    return vals.pop() if len(vals) == 1 else None


def scan(p: int, alphas, q: int, t12_values=None) -> np.ndarray:
    alphas = [a % p for a in alphas]
    target = delta_target(p, q)
    t12_values = range(p) if t12_values is None else t12_values
    out = []
    for t12 in t12_values:
        for t13, t23 in product(range(p), repeat=2):
            t = (t12, t13, t23)
            if not any(t):
                continue
            c = _support_scale(alphas, p, [pr for pr, v in zip(PAIRS, t) if v])
            if c is None:
                continue
            free = [k for k, (i, j) in enumerate(G_COORDS) if alphas[i] * alphas[j] % p == c]
            if not free:
                continue
            grid = np.indices((p,) * len(free)).reshape(len(free), -1).T
            g = np.zeros((grid.shape[0], 6), dtype=np.int64)
            g[:, free] = grid
            G = g[:, [0, 1, 2, 1, 3, 4, 2, 4, 5]].reshape(-1, 3, 3)
            d = np.zeros(g.shape[0], dtype=np.int64)
            for (i, j), tp in zip(PAIRS, t):
                for (k, l), tq in zip(PAIRS, t):
                    if tp and tq:
                        d += tp * tq * (G[:, i, k] * G[:, j, l] - G[:, i, l] * G[:, j, k])
            keep = (d % p == target) & g.any(axis=1)
            rows = g[keep]
            if len(rows):
                block = np.empty((len(rows), 9), dtype=np.int64)
                block[:, :3] = t
                block[:, 3:] = rows
                out.append(block)
    if not out:
        return np.zeros((0, 9), dtype=np.int64)
    return np.concatenate(out)


def rank_mod_p(M: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a batch of matrices (N, r, c) over F_p."""
    M = M.copy() % p
    N, nr, nc = M.shape
    inv = _inv_table(p)
    rank = np.zeros(N, dtype=np.int64)
    rows = np.arange(nr)
    batch = np.arange(N)
    for j in range(nc):
        cand = (M[:, :, j] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        b = batch[has]
        r, pv = rank[has], piv[has]
        top, other = M[b, r].copy(), M[b, pv].copy()
        M[b, r], M[b, pv] = other, top
        M[b, r] = M[b, r] * inv[M[b, r, j]][:, None] % p
        below = rows[None, :] > r[:, None]
        factor = np.where(below, M[b, :, j], 0)
        M[b] = (M[b] - factor[:, :, None] * M[b, r][:, None, :]) % p
        rank[has] += 1
    return rank


def _bivector_matrix(t: np.ndarray) -> np.ndarray:
    A = np.zeros((t.shape[0], 3, 3), dtype=np.int64)
    for k, (i, j) in enumerate(PAIRS):
        A[:, i, j] = t[:, k]
        A[:, j, i] = -t[:, k]
    return A


def build_R(p: int, q: int, triples: np.ndarray) -> np.ndarray:
    """The operators attached to the triples, shape (N, 9, 9), column = image."""
    triples = np.asarray(triples, dtype=np.int64) % p
    out = np.empty((len(triples), 9, 9), dtype=np.int64)
    for start in range(0, len(triples), 8 * CHUNK):
        out[start : start + 8 * CHUNK] = _build_chunk(p, q, triples[start : start + 8 * CHUNK])
    return out


def _build_chunk(p: int, q: int, triples: np.ndarray) -> np.ndarray:
    t = triples[:, :3]
    G = triples[:, [3, 4, 5, 4, 6, 7, 5, 7, 8]].reshape(-1, 3, 3)
    A = _bivector_matrix(t)
    T = np.einsum("nab,nbc->nac", A, G) % p
    half = pow(2, -1, p)
    same, swap = (q - 1) * half % p, (q + 1) * half % p
    I = np.eye(3, dtype=np.int64)
    # R[n, k, l, i, j]
    R = np.einsum("ki,lj->klij", I, I)[None] * same + np.einsum("kj,li->klij", I, I)[None] * swap
    R = R - np.einsum("nij,nkl->nklij", G, A)
    R = R - np.einsum("ki,nlj->nklij", I, T) + np.einsum("nkj,li->nklij", T, I)
    R = R - np.einsum("kj,nli->nklij", I, T) + np.einsum("nki,lj->nklij", T, I)
    return (R % p).reshape(-1, 9, 9)


def _mm(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (np.matmul(a.astype(np.float64), b.astype(np.float64)) % p).astype(np.int64)


def _first_nonzero_ratio(X: np.ndarray, Xp: np.ndarray, p: int, inv: np.ndarray) -> np.ndarray:
    """Boolean: Xp == c X for some c (rows of X are flattened batches)."""
    nz = X != 0
    has = nz.any(axis=1)
    idx = np.argmax(nz, axis=1)
    n = np.arange(X.shape[0])
    c = Xp[n, idx] * inv[X[n, idx]] % p
    return has & ((Xp - c[:, None] * X) % p == 0).all(axis=1)


def _forms(Y: np.ndarray, alphas, p: int, inv: np.ndarray) -> np.ndarray:
    """L[n, r, i, j]: value at e_j of the form for (e_r, e_i)."""
    N = Y.shape[0]
    Y4 = Y.reshape(N, 3, 3, 3, 3)  # [s, t, i, j]
    a = np.array(alphas, dtype=np.int64)
    # w = a_i * Y[:, (i, j)], coordinate c_st = w[s, t] / a_s
    w = Y4 * a[None, None, None, :, None] % p

    def coord(s, t):
        return w[:, s, t] * inv[a[s]] % p

    L = np.empty((N, 3, 3, 3), dtype=np.int64)
    L[:, 0] = coord(1, 2)
    L[:, 1] = (-coord(0, 2)) % p
    L[:, 2] = coord(0, 1)
    return L


def _eval_forms(L: np.ndarray, xs: np.ndarray, ys: np.ndarray, p: int) -> np.ndarray:
    """ell_{x y} for each pair, shape (N, M, 3)."""
    return np.einsum("mr,mi,nrij->nmj", xs, ys, L) % p


def check_operators(p: int, alphas, q: int, operators: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    operators = np.asarray(operators, dtype=np.int64) % p
    pairs = np.asarray(pairs, dtype=np.int64) % p
    out = np.zeros(len(operators), dtype=np.int64)
    for start in range(0, len(operators), CHUNK):
        out[start : start + CHUNK] = _check_chunk(p, alphas, q % p, operators[start : start + CHUNK], pairs)
    return out


def _check_chunk(p, alphas, q, R, pairs):
    alphas = [a % p for a in alphas]
    inv = _inv_table(p)
    N = len(R)
    flags = np.zeros(N, dtype=np.int64)
    if N == 0:
        return flags
    I3, I9 = np.eye(3, dtype=np.int64), np.eye(9, dtype=np.int64)

    R12 = np.einsum("nab,cd->nacbd", R, I3).reshape(N, 27, 27)
    R23 = np.einsum("ab,ncd->nacbd", I3, R).reshape(N, 27, 27)
    lhs = _mm(_mm(R12, R23, p), R12, p)
    rhs = _mm(_mm(R23, R12, p), R23, p)
    flags |= np.where((lhs != rhs).any(axis=(1, 2)), BRAID, 0)

    hk = _mm((R - q * I9) % p, (R + I9) % p, p)
    flags |= np.where(hk.any(axis=(1, 2)), HECKE, 0)

    a = np.array(alphas, dtype=np.int64)
    aa = np.outer(a, a).reshape(9) % p  # a_k a_l at flat index 3k + l
    commute_defect = R * ((aa[None, :] - aa[:, None]) % p)[None] % p
    commutes = ~commute_defect.any(axis=(1, 2))
    flags |= np.where(commutes, 0, COMMUTE)

    # twist: Rz[kl, ij] = R[kl, ij] a_k / a_i
    ak = np.repeat(a, 3)
    inv_ai = inv[np.repeat(a, 3)]
    Rz = R * (ak[:, None] * inv_ai[None, :] % p)[None] % p
    Y = (q * I9[None] - Rz) % p
    rank_ok = rank_mod_p(Y, p) == 3
    flags |= np.where(rank_ok, 0, RANK)

    ann = np.zeros((6, 9), dtype=np.int64)
    for i in range(3):
        ann[i, 4 * i] = 1
    for k, (i, j) in enumerate(PAIRS):
        ann[3 + k, 3 * i + j] = a[j]
        ann[3 + k, 3 * j + i] = a[i]
    in_span = ~(_mm(np.broadcast_to(ann, (N, 6, 9)), Y, p)).any(axis=(1, 2))
    twisted = in_span & rank_ok
    flags |= np.where(in_span & rank_ok, 0, TWISTED)

    idx = np.flatnonzero(twisted)
    if len(idx) == 0:
        return flags
    Yv = Y[idx]
    scale = (aa[None, :] * inv[aa][:, None]) % p  # a_i a_j / (a_k a_l)
    Yp = Yv * scale[None] % p
    L = _forms(Yv, alphas, p, inv)
    Lp = _forms(Yp, alphas, p, inv)

    pol = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1]], dtype=np.int64)
    diag = _eval_forms(L, pol, pol, p)
    dim_u = rank_mod_p(diag, p)
    sub = np.zeros(len(idx), dtype=np.int64)
    sub |= np.where(dim_u == 1, 0, DIAG_RANK)

    n = len(idx)
    rz = Rz[idx]
    zz_commutes = ~(rz * ((aa[None, :] - aa[:, None]) % p)[None] % p).any(axis=(1, 2))
    y_equal = (Yp == Yv).all(axis=(1, 2))
    y_prop = _first_nonzero_ratio(Yv.reshape(n, -1), Yp.reshape(n, -1), p, inv)
    l_prop = _first_nonzero_ratio(L.reshape(n, -1), Lp.reshape(n, -1), p, inv)
    xs, ys = pairs[:, 0] % p, pairs[:, 1] % p
    f1 = _eval_forms(L, xs, ys, p)
    f2 = _eval_forms(Lp, xs, ys, p)
    wedge = (np.einsum("nmu,nmv->nmuv", f1, f2) - np.einsum("nmv,nmu->nmuv", f1, f2)) % p
    w_zero = ~wedge.any(axis=(1, 2, 3))
    conds = np.stack([zz_commutes, y_equal, y_prop, l_prop, w_zero], axis=1)
    sub |= np.where(conds.all(axis=1), 0, COMMUTATION_FALSE)
    sub |= np.where(conds.all(axis=1) | (~conds).all(axis=1), 0, COMMUTATION_DISAGREE)

    spans = rank_mod_p(L.reshape(n, 9, 3), p) == 3
    first = rank_mod_p(L.reshape(n, 3, 9), p) == 3
    second = rank_mod_p(L.transpose(0, 2, 1, 3).reshape(n, 3, 9), p) == 3
    sub |= np.where(spans & first & second, 0, NONDEGENERATE)
    flags[idx] |= sub
    return flags
