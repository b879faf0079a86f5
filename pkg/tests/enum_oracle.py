"""Brute-force reference for the finite-field search, sharing no code with the kernels.

Delta(t, g) is computed as n^T adj(G) n where n is the vector dual to the
bivector t (Cauchy-Binet), stability by applying zeta as a general matrix and
trying every scalar, and orbits by enumerating the whole group of matrices
that rescale zeta.
"""

from __future__ import annotations

from itertools import product

import numpy as np


def all_forms(p: int) -> np.ndarray:
    """Every nonzero symmetric form as rows (g11, g12, g13, g22, g23, g33)."""
    g = np.array(list(product(range(p), repeat=6)), dtype=np.int64)
    return g[np.any(g != 0, axis=1)]


def _gram(g: np.ndarray) -> np.ndarray:
    return g[:, [0, 1, 2, 1, 3, 4, 2, 4, 5]].reshape(-1, 3, 3)


def _adjugate(G: np.ndarray) -> np.ndarray:
    out = np.empty_like(G)
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != j]
            cols = [c for c in range(3) if c != i]
            minor = G[:, rows][:, :, cols]
            out[:, i, j] = (-1) ** (i + j) * (minor[:, 0, 0] * minor[:, 1, 1] - minor[:, 0, 1] * minor[:, 1, 0])
    return out


def _alternating(t) -> np.ndarray:
    t12, t13, t23 = t
    return np.array([[0, t12, t13], [-t12, 0, t23], [-t13, -t23, 0]], dtype=np.int64)


def _inv_mod(m: np.ndarray, p: int) -> np.ndarray:
    det = int(round(np.linalg.det(m))) % p
    adj = _adjugate(m[None])[0]
    return adj * pow(det, -1, p) % p


def filter_triples(p: int, alphas, q: int) -> np.ndarray:
    """Rows [t12, t13, t23, g11, g12, g13, g22, g23, g33] of stable triples, lexicographically sorted."""
    zeta = np.diag(np.array(alphas, dtype=np.int64) % p)
    zinv = _inv_mod(zeta, p)
    forms = all_forms(p)
    G = _gram(forms)
    adj = _adjugate(G) % p
    target = (-(q - 1) ** 2 * pow(4, -1, p)) % p  # Delta must equal -(q-1)^2 / 4
    G_moved = np.einsum("ji,njk,kl->nil", zinv, G, zinv) % p
    out = []
    for t in product(range(p), repeat=3):
        if not any(t):
            continue
        n = np.array([t[2], -t[1], t[0]], dtype=np.int64)
        delta = np.einsum("i,nij,j->n", n, adj, n) % p
        ok = delta == target
        A2 = zeta @ _alternating(t) @ zeta.T % p
        t2 = (A2[0, 1], A2[0, 2], A2[1, 2])
        k = next(i for i in range(3) if t[i])
        c = t2[k] * pow(t[k], -1, p) % p
        if any((c * t[i] - t2[i]) % p for i in range(3)):
            continue
        # zeta . g must equal g / c
        ok &= np.all((G_moved * c - G) % p == 0, axis=(1, 2))
        for g in forms[ok]:
            out.append((*t, g[0], g[1], g[2], g[3], g[4], g[5]))
    rows = np.array(out, dtype=np.int64).reshape(-1, 9)
    return rows[np.lexsort(rows.T[::-1])] if len(rows) else rows


def rescaling_group(p: int, alphas) -> np.ndarray:
    """Every invertible phi with phi zeta phi^-1 = c zeta for some scalar c."""
    a = np.array(alphas, dtype=np.int64) % p
    found = []
    for c in range(1, p):
        # phi zeta = c zeta phi entrywise: phi_ij (a_j - c a_i) = 0
        free = np.argwhere((a[None, :] - c * a[:, None]) % p == 0)
        if len(free) == 0:
            continue
        vals = np.array(list(product(range(p), repeat=len(free))), dtype=np.int64)
        mats = np.zeros((len(vals), 3, 3), dtype=np.int64)
        mats[:, free[:, 0], free[:, 1]] = vals
        det = np.round(np.linalg.det(mats)).astype(np.int64) % p
        found.append(mats[det != 0])
    mats = np.concatenate(found)
    return np.unique(mats.reshape(-1, 9), axis=0).reshape(-1, 3, 3)


def orbit_count(p: int, alphas, rows: np.ndarray) -> int:
    """Orbits of rows under the rescaling group and k^x, by union-find."""
    index = {tuple(r): i for i, r in enumerate(rows.tolist())}
    parent = list(range(len(rows)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    G = np.zeros((len(rows), 3, 3), dtype=np.int64)
    A = np.zeros((len(rows), 3, 3), dtype=np.int64)
    G[:] = _gram(rows[:, 3:])
    for k, (i, j) in enumerate(((0, 1), (0, 2), (1, 2))):
        A[:, i, j], A[:, j, i] = rows[:, k], -rows[:, k]
    images = []
    for phi in rescaling_group(p, alphas):
        inv = _inv_mod(phi, p)
        A2 = phi @ A @ phi.T % p
        G2 = inv.T @ G @ inv % p
        images.append(np.column_stack([A2[:, 0, 1], A2[:, 0, 2], A2[:, 1, 2],
                                       G2[:, 0, 0], G2[:, 0, 1], G2[:, 0, 2], G2[:, 1, 1], G2[:, 1, 2], G2[:, 2, 2]]))
    for c in range(2, p):
        scaled = rows.copy()
        scaled[:, :3] = scaled[:, :3] * c % p
        scaled[:, 3:] = scaled[:, 3:] * pow(c, -1, p) % p
        images.append(scaled)
    for img in images:
        for i, r in enumerate(img.tolist()):
            a, b = find(i), find(index[tuple(r)])
            if a != b:
                parent[a] = b
    return len({find(i) for i in range(len(rows))})
