# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled finite-field kernels; same contract as the numpy fallback."""

import numpy as np
cimport numpy as cnp
from libc.string cimport memcpy, memset

ctypedef long long i64

NAME = "cython"

cdef int BRAID = 1
cdef int HECKE = 2
cdef int COMMUTE = 4
cdef int TWISTED = 8
cdef int DIAG_RANK = 16
cdef int COMMUTATION_FALSE = 32
cdef int COMMUTATION_DISAGREE = 64
cdef int NONDEGENERATE = 128
cdef int RANK = 256

cdef int PI[3]
cdef int PJ[3]
PI[0] = 0; PJ[0] = 1
PI[1] = 0; PJ[1] = 2
PI[2] = 1; PJ[2] = 2


cdef inline i64 md(i64 x, i64 p) nogil:
    cdef i64 r = x % p
    return r + p if r < 0 else r


cdef int rank_mod(i64* M, int nr, int nc, i64 p, i64* inv) nogil:
    """Rank over F_p; destroys M (row-major nr x nc, entries reduced)."""
    cdef int r = 0, j, i, k, piv
    cdef i64 f, tmp
    for j in range(nc):
        if r == nr:
            break
        piv = -1
        for i in range(r, nr):
            if M[i * nc + j] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(nc):
                tmp = M[r * nc + k]
                M[r * nc + k] = M[piv * nc + k]
                M[piv * nc + k] = tmp
        f = inv[M[r * nc + j]]
        for k in range(nc):
            M[r * nc + k] = M[r * nc + k] * f % p
        for i in range(r + 1, nr):
            f = M[i * nc + j]
            if f:
                for k in range(nc):
                    M[i * nc + k] = md(M[i * nc + k] - f * M[r * nc + k], p)
        r += 1
    return r


cdef void build_one(i64* tr, i64 p, i64 q, i64 half, i64* R) nogil:
    cdef i64 A[9]
    cdef i64 G[9]
    cdef i64 T[9]
    cdef int i, j, k, l, m
    cdef i64 v, same = md((q - 1) * half, p), swap = md((q + 1) * half, p)
    memset(A, 0, sizeof(A))
    for m in range(3):
        A[PI[m] * 3 + PJ[m]] = tr[m]
        A[PJ[m] * 3 + PI[m]] = -tr[m]
    G[0] = tr[3]; G[1] = tr[4]; G[2] = tr[5]
    G[3] = tr[4]; G[4] = tr[6]; G[5] = tr[7]
    G[6] = tr[5]; G[7] = tr[7]; G[8] = tr[8]
    for i in range(3):
        for j in range(3):
            v = 0
            for k in range(3):
                v += A[i * 3 + k] * G[k * 3 + j]
            T[i * 3 + j] = md(v, p)
    for k in range(3):
        for l in range(3):
            for i in range(3):
                for j in range(3):
                    v = -G[i * 3 + j] * A[k * 3 + l]
                    if k == i and l == j:
                        v += same
                    if k == j and l == i:
                        v += swap
                    if k == i:
                        v -= T[l * 3 + j]
                    if l == i:
                        v += T[k * 3 + j]
                    if k == j:
                        v -= T[l * 3 + i]
                    if l == j:
                        v += T[k * 3 + i]
                    R[(k * 3 + l) * 9 + i * 3 + j] = md(v, p)


def build_R(i64 p, i64 q, triples):
    cdef i64[:, ::1] tv = np.ascontiguousarray(triples, dtype=np.int64)
    cdef Py_ssize_t n, N = tv.shape[0]
    out = np.empty((N, 9, 9), dtype=np.int64)
    cdef i64[:, :, ::1] ov = out
    cdef i64 half = pow(2, p - 2, p)
    cdef i64 tr[9]
    cdef int k
    with nogil:
        for n in range(N):
            for k in range(9):
                tr[k] = md(tv[n, k], p)
            build_one(tr, p, q, half, &ov[n, 0, 0])
    return out


cdef void apply12(i64* R, i64* v, i64* out, i64 p) nogil:
    # out[k,l,c] = sum_{a,b} R[kl,ab] v[a,b,c]
    cdef int kl, ab, c
    cdef i64 x
    memset(out, 0, 27 * sizeof(i64))
    for ab in range(9):
        for c in range(3):
            x = v[ab * 3 + c]
            if x:
                for kl in range(9):
                    out[kl * 3 + c] += R[kl * 9 + ab] * x
    for c in range(27):
        out[c] = out[c] % p


cdef void apply23(i64* R, i64* v, i64* out, i64 p) nogil:
    cdef int a, kl, bc
    cdef i64 x
    memset(out, 0, 27 * sizeof(i64))
    for a in range(3):
        for bc in range(9):
            x = v[a * 9 + bc]
            if x:
                for kl in range(9):
                    out[a * 9 + kl] += R[kl * 9 + bc] * x
    for a in range(27):
        out[a] = out[a] % p


cdef bint braid_ok(i64* R, i64 p) nogil:
    cdef i64 u[27]
    cdef i64 w[27]
    cdef i64 x[27]
    cdef i64 y[27]
    cdef int col, k
    for col in range(27):
        memset(u, 0, sizeof(u))
        u[col] = 1
        apply12(R, u, w, p)
        apply23(R, w, u, p)
        apply12(R, u, x, p)
        memset(u, 0, sizeof(u))
        u[col] = 1
        apply23(R, u, w, p)
        apply12(R, w, u, p)
        apply23(R, u, y, p)
        for k in range(27):
            if x[k] != y[k]:
                return False
    return True


cdef bint hecke_ok(i64* R, i64 p, i64 q) nogil:
    cdef int i, j, k
    cdef i64 s, a, b
    for i in range(9):
        for j in range(9):
            s = 0
            for k in range(9):
                a = R[i * 9 + k] - (q if i == k else 0)
                b = R[k * 9 + j] + (1 if k == j else 0)
                s += a * b
            if s % p:
                return False
    return True


cdef bint commutes(i64* R, i64* aa, i64 p) nogil:
    cdef int r, c
    for r in range(9):
        for c in range(9):
            if R[r * 9 + c] and md(aa[r] - aa[c], p):
                return False
    return True


cdef void forms_tensor(i64* Y, i64* a, i64* inv, i64 p, i64* L) nogil:
    # L[r][i][j]; coordinate c_st of w = a_i Y[:, (i,j)] is w[st] / a_s
    cdef int i, j
    cdef i64 ai, c01, c02, c12
    for i in range(3):
        ai = a[i]
        for j in range(3):
            c01 = Y[1 * 9 + i * 3 + j] * ai % p * inv[a[0]] % p
            c02 = Y[2 * 9 + i * 3 + j] * ai % p * inv[a[0]] % p
            c12 = Y[5 * 9 + i * 3 + j] * ai % p * inv[a[1]] % p
            L[0 * 9 + i * 3 + j] = c12
            L[1 * 9 + i * 3 + j] = md(-c02, p)
            L[2 * 9 + i * 3 + j] = c01


cdef void eval_form(i64* L, i64* x, i64* y, i64 p, i64* out) nogil:
    cdef int r, i, j
    cdef i64 s, xy
    for j in range(3):
        out[j] = 0
    for r in range(3):
        if x[r]:
            for i in range(3):
                xy = x[r] * y[i] % p
                if xy:
                    for j in range(3):
                        out[j] += xy * L[r * 9 + i * 3 + j]
    for j in range(3):
        out[j] = out[j] % p


cdef bint proportional(i64* X, i64* Xp, int n, i64 p, i64* inv) nogil:
    cdef int k, first = -1
    cdef i64 c
    for k in range(n):
        if X[k]:
            first = k
            break
    if first < 0:
        return False
    c = Xp[first] * inv[X[first]] % p
    for k in range(n):
        if md(Xp[k] - c * X[k], p):
            return False
    return True


cdef int check_one(i64* R, i64 p, i64 q, i64* a, i64* aa, i64* inv, i64* pairs, int npairs) nogil:
    cdef int flags = 0, i, j, k, m, u, v
    cdef i64 Rz[81]
    cdef i64 Y[81]
    cdef i64 Yp[81]
    cdef i64 M[81]
    cdef i64 L[27]
    cdef i64 Lp[27]
    cdef i64 D[18]
    cdef i64 f1[3]
    cdef i64 f2[3]
    cdef i64 x[3]
    cdef bint comm, c_ok[5]
    cdef bint all_t, all_f, twisted_ok

    if not braid_ok(R, p):
        flags |= BRAID
    if not hecke_ok(R, p, q):
        flags |= HECKE
    comm = commutes(R, aa, p)
    if not comm:
        flags |= COMMUTE

    # Rz[kl, ij] = R[kl, ij] a_k / a_i
    for i in range(9):
        for j in range(9):
            Rz[i * 9 + j] = R[i * 9 + j] * a[i // 3] % p * inv[a[j // 3]] % p
    for i in range(81):
        Y[i] = md((q if i % 10 == 0 else 0) - Rz[i], p)
    memcpy(M, Y, sizeof(M))
    if rank_mod(M, 9, 9, p, inv) != 3:
        flags |= RANK
        flags |= TWISTED
        return flags
    twisted_ok = True
    for j in range(9):
        for i in range(3):
            if Y[(4 * i) * 9 + j]:
                twisted_ok = False
        for m in range(3):
            u = PI[m] * 3 + PJ[m]
            v = PJ[m] * 3 + PI[m]
            if md(a[PJ[m]] * Y[u * 9 + j] + a[PI[m]] * Y[v * 9 + j], p):
                twisted_ok = False
    if not twisted_ok:
        flags |= TWISTED
        return flags

    for i in range(9):
        for j in range(9):
            Yp[i * 9 + j] = Y[i * 9 + j] * aa[j] % p * inv[aa[i]] % p
    forms_tensor(Y, a, inv, p, L)
    forms_tensor(Yp, a, inv, p, Lp)

    # rank of the diagonal forms at e1, e2, e3, e1+e2, e1+e3, e2+e3
    for m in range(6):
        x[0] = 1 if m in (0, 3, 4) else 0
        x[1] = 1 if m in (1, 3, 5) else 0
        x[2] = 1 if m in (2, 4, 5) else 0
        eval_form(L, x, x, p, &D[m * 3])
    if rank_mod(D, 6, 3, p, inv) != 1:
        flags |= DIAG_RANK

    c_ok[0] = commutes(Rz, aa, p)
    c_ok[1] = True
    for i in range(81):
        if Yp[i] != Y[i]:
            c_ok[1] = False
            break
    c_ok[2] = proportional(Y, Yp, 81, p, inv)
    c_ok[3] = proportional(L, Lp, 27, p, inv)
    c_ok[4] = True
    for m in range(npairs):
        eval_form(L, &pairs[m * 6], &pairs[m * 6 + 3], p, f1)
        eval_form(Lp, &pairs[m * 6], &pairs[m * 6 + 3], p, f2)
        for u in range(3):
            for v in range(u + 1, 3):
                if md(f1[u] * f2[v] - f1[v] * f2[u], p):
                    c_ok[4] = False
        if not c_ok[4]:
            break
    all_t = c_ok[0] and c_ok[1] and c_ok[2] and c_ok[3] and c_ok[4]
    all_f = not (c_ok[0] or c_ok[1] or c_ok[2] or c_ok[3] or c_ok[4])
    if not all_t:
        flags |= COMMUTATION_FALSE
    if not (all_t or all_f):
        flags |= COMMUTATION_DISAGREE

    memcpy(M, L, 27 * sizeof(i64))
    k = rank_mod(M, 9, 3, p, inv)
    memcpy(M, L, 27 * sizeof(i64))
    if k != 3 or rank_mod(M, 3, 9, p, inv) != 3:
        flags |= NONDEGENERATE
    else:
        for i in range(3):
            for m in range(3):
                for j in range(3):
                    M[i * 9 + m * 3 + j] = L[m * 9 + i * 3 + j]
        if rank_mod(M, 3, 9, p, inv) != 3:
            flags |= NONDEGENERATE
    return flags


def check_operators(i64 p, alphas, i64 q, operators, pairs):
    cdef i64[:, :, ::1] Rv = np.ascontiguousarray(operators, dtype=np.int64) % p
    cdef i64[:, :, ::1] Pv = np.ascontiguousarray(pairs, dtype=np.int64) % p
    cdef Py_ssize_t n, N = Rv.shape[0]
    cdef int npairs = Pv.shape[0], i, j
    out = np.zeros(N, dtype=np.int64)
    cdef i64[::1] ov = out
    cdef i64 a[3]
    cdef i64 aa[9]
    inv_arr = np.zeros(p, dtype=np.int64)
    for i in range(1, p):
        inv_arr[i] = pow(i, p - 2, p)
    cdef i64[::1] inv = inv_arr
    for i in range(3):
        a[i] = alphas[i] % p
    for i in range(3):
        for j in range(3):
            aa[i * 3 + j] = a[i] * a[j] % p
    q = q % p
    with nogil:
        for n in range(N):
            ov[n] = check_one(&Rv[n, 0, 0], p, q, a, aa, &inv[0], &Pv[0, 0, 0], npairs)
    return out


def scan(i64 p, alphas, i64 q, t12_values=None):
    cdef i64 a[3]
    cdef i64 gp[6]
    cdef int gi[6]
    cdef int gj[6]
    cdef int free[6]
    cdef i64 g[6]
    cdef i64 t[3]
    cdef int nfree, k, m, n, idx
    cdef i64 c, target, d, t12, t13, t23, total, combo
    cdef bint bad
    gi[:] = [0, 0, 0, 1, 1, 2]
    gj[:] = [0, 1, 2, 1, 2, 2]
    for k in range(3):
        a[k] = alphas[k] % p
    target = md(-(q - 1) * (q - 1) * pow(4, p - 2, p), p)
    if t12_values is None:
        t12_values = range(p)
    blocks = []
    cdef i64[:, ::1] bv
    cdef i64 G[9]
    for t12 in t12_values:
        for t13 in range(p):
            for t23 in range(p):
                t[0] = t12; t[1] = t13; t[2] = t23
                if not (t12 or t13 or t23):
                    continue
                c = -1
                bad = False
                for k in range(3):
                    if t[k]:
                        d = a[PI[k]] * a[PJ[k]] % p
                        if c < 0:
                            c = d
                        elif c != d:
                            bad = True
                if bad:
                    continue
                nfree = 0
                for k in range(6):
                    if a[gi[k]] * a[gj[k]] % p == c:
                        free[nfree] = k
                        nfree += 1
                if nfree == 0:
                    continue
                total = 1
                for k in range(nfree):
                    total *= p
                buf = np.empty((total, 9), dtype=np.int64)
                bv = buf
                n = 0
                for combo in range(total):
                    for k in range(6):
                        g[k] = 0
                    d = combo
                    for k in range(nfree - 1, -1, -1):
                        g[free[k]] = d % p
                        d //= p
                    if not (g[0] or g[1] or g[2] or g[3] or g[4] or g[5]):
                        continue
                    G[0] = g[0]; G[1] = g[1]; G[2] = g[2]
                    G[3] = g[1]; G[4] = g[3]; G[5] = g[4]
                    G[6] = g[2]; G[7] = g[4]; G[8] = g[5]
                    d = 0
                    for k in range(3):
                        if t[k]:
                            for m in range(3):
                                if t[m]:
                                    d += t[k] * t[m] * (G[PI[k] * 3 + PI[m]] * G[PJ[k] * 3 + PJ[m]]
                                                        - G[PI[k] * 3 + PJ[m]] * G[PJ[k] * 3 + PI[m]])
                    if md(d, p) != target:
                        continue
                    bv[n, 0] = t12; bv[n, 1] = t13; bv[n, 2] = t23
                    for k in range(6):
                        bv[n, 3 + k] = g[k]
                    n += 1
                if n:
                    blocks.append(buf[:n])
    if not blocks:
        return np.zeros((0, 9), dtype=np.int64)
    return np.concatenate(blocks)
