# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled subset-sum kernels over int64 with overflow detection.

Same contract as ``_pykernels``; any intermediate value leaving the int64
range raises ``OverflowError`` and the caller falls back to exact Python ints.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

cnp.import_array()

BACKEND = "compiled"

cdef extern from *:
    """
    static inline int ps_add(long long a, long long b, long long *r) { return __builtin_saddll_overflow(a, b, r); }
    static inline int ps_sub(long long a, long long b, long long *r) { return __builtin_ssubll_overflow(a, b, r); }
    static inline int ps_mul(long long a, long long b, long long *r) { return __builtin_smulll_overflow(a, b, r); }
    """
    int ps_add(long long a, long long b, long long *r) nogil
    int ps_sub(long long a, long long b, long long *r) nogil
    int ps_mul(long long a, long long b, long long *r) nogil


cdef struct Ctx:
    int k
    int n
    long long *ts
    long long *mats
    long long *vecs
    char *ident
    long long target_t
    long long *target_v
    long long *T
    long long *V
    char *eps
    long long nodes


cdef int _dfs(Ctx *c, int i) noexcept nogil:
    # 1 found, 0 exhausted, -1 overflow
    cdef int n = c.n, r, a, b
    cdef long long acc, prod
    cdef long long *cur = c.V + i * n
    cdef long long *nxt = c.V + (i + 1) * n
    cdef long long *M
    c.nodes += 1
    if i == c.k:
        if c.T[i] != c.target_t:
            return 0
        for a in range(n):
            if cur[a] != c.target_v[a]:
                return 0
        return 1
    c.eps[i] = 0
    c.T[i + 1] = c.T[i]
    memcpy(nxt, cur, n * sizeof(long long))
    r = _dfs(c, i + 1)
    if r != 0:
        return r
    c.eps[i] = 1
    if ps_add(c.T[i], c.ts[i], &c.T[i + 1]):
        return -1
    if c.ident[i]:
        for a in range(n):
            if ps_add(cur[a], c.vecs[i * n + a], &nxt[a]):
                return -1
    else:
        M = c.mats + i * n * n
        for a in range(n):
            acc = c.vecs[i * n + a]
            for b in range(n):
                if ps_mul(M[a * n + b], cur[b], &prod):
                    return -1
                if ps_add(acc, prod, &acc):
                    return -1
            nxt[a] = acc
    r = _dfs(c, i + 1)
    if r == 0:
        c.eps[i] = 0
    return r


def brute_dfs(ts, mats, vecs, target_t, target_v):
    cdef int k = len(ts)
    cdef int n = len(target_v)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ts_a = np.asarray(ts, dtype=np.int64).reshape(k)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] mats_a = np.asarray(mats, dtype=np.int64).reshape(k * n * n)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] vecs_a = np.asarray(vecs, dtype=np.int64).reshape(k * n)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] tv_a = np.asarray(target_v, dtype=np.int64).reshape(n)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] ident_a = np.zeros(k, dtype=np.int8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] T = np.zeros(k + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] V = np.zeros((k + 1) * n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] eps = np.zeros(max(k, 1), dtype=np.int8)
    cdef Ctx c
    cdef int r
    eye = np.eye(n, dtype=np.int64).reshape(n * n)
    for i in range(k):
        ident_a[i] = bool(np.array_equal(mats_a[i * n * n:(i + 1) * n * n], eye))
    c.k = k
    c.n = n
    c.ts = <long long *> ts_a.data
    c.mats = <long long *> mats_a.data
    c.vecs = <long long *> vecs_a.data
    c.ident = <char *> ident_a.data
    c.target_t = <long long> target_t
    c.target_v = <long long *> tv_a.data
    c.T = <long long *> T.data
    c.V = <long long *> V.data
    c.eps = <char *> eps.data
    c.nodes = 0
    with nogil:
        r = _dfs(&c, 0)
    if r < 0:
        raise OverflowError("int64 overflow in brute_dfs")
    if r == 1:
        return True, [int(eps[i]) for i in range(k)], int(c.nodes)
    return False, None, int(c.nodes)


cdef int _subset_sums(long long *vecs, int h, int n, long long *out) noexcept nogil:
    cdef long long mask, low, prev
    cdef int bit, a, item
    for a in range(n):
        out[a] = 0
    for mask in range(1, 1 << h):
        low = mask & -mask
        bit = 0
        while (low >> bit) != 1:
            bit += 1
        prev = mask ^ low
        item = h - 1 - bit
        for a in range(n):
            if ps_add(out[prev * n + a], vecs[item * n + a], &out[mask * n + a]):
                return -1
    return 0


cdef int _cmp_row(long long *x, long long *y, int n) noexcept nogil:
    cdef int a
    for a in range(n):
        if x[a] < y[a]:
            return -1
        if x[a] > y[a]:
            return 1
    return 0


def mitm_bottom(vecs, int split, target_v):
    cdef int k = len(vecs)
    cdef int n = len(target_v)
    cdef int h1 = split, h2 = k - split
    cdef long long n1 = 1 << h1, n2 = 1 << h2
    cdef cnp.ndarray[cnp.int64_t, ndim=2] all_v = np.asarray(vecs, dtype=np.int64).reshape(k, n)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pre_v = np.ascontiguousarray(all_v[:split]).reshape(h1 * n)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] suf_v = np.ascontiguousarray(all_v[split:]).reshape(h2 * n)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] tv = np.asarray(target_v, dtype=np.int64).reshape(n)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] P = np.zeros((n1, n), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] S = np.zeros((n2, n), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] Ss
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order
    cdef long long *need = <long long *> malloc(max(n, 1) * sizeof(long long))
    cdef long long p, lo, hi, mid, nodes, hit = -1, hitp = -1
    cdef int a, ovf = 0, cmp
    try:
        with nogil:
            if _subset_sums(<long long *> suf_v.data, h2, n, <long long *> S.data) < 0:
                ovf = 1
            elif _subset_sums(<long long *> pre_v.data, h1, n, <long long *> P.data) < 0:
                ovf = 1
        if ovf:
            raise OverflowError("int64 overflow in mitm_bottom")
        # stable lexicographic sort: equal rows keep ascending mask order
        keys = [np.arange(n2, dtype=np.int64)] + [S[:, a] for a in range(n - 1, -1, -1)]
        order = np.lexsort(keys).astype(np.int64)
        Ss = np.ascontiguousarray(S[order])
        nodes = n2
        with nogil:
            for p in range(n1):
                nodes += 1
                for a in range(n):
                    if ps_sub(tv[a], P[p, a], &need[a]):
                        ovf = 1
                if ovf:
                    break
                lo = 0
                hi = n2
                while lo < hi:
                    mid = (lo + hi) // 2
                    if _cmp_row(<long long *> Ss.data + mid * n, need, n) < 0:
                        lo = mid + 1
                    else:
                        hi = mid
                if lo < n2 and _cmp_row(<long long *> Ss.data + lo * n, need, n) == 0:
                    hit = order[lo]
                    hitp = p
                    break
        if ovf:
            raise OverflowError("int64 overflow in mitm_bottom")
    finally:
        free(need)
    if hit < 0:
        return False, None, int(nodes)
    eps = [(hitp >> (h1 - 1 - i)) & 1 for i in range(h1)] + [(hit >> (h2 - 1 - i)) & 1 for i in range(h2)]
    return True, [int(e) for e in eps], int(nodes)
