# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled tour-search kernels.

Operation-for-operation twin of ``_pykernels.py``: same scan order, same
strict-< tie handling, same float64 additions, so both backends return
bit-identical results. Keep any change synchronized with the fallback.
"""

import numpy as np

cimport numpy as cnp

cdef double INF = float("inf")
cdef double TWO_OPT_EPS = 1e-12


def held_karp_gtsp(double[:, ::1] dist, Py_ssize_t n, Py_ssize_t k):
    """Optimal one-node-per-circle tour over the discretization node graph."""
    cdef Py_ssize_t m = n - 1
    cdef Py_ssize_t mi = m * k
    cdef Py_ssize_t full = (1 << m) - 1
    cdef cnp.ndarray dp_arr = np.empty((full + 1, mi), dtype=np.float64)
    cdef cnp.ndarray par_arr = np.empty((full + 1, mi), dtype=np.int32)
    cdef double[:, ::1] dp = dp_arr
    cdef int[:, ::1] parent = par_arr

    cdef Py_ssize_t seed, mask, pm, c, s, c2, s2, node, pred, j
    cdef double v, best, best_len = INF
    cdef int arg
    best_order: list = []
    best_slots: list = []

    for seed in range(k):
        dp_arr.fill(INF)
        par_arr.fill(-1)
        for c in range(m):
            for s in range(k):
                dp[1 << c, c * k + s] = dist[seed, k + c * k + s]
        for mask in range(1, full + 1):
            if mask & (mask - 1) == 0:
                continue
            for c in range(m):
                if not (mask >> c) & 1:
                    continue
                pm = mask ^ (1 << c)
                for s in range(k):
                    node = c * k + s
                    best = INF
                    arg = -1
                    # predecessors scan in ascending inner-node index
                    for c2 in range(m):
                        if not (pm >> c2) & 1:
                            continue
                        for s2 in range(k):
                            pred = c2 * k + s2
                            v = dp[pm, pred] + dist[k + pred, k + node]
                            if v < best:
                                best = v
                                arg = <int> pred
                    dp[mask, node] = best
                    parent[mask, node] = arg
        for j in range(mi):
            v = dp[full, j] + dist[k + j, seed]
            if v < best_len:
                best_len = v
                best_order, best_slots = _reconstruct(parent, full, j, n, k, seed)
    return best_order, best_slots


cdef _reconstruct(int[:, ::1] parent, Py_ssize_t full, Py_ssize_t final,
                  Py_ssize_t n, Py_ssize_t k, Py_ssize_t seed):
    cdef Py_ssize_t mask = full, node = final, c
    cdef int nxt
    slots = [0] * n
    slots[0] = seed
    rev = []
    while node >= 0:
        c = node // k
        rev.append(c + 1)
        slots[c + 1] = node % k
        nxt = parent[mask, node]
        mask ^= 1 << c
        node = nxt
    rev.reverse()
    return [0] + rev, slots


def chain_best_slots(double[:, ::1] dist, Py_ssize_t n, Py_ssize_t k, order):
    """Optimal slot per circle for a fixed cyclic visiting order."""
    cdef cnp.ndarray base_arr = np.asarray(order, dtype=np.int64) * k
    cdef long[::1] base = base_arr
    cdef cnp.ndarray cur_arr = np.empty(k, dtype=np.float64)
    cdef cnp.ndarray nxt_arr = np.empty(k, dtype=np.float64)
    cdef cnp.ndarray par_arr = np.empty((n, k), dtype=np.int32)
    cdef double[::1] cur = cur_arr
    cdef double[::1] nxt = nxt_arr
    cdef int[:, ::1] parents = par_arr

    cdef Py_ssize_t seed, pos, s, sp, j
    cdef double v, best, best_total = INF
    cdef int arg
    best_slots: list = []

    for seed in range(k):
        for s in range(k):
            cur[s] = dist[base[0] + seed, base[1] + s]
        for pos in range(2, n):
            for s in range(k):
                best = INF
                arg = -1
                for sp in range(k):
                    v = cur[sp] + dist[base[pos - 1] + sp, base[pos] + s]
                    if v < best:
                        best = v
                        arg = <int> sp
                nxt[s] = best
                parents[pos, s] = arg
            cur[:] = nxt
        best = INF
        arg = -1
        for j in range(k):
            v = cur[j] + dist[base[n - 1] + j, base[0] + seed]
            if v < best:
                best = v
                arg = <int> j
        if best < best_total:
            best_total = best
            slots = [0] * n
            slots[order[0]] = seed
            s = arg
            for pos in range(n - 1, 1, -1):
                slots[order[pos]] = s
                s = parents[pos, s]
            slots[order[1]] = s
            best_slots = slots
    return best_slots


def two_opt(double[:, ::1] cost, order):
    """First-improvement 2-opt over a cyclic order, position 0 pinned."""
    cdef Py_ssize_t n = len(order)
    out = list(order)
    if n < 4:
        return out
    cdef cnp.ndarray ord_arr = np.asarray(out, dtype=np.int64)
    cdef long[::1] o = ord_arr
    cdef Py_ssize_t i, j, lo, hi
    cdef long a, b, p, q, tmp
    cdef double delta
    cdef bint improved

    while True:
        improved = False
        for i in range(n - 1):
            a = o[i]
            b = o[i + 1]
            for j in range(i + 1, n):
                if i == 0 and j == n - 1:
                    continue
                p = o[j]
                q = o[0] if j + 1 == n else o[j + 1]
                delta = cost[a, p] + cost[b, q] - cost[a, b] - cost[p, q]
                if delta < -TWO_OPT_EPS:
                    lo = i + 1
                    hi = j
                    while lo < hi:
                        tmp = o[lo]
                        o[lo] = o[hi]
                        o[hi] = tmp
                        lo += 1
                        hi -= 1
                    improved = True
                    b = o[i + 1]
        if not improved:
            return [int(v) for v in ord_arr]
