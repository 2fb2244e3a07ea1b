"""Pure-Python (numpy-vectorized) tour-search kernels.

These mirror the compiled kernels in ``_ckernels.pyx`` operation for
operation: identical scan order, identical strict-< tie handling, identical
float64 additions. The two backends must return bit-identical results, which
the test suite asserts; keep any change synchronized.
"""

from __future__ import annotations

import numpy as np

# 2-opt moves must improve by more than this to be applied, so that float
# churn on symmetric instances cannot loop forever.
TWO_OPT_EPS = 1e-12


def held_karp_gtsp(dist: np.ndarray, n: int, k: int) -> tuple[list[int], list[int]]:
    """Optimal one-node-per-circle tour over the discretization node graph.

    ``dist`` is the (n*k, n*k) node distance matrix with +inf on intra-circle
    pairs. States are (visited-circle subset, last node); the DP is seeded
    from each slot of circle 0 in ascending order and closed back to the seed.
    Returns (order, slots-by-circle); the caller recomputes the canonical
    length.
    """
    m = n - 1
    mi = m * k
    full = (1 << m) - 1
    inner = dist[k:, k:]

    dp = np.empty((full + 1, mi), dtype=np.float64)
    parent = np.empty((full + 1, mi), dtype=np.int32)
    nodes_of: dict[int, np.ndarray] = {}

    def _nodes(mask: int) -> np.ndarray:
        arr = nodes_of.get(mask)
        if arr is None:
            arr = np.concatenate(
                [np.arange(c * k, c * k + k) for c in range(m) if (mask >> c) & 1]
            )
            nodes_of[mask] = arr
        return arr

    best_len = np.inf
    best_order: list[int] = []
    best_slots: list[int] = []
    for seed in range(k):
        dp.fill(np.inf)
        parent.fill(-1)
        seed_row = dist[seed, k:]
        for c in range(m):
            dp[1 << c, c * k : c * k + k] = seed_row[c * k : c * k + k]
        for mask in range(1, full + 1):
            if mask & (mask - 1) == 0:
                continue
            for c in range(m):
                if not (mask >> c) & 1:
                    continue
                pm = mask ^ (1 << c)
                preds = _nodes(pm)
                cand = dp[pm, preds][:, None] + inner[preds, c * k : c * k + k]
                dp[mask, c * k : c * k + k] = cand.min(axis=0)
                parent[mask, c * k : c * k + k] = preds[cand.argmin(axis=0)]
        totals = dp[full, :] + dist[k:, seed]
        j = int(np.argmin(totals))
        if totals[j] < best_len:
            best_len = float(totals[j])
            best_order, best_slots = _reconstruct(parent, full, j, n, k, seed)
    return best_order, best_slots


def _reconstruct(
    parent: np.ndarray, full: int, final: int, n: int, k: int, seed: int
) -> tuple[list[int], list[int]]:
    slots = [0] * n
    slots[0] = seed
    rev: list[int] = []
    mask = full
    node = final
    while node >= 0:
        c = node // k
        rev.append(c + 1)
        slots[c + 1] = node % k
        nxt = int(parent[mask, node])
        mask ^= 1 << c
        node = nxt
    return [0] + rev[::-1], slots


def chain_best_slots(dist: np.ndarray, n: int, k: int, order: list[int]) -> list[int]:
    """Optimal slot per circle for a fixed cyclic visiting order.

    One chain DP per candidate seed slot of ``order[0]``, closed back to the
    seed; seeds and slot candidates scan ascending with strict-< improvement.
    Returns slots indexed by circle.
    """
    base = [c * k for c in order]
    best_total = np.inf
    best_slots: list[int] = []
    parents = np.empty((n, k), dtype=np.int32)
    for seed in range(k):
        cur = dist[base[0] + seed, base[1] : base[1] + k].copy()
        for pos in range(2, n):
            trans = dist[base[pos - 1] : base[pos - 1] + k, base[pos] : base[pos] + k]
            cand = cur[:, None] + trans
            cur = cand.min(axis=0)
            parents[pos] = cand.argmin(axis=0)
        totals = cur + dist[base[n - 1] : base[n - 1] + k, base[0] + seed]
        j = int(np.argmin(totals))
        if totals[j] < best_total:
            best_total = float(totals[j])
            slots = [0] * n
            slots[order[0]] = seed
            s = j
            for pos in range(n - 1, 1, -1):
                slots[order[pos]] = s
                s = int(parents[pos, s])
            slots[order[1]] = s
            best_slots = slots
    return best_slots


def two_opt(cost: np.ndarray, order: list[int]) -> list[int]:
    """First-improvement 2-opt over a cyclic order, position 0 pinned.

    Scans edge pairs (i, i+1), (j, j+1) in ascending (i, j); a reversal is
    applied as soon as it improves by more than TWO_OPT_EPS, and scanning
    continues on the updated order until a full pass finds nothing.
    """
    order = list(order)
    n = len(order)
    if n < 4:
        return order
    c = cost.tolist()
    while True:
        improved = False
        for i in range(n - 1):
            a = c[order[i]]
            b = order[i + 1]
            for j in range(i + 1, n):
                if i == 0 and j == n - 1:
                    continue
                p = order[j]
                q = order[(j + 1) % n]
                delta = a[p] + c[b][q] - a[b] - c[p][q]
                if delta < -TWO_OPT_EPS:
                    order[i + 1 : j + 1] = order[i + 1 : j + 1][::-1]
                    improved = True
                    b = order[i + 1]
        if not improved:
            return order
