"""Bit-row branch-and-bound kernels (numba when enabled, plain Python otherwise).

Vertex sets are ``uint64`` masks, so a graph has at most 64 vertices.  Every
integer constant is spelled as ``np.uint64`` because numba widens mixed
signed/unsigned arithmetic to float.
"""

from __future__ import annotations

import numpy as np

from .._accel import njit

ZERO = np.uint64(0)
ONE = np.uint64(1)


@njit(cache=True)
def popcount(x):
    c = 0
    while x != ZERO:
        x &= x - ONE
        c += 1
    return c


@njit(cache=True)
def bit(v):
    return ONE << np.uint64(v)


@njit(cache=True)
def rows_from_matrix(adj):
    n = adj.shape[0]
    rows = np.zeros(n, dtype=np.uint64)
    for i in range(n):
        r = ZERO
        for j in range(n):
            if adj[i, j]:
                r |= ONE << np.uint64(j)
        rows[i] = r
    return rows


@njit(cache=True)
def mask_to_list(mask, n):
    out = np.empty(popcount(mask), dtype=np.int64)
    k = 0
    for v in range(n):
        if (mask >> np.uint64(v)) & ONE:
            out[k] = v
            k += 1
    return out


@njit(cache=True)
def _triangle_packing(cand, out_rows, in_rows, n):
    """Greedy count of vertex-disjoint directed 3-cycles inside ``cand``.

    Each such cycle can contribute at most two vertices to a transitive set.
    """
    rem = cand
    count = 0
    for u in range(n):
        bu = ONE << np.uint64(u)
        if rem & bu == ZERO:
            continue
        ws = out_rows[u] & rem
        for w in range(n):
            bw = ONE << np.uint64(w)
            if ws & bw == ZERO:
                continue
            xs = out_rows[w] & in_rows[u] & rem
            if xs != ZERO:
                x = 0
                while (xs >> np.uint64(x)) & ONE == ZERO:
                    x += 1
                rem &= ~(bu | bw | (ONE << np.uint64(x)))
                count += 1
                break
    return count


@njit(cache=True)
def _extend_candidates(cand, chosen, v, out_rows, in_rows, n):
    """Candidates still compatible after ``v`` joins the transitive set ``chosen``.

    ``w`` survives iff exactly one arc joins it to ``v`` and it closes no
    directed triangle with ``v`` and a member of ``chosen``.
    """
    out = ZERO
    single = out_rows[v] ^ in_rows[v]
    rest = cand & single & ~(ONE << np.uint64(v))
    for w in range(n):
        bw = ONE << np.uint64(w)
        if rest & bw == ZERO:
            continue
        if in_rows[v] & bw:
            # w -> v: forbid v -> x -> w
            if out_rows[v] & chosen & in_rows[w]:
                continue
        else:
            # v -> w: forbid w -> x -> v
            if in_rows[v] & chosen & out_rows[w]:
                continue
        out |= bw
    return out


@njit(cache=True)
def _greedy_transitive(cand, out_rows, in_rows, n):
    chosen = ZERO
    while cand != ZERO:
        best_v = -1
        best_d = -1
        for v in range(n):
            if (cand >> np.uint64(v)) & ONE:
                d = popcount(out_rows[v] & cand)
                if d > best_d:
                    best_d = d
                    best_v = v
        # best_v beats the most remaining candidates: make it the next source
        chosen |= ONE << np.uint64(best_v)
        cand = cand & out_rows[best_v] & ~in_rows[best_v]
    return chosen


@njit(cache=True)
def max_transitive_mask(out_rows, in_rows, n):
    """Largest vertex set inducing a transitive tournament.

    Include/exclude search over "insert the next vertex into the growing
    linear order".  Pruning bound: chosen + candidates - disjoint 3-cycles.
    Returns ``(mask, nodes_explored)``.
    """
    full = ZERO
    for v in range(n):
        full |= ONE << np.uint64(v)
    best_mask = _greedy_transitive(full, out_rows, in_rows, n)
    best = popcount(best_mask)

    depth_cap = n + 2
    st_chosen = np.zeros(depth_cap, dtype=np.uint64)
    st_cand = np.zeros(depth_cap, dtype=np.uint64)
    st_v = np.zeros(depth_cap, dtype=np.int64)
    st_stage = np.zeros(depth_cap, dtype=np.int64)
    sp = 1
    st_chosen[0] = ZERO
    st_cand[0] = full
    st_stage[0] = 0
    nodes = 0

    while sp > 0:
        top = sp - 1
        stage = st_stage[top]
        if stage == 0:
            nodes += 1
            chosen = st_chosen[top]
            cand = st_cand[top]
            k = popcount(chosen)
            if cand == ZERO:
                if k > best:
                    best = k
                    best_mask = chosen
                sp -= 1
                continue
            c = popcount(cand)
            if k + c <= best:
                sp -= 1
                continue
            if k + c - _triangle_packing(cand, out_rows, in_rows, n) <= best:
                sp -= 1
                continue
            # branch on the candidate with the most compatible partners
            bv = -1
            bd = -1
            for v in range(n):
                if (cand >> np.uint64(v)) & ONE:
                    d = popcount(cand & (out_rows[v] ^ in_rows[v]))
                    if d > bd:
                        bd = d
                        bv = v
            st_v[top] = bv
            st_stage[top] = 1
            st_chosen[sp] = chosen | (ONE << np.uint64(bv))
            st_cand[sp] = _extend_candidates(cand, chosen, bv, out_rows, in_rows, n)
            st_stage[sp] = 0
            sp += 1
        elif stage == 1:
            st_stage[top] = 2
            bv = st_v[top]
            st_chosen[sp] = st_chosen[top]
            st_cand[sp] = st_cand[top] & ~(ONE << np.uint64(bv))
            st_stage[sp] = 0
            sp += 1
        else:
            sp -= 1
    return best_mask, nodes


@njit(cache=True)
def _coloring_bound(cand, rows, n):
    """Number of colour classes in a greedy colouring of ``cand`` (clique bound)."""
    rem = cand
    colors = 0
    while rem != ZERO:
        colors += 1
        avail = rem
        while avail != ZERO:
            v = 0
            while (avail >> np.uint64(v)) & ONE == ZERO:
                v += 1
            bv = ONE << np.uint64(v)
            rem &= ~bv
            avail &= ~bv & ~rows[v]
    return colors


@njit(cache=True)
def max_clique_mask(rows, n):
    """Largest set pairwise joined in ``rows`` (symmetric, irreflexive).

    Returns ``(mask, nodes_explored)``.
    """
    full = ZERO
    for v in range(n):
        full |= ONE << np.uint64(v)

    # greedy start: repeatedly take the candidate with most candidate neighbours
    best_mask = ZERO
    cand = full
    while cand != ZERO:
        bv = -1
        bd = -1
        for v in range(n):
            if (cand >> np.uint64(v)) & ONE:
                d = popcount(rows[v] & cand)
                if d > bd:
                    bd = d
                    bv = v
        best_mask |= ONE << np.uint64(bv)
        cand &= rows[bv]
    best = popcount(best_mask)

    depth_cap = n + 2
    st_chosen = np.zeros(depth_cap, dtype=np.uint64)
    st_cand = np.zeros(depth_cap, dtype=np.uint64)
    st_v = np.zeros(depth_cap, dtype=np.int64)
    st_stage = np.zeros(depth_cap, dtype=np.int64)
    sp = 1
    st_cand[0] = full
    nodes = 0
    while sp > 0:
        top = sp - 1
        stage = st_stage[top]
        if stage == 0:
            nodes += 1
            chosen = st_chosen[top]
            cand = st_cand[top]
            k = popcount(chosen)
            if cand == ZERO:
                if k > best:
                    best = k
                    best_mask = chosen
                sp -= 1
                continue
            if k + popcount(cand) <= best or k + _coloring_bound(cand, rows, n) <= best:
                sp -= 1
                continue
            bv = -1
            bd = -1
            for v in range(n):
                if (cand >> np.uint64(v)) & ONE:
                    d = popcount(rows[v] & cand)
                    if d > bd:
                        bd = d
                        bv = v
            st_v[top] = bv
            st_stage[top] = 1
            st_chosen[sp] = chosen | (ONE << np.uint64(bv))
            st_cand[sp] = cand & rows[bv]
            st_stage[sp] = 0
            sp += 1
        elif stage == 1:
            st_stage[top] = 2
            bv = st_v[top]
            st_chosen[sp] = st_chosen[top]
            st_cand[sp] = st_cand[top] & ~(ONE << np.uint64(bv))
            st_stage[sp] = 0
            sp += 1
        else:
            sp -= 1
    return best_mask, nodes


@njit(cache=True)
def count_transitive_quads(adj):
    """Number of 4-subsets of a tournament that induce a transitive tournament."""
    n = adj.shape[0]
    total = 0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                for d in range(c + 1, n):
                    # transitive iff scores inside the quad are 0, 1, 2, 3
                    s0 = adj[a, b] + adj[a, c] + adj[a, d]
                    s1 = adj[b, a] + adj[b, c] + adj[b, d]
                    s2 = adj[c, a] + adj[c, b] + adj[c, d]
                    s3 = adj[d, a] + adj[d, b] + adj[d, c]
                    seen = 0
                    for s in (s0, s1, s2, s3):
                        seen |= 1 << s
                    if seen == 15:
                        total += 1
    return total


@njit(cache=True)
def longest_chain_heights(order_adj, topo):
    """Height of every element of a strict partial order (longest chain ending there).

    ``order_adj[i, j]`` means ``i`` precedes ``j``; ``topo`` is a linear
    extension.  Also returns each element's predecessor on a longest chain.
    """
    n = order_adj.shape[0]
    height = np.ones(n, dtype=np.int64)
    prev = np.full(n, -1, dtype=np.int64)
    for a in range(n):
        v = topo[a]
        for b in range(a):
            u = topo[b]
            if order_adj[u, v] and height[u] + 1 > height[v]:
                height[v] = height[u] + 1
                prev[v] = u
    return height, prev
