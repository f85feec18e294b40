"""Exact trans(T), hom(G) and best homogeneous substructure."""

from __future__ import annotations

import bisect

import numpy as np

from . import _kernels as K
from .graphs import (
    KIND_PRIORITY,
    MAX_VERTICES,
    Digraph,
    HomogeneousWitness,
    Tournament,
    WitnessKind,
)


class TooLarge(ValueError):
    def __init__(self, n: int):
        super().__init__(f"{n} vertices exceeds the solver ceiling of {MAX_VERTICES}")
        self.n = n


def _check_size(g: Digraph) -> None:
    if g.n > MAX_VERTICES:
        raise TooLarge(g.n)


def _rows(g: Digraph) -> tuple[np.ndarray, np.ndarray]:
    return K.rows_from_matrix(g.adjacency), K.rows_from_matrix(np.ascontiguousarray(g.adjacency.T))


def _order_transitive(adj: np.ndarray, vertices) -> tuple[int, ...]:
    # inside a transitive set the source beats everyone: sort by internal out-degree
    vs = list(vertices)
    sub = adj[np.ix_(vs, vs)]
    score = sub.sum(axis=1)
    return tuple(v for _, v in sorted(zip(-score, vs)))


def max_transitive(g: Digraph) -> HomogeneousWitness:
    """Largest induced transitive subtournament of any digraph (exact)."""
    _check_size(g)
    if g.n == 0:
        return HomogeneousWitness(WitnessKind.TRANSITIVE, ())
    out_rows, in_rows = _rows(g)
    mask, _ = K.max_transitive_mask(out_rows, in_rows, g.n)
    vs = K.mask_to_list(mask, g.n)
    return HomogeneousWitness(WitnessKind.TRANSITIVE, _order_transitive(g.adjacency, vs))


def trans_exact(t: Tournament) -> tuple[int, HomogeneousWitness]:
    """``trans(T)`` with a witness listing the stacked order (source first)."""
    if not isinstance(t, Tournament):
        t = Tournament(t.adjacency)
    w = max_transitive(t)
    return w.size, w


def max_complete(g: Digraph) -> HomogeneousWitness:
    _check_size(g)
    a = g.adjacency
    mutual = a & a.T
    mask, _ = K.max_clique_mask(K.rows_from_matrix(mutual), g.n)
    return HomogeneousWitness(WitnessKind.COMPLETE, tuple(K.mask_to_list(mask, g.n)))


def max_independent(g: Digraph) -> HomogeneousWitness:
    _check_size(g)
    a = g.adjacency
    free = ~(a | a.T)
    np.fill_diagonal(free, False)
    mask, _ = K.max_clique_mask(K.rows_from_matrix(free), g.n)
    return HomogeneousWitness(WitnessKind.INDEPENDENT, tuple(K.mask_to_list(mask, g.n)))


def _pick(witnesses) -> HomogeneousWitness:
    return min(witnesses, key=lambda w: (-w.size, KIND_PRIORITY[w.kind], w.vertices))


def hom_exact(g: Digraph) -> tuple[int, HomogeneousWitness]:
    """Largest set that is complete (all ordered pairs) or independent.

    An independent set wins a tie with a complete one.
    """
    if g.n == 0:
        return 0, HomogeneousWitness(WitnessKind.INDEPENDENT, ())
    comp, ind = max_complete(g), max_independent(g)
    w = comp if comp.size > ind.size else ind
    return w.size, w


def best_homogeneous(g: Digraph) -> HomogeneousWitness:
    """Largest Complete, Independent or Transitive witness.

    Equal sizes resolve Complete before Independent before Transitive.
    """
    if g.n == 0:
        return HomogeneousWitness(WitnessKind.INDEPENDENT, ())
    return _pick([max_complete(g), max_independent(g), max_transitive(g)])


def longest_monotone(seq) -> tuple[list[int], bool]:
    """Positions of a longest monotone subsequence and whether it increases.

    Patience sorting for both directions; increasing wins ties.
    """
    def lis(values):
        tails: list = []
        tail_pos: list[int] = []
        parent = [-1] * len(values)
        for i, x in enumerate(values):
            k = bisect.bisect_left(tails, x)
            if k == len(tails):
                tails.append(x)
                tail_pos.append(i)
            else:
                tails[k] = x
                tail_pos[k] = i
            parent[i] = tail_pos[k - 1] if k else -1
        out = []
        i = tail_pos[-1] if tail_pos else -1
        while i != -1:
            out.append(i)
            i = parent[i]
        return out[::-1]

    values = list(seq)
    inc = lis(values)
    dec = lis([-x for x in values])
    if len(dec) > len(inc):
        return dec, False
    return inc, True


def es_common_monotone(order2) -> list[int]:
    """Subsequence monotone in both orders, of length at least ``ceil(sqrt(m))``.

    ``order2[i]`` is the rank, in the second order, of the element at position
    ``i`` of the first; any distinct ranks work (0- or 1-based).
    """
    perm = list(order2)
    if len(set(perm)) != len(perm):
        raise ValueError("order2 must consist of distinct ranks")
    return longest_monotone(perm)[0]
