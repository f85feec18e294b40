"""Dense digraphs, tournaments and homogeneous-substructure witnesses."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_VERTICES = 64


class Digraph:
    """Irreflexive digraph stored as an ``n x n`` boolean adjacency matrix."""

    def __init__(self, adjacency):
        adj = np.array(adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adj.shape}")
        if adj.shape[0] and adj.diagonal().any():
            raise ValueError("adjacency must be irreflexive")
        adj.setflags(write=False)
        self.adjacency = adj

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            adj[i, j] = True
        return cls(adj)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i, j])

    def edges(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.adjacency))]

    def induced(self, vertices: Sequence[int]) -> "Digraph":
        idx = np.asarray(vertices, dtype=np.intp)
        return type(self)(self.adjacency[np.ix_(idx, idx)])

    def is_tournament(self) -> bool:
        a = self.adjacency
        off = ~np.eye(self.n, dtype=bool)
        return bool(np.all((a ^ a.T)[off]))

    def __eq__(self, other) -> bool:
        return isinstance(other, Digraph) and np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash(self.adjacency.tobytes())

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, edges={int(self.adjacency.sum())})"


class Tournament(Digraph):
    def __init__(self, adjacency):
        super().__init__(adjacency)
        if not self.is_tournament():
            raise ValueError("not a tournament: need exactly one arc per pair")

    @classmethod
    def transitive(cls, n: int) -> "Tournament":
        return cls(np.triu(np.ones((n, n), dtype=bool), 1))

    @classmethod
    def circulant(cls, n: int, connection: Iterable[int]) -> "Tournament":
        """``i -> j`` iff ``(j - i) mod n`` lies in ``connection``."""
        conn = {c % n for c in connection}
        adj = np.zeros((n, n), dtype=bool)
        for i in range(n):
            for c in conn:
                adj[i, (i + c) % n] = True
        return cls(adj)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Tournament":
        upper = np.triu(rng.random((n, n)) < 0.5, 1)
        lower = np.triu(~upper, 1).T
        return cls(upper | lower)

    def scores(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)


def lexicographic_product(outer: Digraph, inner: Digraph) -> Digraph:
    """Replace every vertex of ``outer`` by a copy of ``inner``.

    Vertex ``(p, q)`` gets index ``p * inner.n + q``.
    """
    m = inner.n
    big = np.kron(outer.adjacency, np.ones((m, m), dtype=bool))
    big |= np.kron(np.eye(outer.n, dtype=bool), inner.adjacency)
    if isinstance(outer, Tournament) and isinstance(inner, Tournament):
        return Tournament(big)
    return Digraph(big)


def lexicographic_power(base: Digraph, levels: int) -> Digraph:
    """The ``(levels + 1)``-fold lexicographic power of ``base``."""
    out = base
    for _ in range(levels):
        out = lexicographic_product(out, base)
    return out


class WitnessKind(enum.Enum):
    COMPLETE = "Complete"
    INDEPENDENT = "Independent"
    TRANSITIVE = "Transitive"


# tie-break priority when sizes are equal
KIND_PRIORITY = {WitnessKind.COMPLETE: 0, WitnessKind.INDEPENDENT: 1, WitnessKind.TRANSITIVE: 2}


@dataclass(frozen=True)
class HomogeneousWitness:
    kind: WitnessKind
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.vertices)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "vertices": list(self.vertices)}

    @classmethod
    def from_json(cls, data: dict) -> "HomogeneousWitness":
        return cls(WitnessKind(data["kind"]), tuple(data["vertices"]))


def verify_witness(g: Digraph, w: HomogeneousWitness) -> bool:
    """Check the claimed structure pair by pair on the induced subgraph.

    Transitive witnesses must list their vertices in order: every earlier
    vertex has an arc to every later one and never the reverse.
    """
    vs = w.vertices
    if len(set(vs)) != len(vs) or any(v < 0 or v >= g.n for v in vs):
        return False
    a = g.adjacency
    for p in range(len(vs)):
        for q in range(len(vs)):
            if p == q:
                continue
            e = bool(a[vs[p], vs[q]])
            if w.kind is WitnessKind.COMPLETE and not e:
                return False
            if w.kind is WitnessKind.INDEPENDENT and e:
                return False
            if w.kind is WitnessKind.TRANSITIVE and e != (p < q):
                return False
    return True


def format_digraph(g: Digraph) -> str:
    rows = ["".join("1" if x else "0" for x in row) for row in g.adjacency]
    return "\n".join([str(g.n), *rows]) + "\n"


def parse_digraph(text: str) -> Digraph:
    """Inverse of :func:`format_digraph`; returns a Tournament when it is one."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty digraph text")
    n = int(lines[0])
    rows = lines[1:]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, got {len(rows)}")
    adj = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(rows):
        if len(row) != n or set(row) - {"0", "1"}:
            raise ValueError(f"row {i} must be {n} characters of 0/1")
        adj[i] = [ch == "1" for ch in row]
    g = Digraph(adj)
    return Tournament(adj) if g.is_tournament() else g
