import itertools
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from skewlab.tourney import (
    Digraph,
    HomogeneousWitness,
    TooLarge,
    Tournament,
    WitnessKind,
    best_homogeneous,
    es_common_monotone,
    format_digraph,
    hom_exact,
    lexicographic_power,
    longest_monotone,
    parse_digraph,
    trans_exact,
    verify_witness,
)


def is_acyclic_tournament_subset(adj, subset) -> bool:
    # no directed triangle inside the subset
    for a, b, c in itertools.permutations(subset, 3):
        if adj[a, b] and adj[b, c] and adj[c, a]:
            return False
    return True


def brute_trans(t: Tournament) -> int:
    n = t.n
    for k in range(n, 0, -1):
        for subset in itertools.combinations(range(n), k):
            if is_acyclic_tournament_subset(t.adjacency, subset):
                return k
    return 0


def brute_hom(g: Digraph) -> int:
    a = g.adjacency
    best = 0
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if mask >> v & 1]
        pairs = [(u, v) for u in vs for v in vs if u != v]
        if all(a[u, v] for u, v in pairs) or not any(a[u, v] for u, v in pairs):
            best = max(best, len(vs))
    return best


def brute_best(g: Digraph) -> int:
    a = g.adjacency
    best = brute_hom(g)
    for mask in range(1 << g.n):
        vs = [v for v in range(g.n) if mask >> v & 1]
        if len(vs) <= best:
            continue
        if all(a[u, v] != a[v, u] for u, v in itertools.combinations(vs, 2)) and is_acyclic_tournament_subset(a, vs):
            best = len(vs)
    return best


def test_trans_examples():
    assert trans_exact(Tournament.circulant(3, [1]))[0] == 2
    assert trans_exact(Tournament.transitive(6))[0] == 6
    paley = Tournament.circulant(7, [1, 2, 4])
    assert brute_trans(paley) == 3
    size, w = trans_exact(paley)
    assert size == 3 and verify_witness(paley, w)


def test_trans_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(150):
        n = int(rng.integers(1, 10))
        t = Tournament.random(n, rng)
        size, w = trans_exact(t)
        assert size == brute_trans(t)
        assert w.kind is WitnessKind.TRANSITIVE and verify_witness(t, w)


def test_trans_ramsey_floor():
    rng = np.random.default_rng(3)
    for n in (5, 10, 20, 40, 64):
        t = Tournament.random(n, rng)
        assert trans_exact(t)[0] >= math.floor(math.log2(n)) + 1


@pytest.mark.parametrize("base, levels, expected", [(3, 1, 4), (3, 2, 8), (7, 1, 9)])
def test_trans_of_lexicographic_powers(base, levels, expected):
    conn = [1] if base == 3 else [1, 2, 4]
    t = lexicographic_power(Tournament.circulant(base, conn), levels)
    size, w = trans_exact(t)
    assert size == expected and verify_witness(t, w)


def test_too_large():
    with pytest.raises(TooLarge):
        trans_exact(Tournament.transitive(65))


def test_hom_examples():
    complete = Digraph(~np.eye(5, dtype=bool))
    size, w = hom_exact(complete)
    assert size == 5 and w.kind is WitnessKind.COMPLETE
    size, w = hom_exact(Digraph(np.zeros((5, 5), dtype=bool)))
    assert size == 5 and w.kind is WitnessKind.INDEPENDENT
    c5 = Digraph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)] + [((i + 1) % 5, i) for i in range(5)])
    assert brute_hom(c5) == 2
    size, w = hom_exact(c5)
    assert size == 2 and w.kind is WitnessKind.INDEPENDENT and verify_witness(c5, w)


def test_hom_matches_brute_force():
    rng = np.random.default_rng(8)
    for _ in range(60):
        n = int(rng.integers(1, 9))
        adj = rng.random((n, n)) < rng.uniform(0.2, 0.8)
        np.fill_diagonal(adj, False)
        g = Digraph(adj)
        size, w = hom_exact(g)
        assert size == brute_hom(g) and verify_witness(g, w)


def test_best_homogeneous_examples():
    w = best_homogeneous(Digraph(np.zeros((4, 4), dtype=bool)))
    assert w.kind is WitnessKind.INDEPENDENT and w.size == 4
    g = Digraph.from_edges(3, [(1, 2), (2, 1)])
    assert brute_best(g) == 2
    w = best_homogeneous(g)
    assert w.size == 2 and w.kind is WitnessKind.COMPLETE and verify_witness(g, w)


def test_best_homogeneous_agrees_with_trans_on_tournaments():
    rng = np.random.default_rng(21)
    for _ in range(100):
        t = Tournament.random(8, rng)
        w = best_homogeneous(t)
        assert w.size == trans_exact(t)[0]
        assert verify_witness(t, w)


def test_best_homogeneous_matches_brute_force_on_digraphs():
    rng = np.random.default_rng(4)
    for _ in range(40):
        n = int(rng.integers(2, 9))
        adj = rng.random((n, n)) < 0.45
        np.fill_diagonal(adj, False)
        g = Digraph(adj)
        w = best_homogeneous(g)
        assert w.size == brute_best(g) and verify_witness(g, w)


def test_verifier_rejects_bad_witnesses():
    t = Tournament.circulant(3, [1])
    assert not verify_witness(t, HomogeneousWitness(WitnessKind.TRANSITIVE, (0, 1, 2)))
    assert not verify_witness(t, HomogeneousWitness(WitnessKind.TRANSITIVE, (1, 0)))
    assert verify_witness(t, HomogeneousWitness(WitnessKind.TRANSITIVE, (0, 1)))
    assert not verify_witness(t, HomogeneousWitness(WitnessKind.COMPLETE, (0, 1)))
    assert not verify_witness(t, HomogeneousWitness(WitnessKind.INDEPENDENT, (0, 0)))


def brute_longest_monotone(perm) -> int:
    best = 0
    for k in range(len(perm), 0, -1):
        for idx in itertools.combinations(range(len(perm)), k):
            vals = [perm[i] for i in idx]
            if vals == sorted(vals) or vals == sorted(vals, reverse=True):
                return k
    return best


def test_es_examples():
    assert es_common_monotone(list(range(9))) == list(range(9))
    assert es_common_monotone(list(range(8, -1, -1))) == list(range(9))
    idx = es_common_monotone([2, 4, 1, 3])
    assert len(idx) == 2 == brute_longest_monotone([2, 4, 1, 3])


def test_es_exhaustive_small():
    for m in range(1, 8):
        for perm in itertools.permutations(range(m)):
            idx, inc = longest_monotone(perm)
            vals = [perm[i] for i in idx]
            assert idx == sorted(idx)
            assert vals == (sorted(vals) if inc else sorted(vals, reverse=True))
            assert len(idx) >= math.ceil(math.sqrt(m))
            if m <= 6:
                assert len(idx) == brute_longest_monotone(perm)


def test_es_random_larger():
    rng = np.random.default_rng(0)
    for m in range(8, 13):
        for _ in range(200):
            perm = list(rng.permutation(m))
            assert len(es_common_monotone(perm)) >= math.ceil(math.sqrt(m))


def test_digraph_text_round_trip():
    t = Tournament.circulant(7, [1, 2, 4])
    text = format_digraph(t)
    assert text.splitlines()[0] == "7" and text.splitlines()[1] == "0110100"
    back = parse_digraph(text)
    assert isinstance(back, Tournament) and back == t
    g = Digraph.from_edges(3, [(1, 2), (2, 1)])
    assert parse_digraph(format_digraph(g)) == g


def test_pure_python_fallback_agrees():
    """The same kernels run uncompiled under SKEWLAB_NO_JIT=1."""
    script = (
        "import json, numpy as np\n"
        "from skewlab._accel import JIT_ENABLED\n"
        "from skewlab.tourney import Tournament, Digraph, trans_exact, hom_exact\n"
        "rng = np.random.default_rng(2)\n"
        "ts = [Tournament.random(int(n), rng) for n in rng.integers(1, 12, size=15)]\n"
        "out = [trans_exact(t)[1].vertices for t in ts]\n"
        "adj = rng.random((9, 9)) < 0.5; np.fill_diagonal(adj, False)\n"
        "out.append(hom_exact(Digraph(adj))[1].vertices)\n"
        "print(json.dumps({'jit': JIT_ENABLED, 'out': out}))\n"
    )
    env = dict(os.environ, SKEWLAB_NO_JIT="1")
    res = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True, check=True)
    data = json.loads(res.stdout)
    assert data["jit"] is False
    rng = np.random.default_rng(2)
    ts = [Tournament.random(int(n), rng) for n in rng.integers(1, 12, size=15)]
    expected = [list(trans_exact(t)[1].vertices) for t in ts]
    adj = rng.random((9, 9)) < 0.5
    np.fill_diagonal(adj, False)
    expected.append(list(hom_exact(Digraph(adj))[1].vertices))
    assert data["out"] == expected
