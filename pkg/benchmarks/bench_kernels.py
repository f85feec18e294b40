"""Compiled vs. plain-Python timings for the hot kernels.

Runs the same workloads twice in fresh interpreters, once as usual and once
with ``SKEWLAB_NO_JIT=1``, checks that both produce identical answers and
prints the speedup per workload.  JIT timings exclude the first (compiling) call.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _workloads():
    import numpy as np

    from skewlab import certificates
    from skewlab.extremal import BundleParams, bundle
    from skewlab.lines3d import crossing_tournament
    from skewlab.tourney import Digraph, Tournament, max_complete, trans_exact
    from skewlab.tourney import _kernels as K

    rng = np.random.default_rng(0)
    randoms = [Tournament.random(18, rng) for _ in range(5)]
    t27 = crossing_tournament(bundle(certificates.three_cycle(), BundleParams(levels=2)))
    sym = np.triu(rng.random((40, 40)) < 0.5, 1)
    graph = Digraph(sym | sym.T)
    quad = Tournament.random(48, rng).adjacency.astype(np.int64)
    perm = rng.permutation(600)
    order = (perm[:, None] < perm[None, :]) & (np.arange(600)[:, None] < np.arange(600)[None, :])
    topo = np.argsort(order.sum(axis=0), kind="stable").astype(np.int64)

    return {
        "trans, 5 random tournaments n=18": lambda: [trans_exact(t)[0] for t in randoms],
        "trans, 27-line bundle": lambda: trans_exact(t27)[0],
        "max clique, G(40, 1/2)": lambda: max_complete(graph).size,
        "transitive 4-subsets, n=48": lambda: int(K.count_transitive_quads(quad)),
        "chain heights, 600-element order": lambda: int(K.longest_chain_heights(order, topo)[0].max()),
    }


def _worker(repeat: int) -> None:
    from skewlab._accel import JIT_ENABLED

    out = {"jit": JIT_ENABLED, "results": {}}
    for name, fn in _workloads().items():
        value = fn()  # warm-up (compiles under the JIT)
        best = float("inf")
        for _ in range(repeat):
            start = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - start)
        out["results"][name] = {"seconds": best, "value": value}
    print(json.dumps(out))


def _spawn(no_jit: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("SKEWLAB_NO_JIT", None)
    if no_jit:
        env["SKEWLAB_NO_JIT"] = "1"
    proc = subprocess.run(
        [sys.executable, __file__, "--worker", "--repeat", str(repeat)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        _worker(args.repeat)
        return 0
    jit, pure = _spawn(False, args.repeat), _spawn(True, args.repeat)
    if not jit["jit"]:
        print("numba not available: both runs use the plain-Python path")
    width = max(len(k) for k in jit["results"])
    print(f"{'workload':<{width}}  {'jit [s]':>10}  {'python [s]':>10}  {'speedup':>8}")
    mismatch = False
    for name, r in jit["results"].items():
        p = pure["results"][name]
        mismatch |= r["value"] != p["value"]
        flag = "" if r["value"] == p["value"] else "  RESULTS DIFFER"
        print(f"{name:<{width}}  {r['seconds']:>10.4f}  {p['seconds']:>10.4f}  {p['seconds'] / r['seconds']:>7.1f}x{flag}")
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
