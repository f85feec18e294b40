"""Constructions and counting bounds for stacked subsets of line configurations.

* :func:`bundle` replaces every line by a tiny copy of a base configuration,
  realizing lexicographic powers of its crossing tournament.
* :func:`search_low_trans` hunts for small configurations with few stacked lines.
* :func:`mt_bound` compares the sign-pattern count for crossing tournaments
  with the number of all tournaments.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from ._accel import worker_count
from .lines3d import Configuration, Line4, NotSkew, crossing_tournament, first_non_skew
from .tourney import lexicographic_power, trans_exact
from .tourney import _kernels as K


class BundleVerificationFailed(RuntimeError):
    pass


class InfeasibleBudget(RuntimeError):
    def __init__(self, report: "SearchReport"):
        super().__init__(
            f"no configuration of {report.target_n} lines with trans <= {report.target_trans} "
            f"after {report.seeds_tried} restarts (best {report.best_trans})"
        )
        self.report = report


@dataclass(frozen=True)
class BundleParams:
    shrink: Fraction = Fraction(1, 64)
    levels: int = 1

    def __post_init__(self):
        object.__setattr__(self, "shrink", Fraction(self.shrink))
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie strictly between 0 and 1")
        if self.levels < 0:
            raise ValueError("levels must be >= 0")


def _shrunk_copies(config: Configuration, base: Configuration, center, scale) -> list[Line4]:
    offsets = [[(v - c) * scale for v, c in zip(b.coords(), center)] for b in base.lines]
    return [
        Line4(*(v + o for v, o in zip(line.coords(), off)))
        for line in config.lines
        for off in offsets
    ]


def bundle(base: Configuration, params: BundleParams, max_retries: int = 8) -> Configuration:
    """Configuration of ``len(base) ** (levels + 1)`` lines.

    At level ``i`` each line is replaced by ``base`` contracted by
    ``shrink ** i`` about the base centroid.  The result is accepted only if
    its crossing tournament is exactly the lexicographic power of the base
    tournament; otherwise the shrink factor is halved and the build retried.
    """
    base_t = crossing_tournament(base)
    if params.levels == 0:
        return base
    m = len(base)
    center = [sum(col, Fraction(0)) / m for col in zip(*(b.coords() for b in base.lines))]
    expected = lexicographic_power(base_t, params.levels)
    shrink = params.shrink
    for _ in range(max_retries + 1):
        lines = list(base.lines)
        for level in range(1, params.levels + 1):
            lines = _shrunk_copies(Configuration(lines), base, center, shrink**level)
        out = Configuration(lines, f"{base.label or 'base'}^{params.levels + 1}")
        try:
            if crossing_tournament(out) == expected:
                return out
        except NotSkew:
            pass
        shrink /= 2
    raise BundleVerificationFailed(
        f"lexicographic structure not reproduced after {max_retries} halvings of shrink"
    )


def lex_power_trans(base_trans: int, levels: int) -> int:
    """Predicted trans of a bundled configuration: ``base_trans ** (levels + 1)``."""
    if base_trans < 1 or levels < 0:
        raise ValueError("need base_trans >= 1 and levels >= 0")
    return base_trans ** (levels + 1)


def line_exponent(n_lines: int, trans: int) -> float:
    """Exponent ``log(trans) / log(n_lines)`` certified by a bundled family."""
    return math.log(trans) / math.log(n_lines)


# --- sign-pattern counting -------------------------------------------------


@dataclass(frozen=True)
class MTBoundReport:
    n: int
    log2_mt_bound: mpmath.mpf
    log2_total: Fraction
    realizable_fraction_log2: mpmath.mpf
    precision_bits: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "log2_mt_bound": mpmath.nstr(self.log2_mt_bound, 20),
            "log2_total": str(self.log2_total),
            "realizable_fraction_log2": mpmath.nstr(self.realizable_fraction_log2, 20),
            "precision_bits": self.precision_bits,
        }


def milnor_thom_log2(d: int, m: int, k: int, precision_bits: int = 64) -> mpmath.mpf:
    """``log2`` of ``(4 e d m / k) ** k``: sign patterns of m degree-d polynomials in k variables."""
    with mpmath.workprec(precision_bits):
        return k * mpmath.log(4 * mpmath.e * d * m / k, 2)


def mt_bound(n: int, precision_bits: int = 64) -> MTBoundReport:
    """Realizable crossing tournaments on ``n`` lines vs. all ``2**C(n,2)`` tournaments."""
    if n < 2:
        raise ValueError("n must be >= 2")
    with mpmath.workprec(precision_bits):
        # d = 3, m = C(n, 2), k = 4n collapses to (3e(n-1)/2)^(4n)
        log2_bound = 4 * n * mpmath.log(3 * mpmath.e * (n - 1) / 2, 2)
        total = Fraction(n * (n - 1), 2)
        diff = log2_bound - mpmath.mpf(total.numerator) / total.denominator
    return MTBoundReport(n, log2_bound, total, diff, precision_bits)


def mt_threshold(precision_bits: int = 64, n_max: int = 10_000) -> int:
    """Smallest ``n`` for which the sign-pattern bound is below the tournament count."""
    for n in range(2, n_max + 1):
        if mt_bound(n, precision_bits).realizable_fraction_log2 < 0:
            return n
    raise RuntimeError("no threshold below n_max")


# --- randomized search -----------------------------------------------------


@dataclass
class SearchReport:
    target_n: int
    target_trans: int
    best_config: Configuration
    best_trans: int
    seeds_tried: int
    elapsed: float
    base_seed: int = 0
    best_restart: int = -1
    trace: list = field(default_factory=list, repr=False)

    @property
    def success(self) -> bool:
        return self.best_trans <= self.target_trans


def _int_tournament(coords: np.ndarray) -> np.ndarray | None:
    """Crossing tournament of integer-coordinate lines, or None if some pair is not skew."""
    n = coords.shape[0]
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        ai, bi, ci, di = (int(v) for v in coords[i])
        for j in range(i + 1, n):
            a, b, c, d = ai - int(coords[j, 0]), bi - int(coords[j, 1]), ci - int(coords[j, 2]), di - int(coords[j, 3])
            den = a - c
            num = a * d - b * c
            if den == 0 or num == 0:
                return None
            if den * num > 0:
                adj[i, j] = True
            else:
                adj[j, i] = True
    return adj


def _score(adj: np.ndarray) -> tuple[int, int]:
    out_rows = K.rows_from_matrix(adj)
    in_rows = K.rows_from_matrix(np.ascontiguousarray(adj.T))
    mask, _ = K.max_transitive_mask(out_rows, in_rows, adj.shape[0])
    return K.popcount(mask), int(K.count_transitive_quads(adj.astype(np.int64)))


def restart_seed(base_seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base_seed & 0xFFFFFFFF, index])


def _run_restart(args) -> tuple[int, int, int, list]:
    """One annealing run; returns (restart index, trans, quads, coords)."""
    n, target, base_seed, index, steps, grid = args
    rng = np.random.default_rng(restart_seed(base_seed, index))
    while True:
        coords = rng.integers(-grid, grid + 1, size=(n, 4))
        adj = _int_tournament(coords)
        if adj is not None:
            break
    score = _score(adj)
    best = (score, coords.copy())
    for step in range(steps):
        if best[0][0] <= target:
            break
        temp = 1.5 * (1 - step / steps) + 0.05
        trial = coords.copy()
        i = rng.integers(n)
        k = rng.integers(4)
        delta = int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
        trial[i, k] = np.clip(trial[i, k] + delta, -grid, grid)
        adj = _int_tournament(trial)
        if adj is None:
            continue
        new = _score(adj)
        # never accept a larger stacked subset; anneal on the transitive-quad count
        if new[0] > score[0]:
            continue
        if new[0] < score[0] or new[1] <= score[1] or rng.random() < math.exp((score[1] - new[1]) / temp):
            coords, score = trial, new
            if score < best[0]:
                best = (score, coords.copy())
    (tr, quads), c = best
    return index, tr, quads, c.tolist()


def search_low_trans(
    n: int,
    target: int,
    budget: int = 64,
    base_seed: int = 0,
    steps: int = 4000,
    grid: int = 24,
    workers: int | None = None,
    strict: bool = False,
) -> SearchReport:
    """Randomized restarts hunting for ``n`` skew lines with trans <= ``target``.

    Restart ``r`` is seeded from ``(base_seed, r)``.  The reported winner is the
    lowest-index successful restart (or the best one when the budget runs out),
    so the outcome does not depend on how restarts are spread over workers.
    The winner is re-verified in exact rational arithmetic.
    """
    if not 1 <= n <= 12:
        raise ValueError("search supports 1 <= n <= 12")
    if target < 1:
        raise ValueError("target must be >= 1")
    workers = worker_count() if workers is None else max(1, workers)
    start = time.perf_counter()
    results: list[tuple[int, int, int, list]] = []
    winner = None
    batch = max(1, workers)
    for lo in range(0, budget, batch):
        jobs = [(n, target, base_seed, r, steps, grid) for r in range(lo, min(budget, lo + batch))]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                chunk = list(pool.map(_run_restart, jobs))
        else:
            chunk = [_run_restart(j) for j in jobs]
        results.extend(chunk)
        hits = [r for r in chunk if r[1] <= target]
        if hits:
            winner = min(hits, key=lambda r: r[0])
            break
    if winner is None:
        winner = min(results, key=lambda r: (r[1], r[2], r[0]))
        tried = budget
    else:
        tried = winner[0] + 1
    index, _, _, coords = winner
    config = Configuration.from_coords(coords, f"search-n{n}-seed{base_seed}-r{index}")
    # independent exact re-verification
    if first_non_skew(config) is not None:
        raise AssertionError("search produced a non-skew configuration")
    best_trans = trans_exact(crossing_tournament(config))[0]
    report = SearchReport(
        n, target, config, best_trans, tried, time.perf_counter() - start, base_seed, index
    )
    if strict and not report.success:
        raise InfeasibleBudget(report)
    return report


__all__ = [
    "BundleParams",
    "BundleVerificationFailed",
    "InfeasibleBudget",
    "MTBoundReport",
    "SearchReport",
    "bundle",
    "lex_power_trans",
    "line_exponent",
    "milnor_thom_log2",
    "mt_bound",
    "mt_threshold",
    "search_low_trans",
]
