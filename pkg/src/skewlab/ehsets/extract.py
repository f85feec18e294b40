"""Constructive extraction of complete, independent or transitive subsets of difference graphs.

``extract_expr`` walks the expression tree: it extracts on the first operand,
restricts the points to the witness, extracts on the second operand and
combines the two witnesses; two transitive witnesses are merged through a
common monotone subsequence.  Leaves are semigroups (chains or antichains of
the induced partial order) or bounded sets (cube/coset pigeonhole).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
import sympy

from ..tourney import HomogeneousWitness, WitnessKind, longest_monotone, verify_witness
from ..tourney._kernels import longest_chain_heights
from .sets import (
    Annulus,
    Ball,
    Complement,
    Cone,
    Custom,
    Diffs,
    Empty,
    Halfplane,
    Intersection,
    OracleUndefined,
    Orthant,
    PointSet,
    PolySign,
    RayFrom,
    RayRestricted,
    SetExpr,
    SetMinus,
    SymmetricDifference,
    Union,
    gamma_graph,
)

C, I, T = WitnessKind.COMPLETE, WitnessKind.INDEPENDENT, WitnessKind.TRANSITIVE


class NotASemigroup(ValueError):
    def __init__(self, triple: tuple[int, int, int]):
        i, j, k = triple
        super().__init__(f"p{j}-p{i} and p{k}-p{j} are in the set but p{k}-p{i} is not")
        self.triple = triple


class BadRadii(ValueError):
    pass


class NoStrategy(ValueError):
    def __init__(self, leaf: SetExpr):
        super().__init__(f"no extraction strategy for {leaf.describe()}")
        self.leaf = leaf


@dataclass(frozen=True)
class Extraction:
    witness: HomogeneousWitness
    epsilon: Fraction
    guaranteed: int
    n: int

    def to_json(self) -> dict:
        return {
            "witness": self.witness.to_json(),
            "epsilon": str(self.epsilon),
            "guaranteed": self.guaranteed,
            "n": self.n,
        }


def ceil_sqrt(m: int) -> int:
    if m <= 0:
        return 0
    r = math.isqrt(m)
    return r if r * r == m else r + 1


# --- leaves that are semigroups, or parts of one ---------------------------------------------


class _Part(SetExpr):
    """``base`` intersected with a closed orthant, treated as a single semigroup."""

    def __init__(self, base: SetExpr, orthant: Orthant):
        self.base, self.orthant = base, orthant
        self.dimension = base.dimension

    def members(self, diffs, mask=None):
        return self.base.members(diffs, mask) & self.orthant.members(diffs, mask)

    def describe(self):
        return f"{self.base.describe()}&orthant{self.orthant.signs}"


def _is_semigroup(e: SetExpr) -> bool:
    if isinstance(e, (Halfplane, Orthant, Cone, RayFrom, _Part)):
        return True
    if isinstance(e, RayRestricted):
        return isinstance(e.inner, RayFrom)
    return isinstance(e, Custom) and e.role == "semigroup"


def _is_bounded(e: SetExpr) -> bool:
    return isinstance(e, Ball) or (isinstance(e, Custom) and e.role == "bounded")


# --- lowering to leaves with strategies ----------------------------------------------------------


def _union(parts: list[SetExpr], dim: int) -> SetExpr:
    if not parts:
        return Empty(dim)
    out = parts[0]
    for p in parts[1:]:
        out = Union(out, p)
    return out


def _realized_values(diffs: Diffs, mask: np.ndarray | None) -> list[Fraction]:
    off = ~np.eye(diffs.n, dtype=bool)
    if mask is not None:
        off &= mask
    vals = {int(v) for v in diffs.delta[:, :, 0][off]}
    return sorted(Fraction(v, diffs.scale) for v in vals)


def _interval_expr(f, diffs: Diffs, mask: np.ndarray | None) -> SetExpr:
    """``{x in R : f(x) > 0}`` as unions/differences of half-lines.

    Roots are isolated exactly and refined until no realized difference lies
    in an isolating interval, so a rational threshold inside each interval
    splits the realized differences exactly as the root does.
    """
    x = sympy.Symbol("x")
    p = sympy.Poly(f.to_sympy().subs(sympy.Symbol("y"), 0), x, domain="QQ")
    values = _realized_values(diffs, mask)
    fs = sympy.Rational

    def undefined(root: Fraction):
        target = root * diffs.scale
        i, j = np.argwhere(diffs.delta[:, :, 0] * target.denominator == target.numerator)[0]
        return OracleUndefined((int(i), int(j)), f"root {root} of {f}")

    def hits(a, b):
        lo = np.searchsorted(values, a, side="left")
        return lo < len(values) and values[lo] <= b

    taus, boxes = [], []
    if p.degree() >= 1:
        for (a, b), _ in p.intervals():
            a, b = Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))
            if a == b and a in set(values):
                raise undefined(a)
            while a != b and hits(a, b):
                eps = fs((b - a).numerator, (b - a).denominator) / 4
                ra, rb = p.refine_root(fs(a.numerator, a.denominator), fs(b.numerator, b.denominator), eps=eps)
                a, b = Fraction(int(ra.p), int(ra.q)), Fraction(int(rb.p), int(rb.q))
                if a == b and a in set(values):
                    raise undefined(a)
            taus.append((a + b) / 2)
            boxes.append((a, b))

    def sign_at(v: Fraction) -> int:
        val = p.eval(fs(v.numerator, v.denominator))
        return int(sympy.sign(val))

    # sample strictly between consecutive isolating boxes
    samples = []
    edges = [None] + boxes + [None]
    for left, right in zip(edges, edges[1:]):
        if left is None and right is None:
            samples.append(Fraction(0) if p.degree() < 1 else Fraction(1))
        elif left is None:
            samples.append(right[0] - 1)
        elif right is None:
            samples.append(left[1] + 1)
        else:
            samples.append((left[1] + right[0]) / 2)
    cuts = [-math.inf] + taus + [math.inf]
    pieces = []
    for lo, hi, smp in zip(cuts, cuts[1:], samples):
        if sign_at(smp) <= 0:
            continue
        # every piece must stay on one side of the origin
        pieces.extend([(lo, Fraction(0)), (Fraction(0), hi)] if lo < 0 < hi else [(lo, hi)])
    exprs = []
    for a, b in pieces:
        if a >= 0:
            head = RayFrom(Fraction(a), 1, True)
            exprs.append(head if b == math.inf else SetMinus(head, RayFrom(Fraction(b), 1, False)))
        else:
            head = RayFrom(-Fraction(b), -1, True)
            exprs.append(head if a == -math.inf else SetMinus(head, RayFrom(-Fraction(a), -1, False)))
    return _union(exprs, 1)


def lower(e: SetExpr, diffs: Diffs, mask: np.ndarray | None = None) -> SetExpr:
    """Rewrite ``e`` into complements, intersections and symmetric differences of strategy leaves."""
    if isinstance(e, Union):
        a, b = (lower(x, diffs, mask) for x in e.args)
        return Complement(Intersection(Complement(a), Complement(b)))
    if isinstance(e, SetMinus):
        a, b = (lower(x, diffs, mask) for x in e.args)
        return Intersection(a, Complement(b))
    if isinstance(e, (Intersection, SymmetricDifference, Complement)):
        return type(e)(*(lower(x, diffs, mask) for x in e.args))
    if isinstance(e, Annulus):
        # B = U \ A with U the outer closed ball and A the open inner ball
        return Intersection(Ball(e.outer, e.dimension), Complement(Ball(e.inner, e.dimension, closed=False)))
    if isinstance(e, Custom) and e.role == "bounded" and not e.zero_interior:
        R = e.outer_radius
        inner = Custom(
            lambda x, _b=e.oracle, _R=R: sum(c * c for c in x) <= _R * _R and not _b(x),
            e.dimension, "bounded", r=e.inner_radius, R=R, zero_interior=True, name=f"ball-minus-{e.name}",
        )
        return Intersection(Ball(R, e.dimension), Complement(inner))
    if isinstance(e, PolySign):
        if e.dimension == 1:
            return lower(_interval_expr(e.poly, diffs, mask), diffs, mask)
        terms = e.poly.terms
        if set(terms) <= {(1, 0), (0, 1)}:
            return Halfplane((e.poly.coeff(1, 0), e.poly.coeff(0, 1)))
        raise NoStrategy(e)
    if isinstance(e, RayRestricted):
        par, line = e.line_coordinates(diffs)
        m = par if mask is None else (par & mask)
        return _push_ray(e.direction, lower(e.inner, line, m))
    return e


def _push_ray(v, e: SetExpr) -> SetExpr:
    d = len(v)
    if isinstance(e, Empty):
        return Empty(d)
    if isinstance(e, RayFrom):
        return RayRestricted(v, e)
    if isinstance(e, Complement):
        # the punctured line through the origin, as a union of two half-lines
        line = Complement(
            Intersection(Complement(RayRestricted(v, RayFrom(0, 1))), Complement(RayRestricted(v, RayFrom(0, -1))))
        )
        return Intersection(line, Complement(_push_ray(v, e.args[0])))
    if isinstance(e, (Intersection, SymmetricDifference)):
        return type(e)(*(_push_ray(v, x) for x in e.args))
    raise NoStrategy(e)


# --- the two leaf extractions ----------------------------------------------------------------------


class _Ctx:
    def __init__(self, points: PointSet):
        self.points = points
        self.diffs = Diffs.of(points)
        self._cache: dict[int, np.ndarray] = {}

    def matrix(self, e: SetExpr) -> np.ndarray:
        key = id(e)
        if key not in self._cache:
            self._cache[key] = e.members(self.diffs)
        return self._cache[key]


def _closure_violation(adj: np.ndarray) -> tuple[int, int, int] | None:
    a = adj.astype(np.int64)
    two = (a @ a) > 0
    bad = two & ~adj
    np.fill_diagonal(bad, False)
    if not bad.any():
        return None
    i, k = (int(x) for x in np.argwhere(bad)[0])
    j = int(np.nonzero(adj[i] & adj[:, k])[0][0])
    return i, j, k


def _chain_or_antichain(adj: np.ndarray) -> tuple[WitnessKind, list[int]]:
    """Longest chain of the strict order ``adj`` or, if shorter than ceil(sqrt(m)), the biggest height level."""
    m = adj.shape[0]
    if m == 0:
        return I, []
    topo = np.argsort(adj.sum(axis=0), kind="stable").astype(np.int64)
    height, prev = longest_chain_heights(np.ascontiguousarray(adj), topo)
    top = int(np.argmax(height))
    if height[top] >= ceil_sqrt(m):
        chain = []
        v = top
        while v != -1:
            chain.append(v)
            v = int(prev[v])
        return T, chain[::-1]
    levels = np.bincount(height)
    best = int(np.argmax(levels))
    return I, [int(v) for v in np.nonzero(height == best)[0]]


def _semigroup(e: SetExpr, idx: list[int], ctx: _Ctx, check: bool = True):
    full = ctx.matrix(e)
    adj = full[np.ix_(idx, idx)]
    if check and not (isinstance(e, Custom) and e.closure == "trusted"):
        bad = _closure_violation(adj)
        if bad is not None:
            raise NotASemigroup(tuple(idx[k] for k in bad))
    if (adj & adj.T).any():
        # a closed orthant meets its negative only at 0, so parts never get here
        d = e.dimension
        parts = [_Part(e, Orthant(tuple(1 if (s >> k) & 1 == 0 else -1 for k in range(d)))) for s in range(2**d)]
        return _extract(lower(_union(parts, d), ctx.diffs), idx, ctx)
    kind, local = _chain_or_antichain(adj)
    return (kind, [idx[k] for k in local]), Fraction(1, 2), ceil_sqrt


def _bounded(e: SetExpr, idx: list[int], ctx: _Ctx):
    r, R = Fraction(e.inner_radius), Fraction(e.outer_radius)
    if not 0 < r <= R:
        raise BadRadii(f"need 0 < r <= R, got r={r}, R={R}")
    d = e.dimension
    pts = ctx.points.points
    adj = ctx.matrix(e)[np.ix_(idx, idx)]
    sub = ctx.diffs.delta[np.ix_(idx, idx)]
    sq = np.sum(sub * sub, axis=2)
    sc2 = ctx.diffs.scale**2
    off = ~np.eye(len(idx), dtype=bool)
    r2, R2 = r * r * sc2, R * R * sc2
    if np.any(off & ~adj & (sq * r2.denominator <= r2.numerator)):
        raise BadRadii(f"{e.describe()} misses a difference of length <= r={r}")
    if np.any(off & adj & (sq * R2.denominator > R2.numerator)):
        raise BadRadii(f"{e.describe()} contains a difference longer than R={R}")
    s = r / ceil_sqrt(d)
    k = math.ceil(R / s) + 1
    cosets: dict[tuple, dict[tuple, list[int]]] = {}
    for v in idx:
        cube = tuple(math.floor(c / s) for c in pts[v])
        key = tuple(c % k for c in cube)
        cosets.setdefault(key, {}).setdefault(cube, []).append(v)
    if not cosets:
        return (I, []), Fraction(1, 2), ceil_sqrt
    key = max(sorted(cosets), key=lambda c: sum(len(x) for x in cosets[c].values()))
    cubes = cosets[key]
    fullest = max(sorted(cubes), key=lambda c: len(cubes[c]))
    reps = [cubes[c][0] for c in sorted(cubes)]
    count = k**d
    guarantee: Callable[[int], int] = lambda m, _K=count: ceil_sqrt(-(-m // _K))
    if len(cubes[fullest]) >= len(reps):
        return (C, sorted(cubes[fullest])), Fraction(1, 2), guarantee
    return (I, sorted(reps)), Fraction(1, 2), guarantee


# --- recursion ------------------------------------------------------------------------------------------


def _reverse(w):
    kind, vs = w
    if kind is C:
        return I, vs
    if kind is I:
        return C, vs
    return T, vs[::-1]


def _restrict(order: list[int], keep) -> list[int]:
    keep = set(keep)
    return [v for v in order if v in keep]


def _merge_transitive(w1, w2):
    """Longest subsequence of ``w2``'s order that is monotone in ``w1``'s order."""
    pos = {v: i for i, v in enumerate(w1[1])}
    seq = [pos[v] for v in w2[1]]
    picks, increasing = longest_monotone(seq)
    return [w2[1][i] for i in picks], increasing


def _extract(e: SetExpr, idx: list[int], ctx: _Ctx):
    """Returns ``((kind, vertices), epsilon, guarantee)`` for the subset ``idx``."""
    if isinstance(e, Empty):
        return (I, list(idx)), Fraction(1), lambda m: m
    if _is_semigroup(e):
        return _semigroup(e, idx, ctx)
    if _is_bounded(e):
        return _bounded(e, idx, ctx)
    if isinstance(e, Complement):
        w, eps, g = _extract(e.args[0], idx, ctx)
        return _reverse(w), eps, g
    if isinstance(e, (Intersection, SymmetricDifference)):
        a, b = e.args
        w1, e1, g1 = _extract(a, idx, ctx)
        w2, e2, g2 = _extract(b, w1[1], ctx)
        eps = e1 * e2 / 2
        guarantee = lambda m, _g1=g1, _g2=g2: ceil_sqrt(_g2(_g1(m)))
        k1, k2 = w1[0], w2[0]
        inter = isinstance(e, Intersection)
        if k1 is T and k2 is T:
            vs, inc = _merge_transitive(w1, w2)
            if inter:
                out = (T, vs) if inc else (I, vs)
            else:
                out = (I, vs) if inc else (C, vs)
        elif inter:
            if k1 is I:
                out = w1  # nothing survives an intersection with an empty graph
            elif k1 is C:
                out = w2
            elif k2 is C:
                out = (T, _restrict(w1[1], w2[1]))
            else:
                out = w2
        else:
            if k1 is I:
                out = w2
            elif k2 is I:
                out = (k1, _restrict(w1[1], w2[1]))
            elif k1 is C:
                out = _reverse(w2)
            else:
                out = _reverse((T, _restrict(w1[1], w2[1])))
        return out, eps, guarantee
    if isinstance(e, (Union, SetMinus, PolySign, RayRestricted, Annulus)):
        return _extract(lower(e, ctx.diffs), idx, ctx)
    raise NoStrategy(e)


def _as_witness(w) -> HomogeneousWitness:
    kind, vs = w
    return HomogeneousWitness(kind, tuple(int(v) for v in vs))


def extract_semigroup(s: SetExpr, v: PointSet) -> HomogeneousWitness:
    """Chain (Transitive) or antichain (Independent) of size at least ceil(sqrt(n))."""
    ctx = _Ctx(v)
    w, _, _ = _semigroup(s, list(range(len(v))), ctx)
    return _as_witness(w)


def extract_bounded(b: SetExpr, v: PointSet) -> HomogeneousWitness:
    """Complete or independent set from the cube/coset pigeonhole."""
    ctx = _Ctx(v)
    e = lower(b, ctx.diffs)
    if _is_bounded(e):
        w, _, _ = _bounded(e, list(range(len(v))), ctx)
    else:
        w, _, _ = _extract(e, list(range(len(v))), ctx)
    return _as_witness(w)


def extract_expr(e: SetExpr, v: PointSet) -> Extraction:
    """Witness for ``gamma_graph(e, v)`` with the exponent and size the construction guarantees."""
    if e.dimension != v.d:
        raise ValueError(f"set has dimension {e.dimension}, points have {v.d}")
    ctx = _Ctx(v)
    n = len(v)
    w, eps, g = _extract(lower(e, ctx.diffs), list(range(n)), ctx)
    return Extraction(_as_witness(w), eps, g(n), n)


def verify_extraction(e: SetExpr, v: PointSet, w: HomogeneousWitness) -> bool:
    return verify_witness(gamma_graph(e, v), w)
