"""Membership oracles for sets of difference vectors and the set algebra over them.

Every set is evaluated on all pairwise differences ``p_j - p_i`` of a point
set at once.  Points are rescaled to a common denominator so linear and
quadratic tests run on integer arrays; polynomial tests use Python integers
to stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ..io import parse_rational, rational_str
from ..lines3d import as_rational
from ..poly2.bivar import BivarPoly
from ..tourney import Digraph


class OracleUndefined(ValueError):
    """A difference fell on the boundary of a leaf set."""

    def __init__(self, pair: tuple[int, int], leaf: str = ""):
        super().__init__(f"membership undefined for pair {pair} at {leaf}")
        self.pair = pair
        self.leaf = leaf


@dataclass(frozen=True)
class PointSet:
    points: tuple[tuple[Fraction, ...], ...]
    d: int

    def __post_init__(self):
        if any(len(p) != self.d for p in self.points):
            raise ValueError(f"all points must have dimension {self.d}")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be distinct")

    @classmethod
    def of(cls, points: Sequence[Sequence], d: int | None = None) -> "PointSet":
        pts = tuple(tuple(as_rational(c) for c in p) for p in points)
        if d is None:
            if not pts:
                raise ValueError("dimension needed for an empty point set")
            d = len(pts[0])
        return cls(pts, d)

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {"dimension": self.d, "points": [[rational_str(c) for c in p] for p in self.points]}

    @classmethod
    def from_json(cls, obj: dict) -> "PointSet":
        return cls(tuple(tuple(parse_rational(c) for c in p) for p in obj["points"]), int(obj["dimension"]))


def _lcm_den(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


class Diffs:
    """All pairwise differences ``delta[i, j] = scale * (p_j - p_i)`` as integers."""

    def __init__(self, delta: np.ndarray, scale: int):
        self.delta = delta
        self.scale = scale
        self.n = delta.shape[0]

    @classmethod
    def of(cls, pts: PointSet) -> "Diffs":
        n = len(pts)
        scale = _lcm_den(c for p in pts.points for c in p)
        ints = [[int(c * scale) for c in p] for p in pts.points]
        big = max((abs(v) for p in ints for v in p), default=0)
        dtype = np.int64 if big < 2**20 else object
        arr = np.array(ints, dtype=dtype).reshape(n, pts.d)
        return cls(arr[None, :, :] - arr[:, None, :], scale)

    def as_object(self) -> np.ndarray:
        return self.delta.astype(object)

    def fraction(self, i: int, j: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(v), self.scale) for v in self.delta[i, j])


def _active(n: int, mask: np.ndarray | None) -> np.ndarray:
    off = ~np.eye(n, dtype=bool)
    return off if mask is None else (mask & off)


def _raise_if(bad: np.ndarray, leaf: "SetExpr") -> None:
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise OracleUndefined((int(i), int(j)), leaf.describe())


def _scaled_ints(vec) -> list[int]:
    den = _lcm_den(vec)
    return [int(Fraction(v) * den) for v in vec]


class SetExpr:
    """Base of the expression tree; subclasses are leaves or set operations."""

    dimension: int

    def members(self, diffs: Diffs, mask: np.ndarray | None = None) -> np.ndarray:
        raise NotImplementedError

    def contains(self, vec: Sequence) -> bool:
        """Membership of a single vector (raises ``OracleUndefined`` on the boundary)."""
        pts = PointSet.of([[0] * len(vec), list(vec)], len(vec))
        return bool(self.members(Diffs.of(pts), np.array([[False, True], [False, False]]))[0, 1])

    def to_json(self) -> dict:
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__

    @property
    def children(self) -> tuple["SetExpr", ...]:
        return ()


# --- leaves ----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Halfplane(SetExpr):
    """Open halfspace ``{x : <normal, x> > 0}``; a semigroup."""

    normal: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(as_rational(c) for c in self.normal))
        if not any(self.normal):
            raise ValueError("normal must be nonzero")

    @property
    def dimension(self) -> int:
        return len(self.normal)

    def members(self, diffs, mask=None):
        w = _scaled_ints(self.normal)
        s = sum(wk * diffs.delta[:, :, k] for k, wk in enumerate(w))
        act = _active(diffs.n, mask)
        _raise_if(act & (s == 0), self)
        return act & (s > 0)

    def to_json(self):
        return {"kind": "halfplane", "normal": [rational_str(c) for c in self.normal]}


@dataclass(frozen=True, eq=False)
class Orthant(SetExpr):
    """Closed orthant minus the origin: ``sign_k * x_k >= 0`` for all ``k``, ``x != 0``."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if not self.signs or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be a nonempty tuple of +1/-1")

    @property
    def dimension(self) -> int:
        return len(self.signs)

    def members(self, diffs, mask=None):
        sd = diffs.delta * np.array(self.signs, dtype=diffs.delta.dtype)
        return _active(diffs.n, mask) & np.all(sd >= 0, axis=2) & np.any(sd != 0, axis=2)

    def to_json(self):
        return {"kind": "orthant", "signs": list(self.signs)}


def _cross(u, x0, x1):
    return u[0] * x1 - u[1] * x0


@dataclass(frozen=True, eq=False)
class Cone(SetExpr):
    """Open planar cone strictly between directions ``u`` and ``v`` (angle below pi)."""

    u: tuple[Fraction, Fraction]
    v: tuple[Fraction, Fraction]

    def __post_init__(self):
        u = tuple(as_rational(c) for c in self.u)
        v = tuple(as_rational(c) for c in self.v)
        if len(u) != 2 or len(v) != 2:
            raise ValueError("cones are planar")
        c = u[0] * v[1] - u[1] * v[0]
        if c == 0:
            raise ValueError("cone directions must be independent")
        if c < 0:
            u, v = v, u
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    dimension = 2

    def members(self, diffs, mask=None):
        x0, x1 = diffs.delta[:, :, 0], diffs.delta[:, :, 1]
        u, v = _scaled_ints(self.u), _scaled_ints(self.v)
        a = _cross(u, x0, x1)
        b = -_cross(v, x0, x1)
        act = _active(diffs.n, mask)
        on_u = (a == 0) & (u[0] * x0 + u[1] * x1 > 0)
        on_v = (b == 0) & (v[0] * x0 + v[1] * x1 > 0)
        _raise_if(act & (on_u | on_v), self)
        return act & (a > 0) & (b > 0)

    def to_json(self):
        return {"kind": "cone", "u": [rational_str(c) for c in self.u], "v": [rational_str(c) for c in self.v]}


@dataclass(frozen=True, eq=False)
class RayFrom(SetExpr):
    """One-dimensional ``{x : direction * x > threshold}`` (``>=`` when not strict), threshold >= 0."""

    threshold: Fraction
    direction: int = 1
    strict: bool = True

    def __post_init__(self):
        object.__setattr__(self, "threshold", as_rational(self.threshold))
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0 for the set to be a semigroup")
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")

    dimension = 1

    def members(self, diffs, mask=None):
        s = self.direction * diffs.delta[:, :, 0]
        bound = self.threshold * diffs.scale
        num, den = bound.numerator, bound.denominator
        s = s * den
        act = _active(diffs.n, mask)
        _raise_if(act & (s == num), self)
        return act & ((s > num) if self.strict else (s >= num))

    def to_json(self):
        return {
            "kind": "rayfrom",
            "threshold": rational_str(self.threshold),
            "direction": self.direction,
            "strict": self.strict,
        }


@dataclass(frozen=True, eq=False)
class Ball(SetExpr):
    """Origin-centred ball ``|x| <= radius`` (``<`` when open); bounded with 0 inside."""

    radius: Fraction
    dimension: int = 2
    closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "radius", as_rational(self.radius))
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def inner_radius(self) -> Fraction:
        return self.radius

    @property
    def outer_radius(self) -> Fraction:
        return self.radius

    def members(self, diffs, mask=None):
        sq = np.sum(diffs.delta * diffs.delta, axis=2)
        lim = self.radius**2 * diffs.scale**2
        sq = sq * lim.denominator
        inside = (sq <= lim.numerator) if self.closed else (sq < lim.numerator)
        return _active(diffs.n, mask) & inside

    def to_json(self):
        return {"kind": "ball", "radius": rational_str(self.radius), "dimension": self.dimension, "closed": self.closed}


@dataclass(frozen=True, eq=False)
class Annulus(SetExpr):
    """``inner <= |x| <= outer``: bounded, with the origin outside."""

    inner: Fraction
    outer: Fraction
    dimension: int = 2

    def __post_init__(self):
        object.__setattr__(self, "inner", as_rational(self.inner))
        object.__setattr__(self, "outer", as_rational(self.outer))
        if not 0 < self.inner <= self.outer:
            raise ValueError("need 0 < inner <= outer")

    def members(self, diffs, mask=None):
        sq = np.sum(diffs.delta * diffs.delta, axis=2)
        lo = self.inner**2 * diffs.scale**2
        hi = self.outer**2 * diffs.scale**2
        den = lo.denominator * hi.denominator
        sq = sq * den
        return _active(diffs.n, mask) & (sq >= int(lo * den)) & (sq <= int(hi * den))

    def to_json(self):
        return {
            "kind": "annulus",
            "inner": rational_str(self.inner),
            "outer": rational_str(self.outer),
            "dimension": self.dimension,
        }


@dataclass(frozen=True, eq=False)
class PolySign(SetExpr):
    """``{x : f(x) > 0}``; in dimension 1 ``f`` may only involve ``x``."""

    poly: BivarPoly
    dimension: int = 2

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError("PolySign supports dimensions 1 and 2")
        if self.dimension == 1 and any(j for _, j in self.poly.terms):
            raise ValueError("a one-dimensional PolySign must not involve y")

    def members(self, diffs, mask=None):
        act = _active(diffs.n, mask)
        deg = max(self.poly.degree, 0)
        den = _lcm_den(c for _, c in self.poly.items())
        dl = diffs.as_object()
        xs = dl[:, :, 0]
        ys = dl[:, :, 1] if self.dimension == 2 else None
        total = np.zeros(xs.shape, dtype=object)
        for (i, j), c in self.poly.items():
            k = int(c * den) * diffs.scale ** (deg - i - j)
            term = xs**i if i else np.ones(xs.shape, dtype=object)
            if j:
                term = term * ys**j
            total = total + k * term
        _raise_if(act & (total == 0), self)
        return act & (total > 0)

    def to_json(self):
        return {"kind": "polysign", "poly": str(self.poly), "dimension": self.dimension}


@dataclass(frozen=True, eq=False)
class Empty(SetExpr):
    dimension: int = 2

    def members(self, diffs, mask=None):
        return np.zeros((diffs.n, diffs.n), dtype=bool)

    def to_json(self):
        return {"kind": "empty", "dimension": self.dimension}


@dataclass(frozen=True, eq=False)
class RayRestricted(SetExpr):
    """``{lam * direction : lam in inner}`` for a one-dimensional set ``inner``."""

    direction: tuple[Fraction, ...]
    inner: SetExpr

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(as_rational(c) for c in self.direction))
        if not any(self.direction):
            raise ValueError("direction must be nonzero")
        if self.inner.dimension != 1:
            raise ValueError("inner set must be one-dimensional")

    @property
    def dimension(self) -> int:
        return len(self.direction)

    @property
    def children(self):
        return (self.inner,)

    def line_coordinates(self, diffs: Diffs) -> tuple[np.ndarray, Diffs]:
        """Pairs whose difference lies on the line, and their coordinates along it."""
        v = _scaled_ints(self.direction)
        x = diffs.delta
        par = np.ones((diffs.n, diffs.n), dtype=bool)
        for a in range(len(v)):
            for b in range(a + 1, len(v)):
                par &= (x[:, :, a] * v[b] - x[:, :, b] * v[a]) == 0
        k = next(i for i, c in enumerate(self.direction) if c)
        c = self.direction[k]
        lam = x[:, :, k] * (c.denominator * (1 if c > 0 else -1))
        return par, Diffs(lam[:, :, None], diffs.scale * abs(c.numerator))

    def members(self, diffs, mask=None):
        act = _active(diffs.n, mask)
        par, line = self.line_coordinates(diffs)
        return act & par & self.inner.members(line, act & par)

    def to_json(self):
        return {
            "kind": "rayrestricted",
            "direction": [rational_str(c) for c in self.direction],
            "inner": self.inner.to_json(),
        }


@dataclass(frozen=True, eq=False)
class Custom(SetExpr):
    """Black-box oracle on exact difference vectors; returns True, False or None (undefined).

    ``role`` tells the extractor what to assume: ``"semigroup"`` (closure is
    spot-checked unless ``closure`` is ``"trusted"``) or ``"bounded"`` with
    radii ``r <= R`` and ``zero_interior``.  Not serializable.
    """

    oracle: Callable[[tuple[Fraction, ...]], bool | None]
    dimension: int
    role: str = "semigroup"
    closure: str = "spot-check"
    r: Fraction | None = None
    R: Fraction | None = None
    zero_interior: bool = True
    name: str = "custom"

    def __post_init__(self):
        if self.role not in ("semigroup", "bounded", "none"):
            raise ValueError("role must be semigroup, bounded or none")
        if self.closure not in ("spot-check", "trusted"):
            raise ValueError("closure must be spot-check or trusted")

    @property
    def inner_radius(self):
        return self.r

    @property
    def outer_radius(self):
        return self.R

    def members(self, diffs, mask=None):
        act = _active(diffs.n, mask)
        out = np.zeros_like(act)
        for i, j in zip(*np.nonzero(act)):
            v = self.oracle(diffs.fraction(i, j))
            if v is None:
                raise OracleUndefined((int(i), int(j)), self.name)
            out[i, j] = bool(v)
        return out

    def describe(self) -> str:
        return self.name

    def to_json(self):
        raise TypeError("custom oracles cannot be serialized")


# --- operations ---------------------------------------------------------------------------


class _Op(SetExpr):
    op = ""
    arity = 2

    def __init__(self, *args: SetExpr):
        if len(args) != self.arity:
            raise ValueError(f"{self.op} takes {self.arity} operand(s)")
        dims = {a.dimension for a in args}
        if len(dims) != 1:
            raise ValueError(f"operands disagree on dimension: {sorted(dims)}")
        self.args = tuple(args)

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.args!r}"

    @property
    def dimension(self) -> int:
        return self.args[0].dimension

    @property
    def children(self):
        return self.args

    def to_json(self):
        return {"op": self.op, "args": [a.to_json() for a in self.args]}

    def describe(self) -> str:
        return self.op


class Complement(_Op):
    op, arity = "complement", 1

    def members(self, diffs, mask=None):
        act = _active(diffs.n, mask)
        return act & ~self.args[0].members(diffs, act)


class Union(_Op):
    op = "union"

    def members(self, diffs, mask=None):
        return self.args[0].members(diffs, mask) | self.args[1].members(diffs, mask)


class Intersection(_Op):
    op = "intersection"

    def members(self, diffs, mask=None):
        return self.args[0].members(diffs, mask) & self.args[1].members(diffs, mask)


class SymmetricDifference(_Op):
    op = "symdiff"

    def members(self, diffs, mask=None):
        return self.args[0].members(diffs, mask) ^ self.args[1].members(diffs, mask)


class SetMinus(_Op):
    op = "setminus"

    def members(self, diffs, mask=None):
        return self.args[0].members(diffs, mask) & ~self.args[1].members(diffs, mask)


_OPS = {cls.op: cls for cls in (Complement, Union, Intersection, SymmetricDifference, SetMinus)}


def expr_from_json(obj: dict) -> SetExpr:
    if "op" in obj:
        if obj["op"] not in _OPS:
            raise ValueError(f"unknown set operation {obj['op']!r}")
        return _OPS[obj["op"]](*(expr_from_json(a) for a in obj["args"]))
    kind = obj.get("kind")
    q = parse_rational
    if kind == "halfplane":
        return Halfplane(tuple(q(c) for c in obj["normal"]))
    if kind == "orthant":
        return Orthant(tuple(int(s) for s in obj["signs"]))
    if kind == "cone":
        return Cone(tuple(q(c) for c in obj["u"]), tuple(q(c) for c in obj["v"]))
    if kind == "rayfrom":
        return RayFrom(q(obj["threshold"]), int(obj.get("direction", 1)), bool(obj.get("strict", True)))
    if kind == "ball":
        return Ball(q(obj["radius"]), int(obj.get("dimension", 2)), bool(obj.get("closed", True)))
    if kind == "annulus":
        return Annulus(q(obj["inner"]), q(obj["outer"]), int(obj.get("dimension", 2)))
    if kind == "polysign":
        return PolySign(BivarPoly.parse(obj["poly"]), int(obj.get("dimension", 2)))
    if kind == "empty":
        return Empty(int(obj.get("dimension", 2)))
    if kind == "rayrestricted":
        return RayRestricted(tuple(q(c) for c in obj["direction"]), expr_from_json(obj["inner"]))
    raise ValueError(f"unknown set kind {kind!r}")


def gamma_graph(s: SetExpr, v: PointSet) -> Digraph:
    """Digraph on ``v`` with an arc ``i -> j`` iff ``p_j - p_i`` lies in ``s``."""
    if s.dimension != v.d:
        raise ValueError(f"set has dimension {s.dimension}, points have {v.d}")
    if len(v) == 0:
        return Digraph(np.zeros((0, 0), dtype=bool))
    return Digraph(s.members(Diffs.of(v)))


def product_sign_expr(f: BivarPoly, g: BivarPoly, dimension: int = 2) -> SetExpr:
    """Expression for ``{f g > 0}``: the complement of ``{f > 0} xor {g > 0}``."""
    return Complement(SymmetricDifference(PolySign(f, dimension), PolySign(g, dimension)))
