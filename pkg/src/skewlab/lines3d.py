"""Lines in R^3 in the two-plane parameterization, and their crossing tournament.

A line meeting the planes ``x = 1`` and ``x = -1`` at ``(1, a, b)`` and
``(-1, c, d)`` is stored as the exact tuple ``(a, b, c, d)``.  Seen from far
along the z-axis, line 1 passes over line 2 exactly when the cubic form
``g(a, b, c, d) = (a - c)(ad - bc)`` is positive on the coordinate difference.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .tourney import Tournament

Rational = Fraction


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact coordinates; pass a str or Fraction")
    return Fraction(value)


@dataclass(frozen=True)
class Line4:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def of(cls, *coords) -> "Line4":
        if len(coords) == 1:
            coords = tuple(coords[0])
        return cls(*coords)

    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __sub__(self, other: "Line4") -> tuple[Fraction, ...]:
        return tuple(p - q for p, q in zip(self.coords(), other.coords()))

    def point_at(self, t) -> tuple[Fraction, Fraction, Fraction]:
        """Point ``(1, a, b) + t (-2, c - a, d - b)``."""
        t = as_rational(t)
        return (1 - 2 * t, self.a + t * (self.c - self.a), self.b + t * (self.d - self.b))


@dataclass(frozen=True)
class Configuration:
    lines: tuple[Line4, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    @classmethod
    def from_coords(cls, rows: Iterable[Sequence], label: str = "") -> "Configuration":
        return cls(tuple(Line4.of(r) for r in rows), label)


class Skewness(enum.Enum):
    SKEW = "Skew"
    PROJECTIONS_PARALLEL = "ProjectionsParallel"
    INTERSECTING = "Intersecting"
    IDENTICAL = "Identical"


class NotSkew(ValueError):
    def __init__(self, i: int, j: int, verdict: Skewness):
        super().__init__(f"lines {i} and {j} are not skew ({verdict.value})")
        self.i, self.j, self.verdict = i, j, verdict


class PerturbationFailed(RuntimeError):
    pass


def crossing_form(delta: Sequence) -> Fraction:
    """``(a - c)(ad - bc)`` evaluated exactly."""
    a, b, c, d = (as_rational(v) for v in delta)
    return (a - c) * (a * d - b * c)


def is_skew_pair(l1: Line4, l2: Line4) -> Skewness:
    da, db, dc, dd = l1 - l2
    if da == db == dc == dd == 0:
        return Skewness.IDENTICAL
    if da - dc == 0:
        return Skewness.PROJECTIONS_PARALLEL
    if da * dd - db * dc == 0:
        return Skewness.INTERSECTING
    return Skewness.SKEW


def first_non_skew(config: Configuration) -> tuple[int, int, Skewness] | None:
    lines = config.lines
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            v = is_skew_pair(lines[i], lines[j])
            if v is not Skewness.SKEW:
                return i, j, v
    return None


def crossing_tournament(config: Configuration) -> Tournament:
    """Tournament with ``i -> j`` iff line ``i`` passes over line ``j``."""
    lines = config.lines
    n = len(lines)
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            v = is_skew_pair(lines[i], lines[j])
            if v is not Skewness.SKEW:
                raise NotSkew(i, j, v)
            if crossing_form(lines[i] - lines[j]) > 0:
                adj[i, j] = True
            else:
                adj[j, i] = True
    return Tournament(adj)


def perturb_to_general(config: Configuration, seed: int, retries: int = 16) -> Configuration:
    """Nudge coordinates by distinct tiny rationals until every pair is skew.

    Offsets are bounded by ``2**-20`` times the coordinate spread.  Inputs that
    are already in general position come back unchanged.
    """
    if first_non_skew(config) is None:
        return config
    coords = [c for line in config.lines for c in line.coords()]
    spread = (max(coords) - min(coords)) if coords else Fraction(0)
    if spread == 0:
        spread = Fraction(1)
    rng = random.Random(seed)
    scale = spread / 2**40
    for _ in range(retries):
        steps = rng.sample(range(-(2**20), 2**20 + 1), len(coords))
        moved = [c + k * scale for c, k in zip(coords, steps)]
        out = Configuration.from_coords(
            (moved[4 * i : 4 * i + 4] for i in range(len(config.lines))), config.label
        )
        if first_non_skew(out) is None:
            return out
    raise PerturbationFailed(f"no general-position perturbation after {retries} attempts")
