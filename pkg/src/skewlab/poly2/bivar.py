"""Exact sparse bivariate polynomials over the rationals."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

import numpy as np
import sympy

X, Y = sympy.symbols("x y")

Monomial = tuple[int, int]


def _key(m: Monomial) -> tuple[int, int]:
    # graded order: total degree first, then x-degree
    return (m[0] + m[1], m[0])


class BivarPoly:
    """``sum c_ij x^i y^j`` with exact rational coefficients; immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError("exponents must be non-negative")
            c = Fraction(c)
            if c:
                clean[(int(i), int(j))] = clean.get((int(i), int(j)), Fraction(0)) + c
        self._terms = {m: c for m, c in sorted(clean.items(), key=lambda kv: _key(kv[0]), reverse=True) if c}
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def x(cls) -> "BivarPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BivarPoly":
        return cls({(0, 1): 1})

    @classmethod
    def const(cls, c) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def coerce(cls, other) -> "BivarPoly":
        if isinstance(other, BivarPoly):
            return other
        return cls.const(other)

    # structure ------------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self._terms), default=-1)

    def leading(self) -> tuple[Monomial, Fraction]:
        m = max(self._terms, key=_key)
        return m, self._terms[m]

    def homogeneous_part(self, d: int) -> "BivarPoly":
        return BivarPoly({m: c for m, c in self._terms.items() if m[0] + m[1] == d})

    def lowest_degree(self) -> int:
        return min((i + j for i, j in self._terms), default=-1)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = BivarPoly.coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return BivarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-BivarPoly.coerce(other))

    def __rsub__(self, other):
        return BivarPoly.coerce(other) - self

    def __mul__(self, other):
        other = BivarPoly.coerce(other)
        out: dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = BivarPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivarPoly):
            try:
                other = BivarPoly.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def diff_x(self) -> "BivarPoly":
        return BivarPoly({(i - 1, j): c * i for (i, j), c in self._terms.items() if i})

    def diff_y(self) -> "BivarPoly":
        return BivarPoly({(i, j - 1): c * j for (i, j), c in self._terms.items() if j})

    # evaluation -----------------------------------------------------------
    def __call__(self, x, y):
        """Exact evaluation at rational (or int) arguments."""
        x, y = Fraction(x), Fraction(y)
        return sum((c * x**i * y**j for (i, j), c in self._terms.items()), Fraction(0))

    def evalf(self, x, y):
        """Float evaluation; broadcasts over numpy arrays."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for (i, j), c in self._terms.items():
            out = out + float(c) * x**i * y**j
        return out

    def along_ray(self, vx, vy) -> list:
        """Coefficients (lowest power first) of ``lam -> f(lam * vx, lam * vy)``.

        Exact when ``vx, vy`` are rationals; floats give floats.
        """
        coeffs = [0] * (self.degree + 1)
        for (i, j), c in self._terms.items():
            if isinstance(vx, float) or isinstance(vy, float):
                coeffs[i + j] += float(c) * vx**i * vy**j
            else:
                coeffs[i + j] += c * Fraction(vx) ** i * Fraction(vy) ** j
        return coeffs

    # interop --------------------------------------------------------------
    def to_sympy(self) -> sympy.Expr:
        return sum(
            (sympy.Rational(c.numerator, c.denominator) * X**i * Y**j for (i, j), c in self._terms.items()),
            sympy.Integer(0),
        )

    @classmethod
    def from_sympy(cls, expr) -> "BivarPoly":
        poly = sympy.Poly(sympy.expand(expr), X, Y)
        return cls({m: Fraction(int(c.p), int(c.q)) for m, c in zip(poly.monoms(), poly.coeffs())})

    # text -----------------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in self._terms.items():
            mono = [str(c)]
            if i:
                mono.append("x" if i == 1 else f"x^{i}")
            if j:
                mono.append("y" if j == 1 else f"y^{j}")
            parts.append(" ".join(mono))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"BivarPoly('{self}')"

    @classmethod
    def parse(cls, text: str) -> "BivarPoly":
        """Parse ``"c x^i y^j + ..."``; ``-`` between terms and ``*`` are accepted too."""
        tokens = re.findall(r"\d+(?:\.\d+)?(?:/\d+)?|[xy]|\^|[+*-]|\S", text)
        bad = [t for t in tokens if not re.fullmatch(r"\d+(?:\.\d+)?(?:/\d+)?|[xy^+*-]", t)]
        if bad or not tokens:
            raise ValueError(f"cannot parse polynomial {text!r}")
        terms: dict[Monomial, Fraction] = {}
        coef, i, j, content = Fraction(1), 0, 0, False
        k = 0
        while k < len(tokens):
            tok = tokens[k]
            if tok in "+-":
                if content:
                    terms[(i, j)] = terms.get((i, j), Fraction(0)) + coef
                    coef, i, j, content = Fraction(1), 0, 0, False
                if tok == "-":
                    coef = -coef
            elif tok in "xy":
                e = 1
                if k + 1 < len(tokens) and tokens[k + 1] == "^":
                    if k + 2 >= len(tokens) or not tokens[k + 2].isdigit():
                        raise ValueError(f"bad exponent in {text!r}")
                    e = int(tokens[k + 2])
                    k += 2
                if tok == "x":
                    i += e
                else:
                    j += e
                content = True
            elif tok == "^":
                raise ValueError(f"stray '^' in {text!r}")
            elif tok == "*":
                after = tokens[k + 1] if k + 1 < len(tokens) else ""
                if k == 0 or tokens[k - 1] in "+-*" or not (after in ("x", "y") or after[:1].isdigit()):
                    raise ValueError(f"'*' must join two factors in {text!r}")
            else:
                coef *= Fraction(tok)
                content = True
            k += 1
        if not content:
            raise ValueError(f"dangling operator in {text!r}")
        terms[(i, j)] = terms.get((i, j), Fraction(0)) + coef
        return cls(terms)


def poly(text: str) -> BivarPoly:
    return BivarPoly.parse(text)
