"""Radial/tangential pairings, exact division, classification and the rotation matrix."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from .bivar import BivarPoly, X, Y


class ZeroPolynomial(ValueError):
    pass


class NotIrreducible(ValueError):
    """Raised when a cheap necessary condition for irreducibility fails."""


class CheckFailed(AssertionError):
    def __init__(self, which: str, d: int):
        super().__init__(f"spectral check {which!r} failed for d={d}")
        self.which, self.d = which, d


def radial_pairing(f: BivarPoly) -> BivarPoly:
    """``x f_x + y f_y``."""
    return BivarPoly.x() * f.diff_x() + BivarPoly.y() * f.diff_y()


def tangential_pairing(f: BivarPoly) -> BivarPoly:
    """``x f_y - y f_x``."""
    return BivarPoly.x() * f.diff_y() - BivarPoly.y() * f.diff_x()


def divmod_poly(h: BivarPoly, f: BivarPoly) -> tuple[BivarPoly, BivarPoly]:
    """Multivariate division of ``h`` by ``f`` in graded order (x before y).

    Terms of the running remainder whose monomial is not a multiple of the
    leading monomial of ``f`` are moved to the remainder.
    """
    if f.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    (li, lj), lc = f.leading()
    q: dict = {}
    r: dict = {}
    p = h
    while not p.is_zero():
        (pi, pj), pc = p.leading()
        if pi >= li and pj >= lj:
            m = (pi - li, pj - lj)
            c = pc / lc
            q[m] = q.get(m, Fraction(0)) + c
            p = p - BivarPoly({m: c}) * f
        else:
            r[(pi, pj)] = pc
            p = p - BivarPoly({(pi, pj): pc})
    return BivarPoly(q), BivarPoly(r)


def divides(f: BivarPoly, h: BivarPoly) -> tuple[bool, BivarPoly | None]:
    """Whether ``h = q f`` for a polynomial ``q``; returns ``q`` when it does."""
    if f.is_zero():
        raise ZeroPolynomial("f must be nonzero")
    q, r = divmod_poly(h, f)
    if r.is_zero():
        return True, q
    return False, None


class FormKind(enum.Enum):
    LINEAR = "LinearForm"
    CIRCLE = "CircleForm"
    GENERIC = "Generic"


@dataclass(frozen=True)
class Classification:
    kind: FormKind
    a: Fraction | None = None
    b: Fraction | None = None
    radial_divisible: bool = False
    tangential_divisible: bool = False
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        out = {
            "kind": self.kind.value,
            "radial_divisible": self.radial_divisible,
            "tangential_divisible": self.tangential_divisible,
        }
        if self.a is not None:
            out["a"] = str(self.a)
            out["b"] = str(self.b)
        return out


def _monomial_factor(f: BivarPoly) -> str | None:
    if all(i > 0 for i, _ in f.terms):
        return "x"
    if all(j > 0 for _, j in f.terms):
        return "y"
    return None


def classify(f: BivarPoly) -> Classification:
    """Sort ``f`` into ``a x + b y``, ``a (x^2 + y^2) + b`` or neither.

    Generic polynomials must divide neither pairing; that is asserted, since
    it can only fail for reducible input that slipped past the cheap checks.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot classify the zero polynomial")
    if f.degree < 1:
        raise ValueError("f must be nonconstant")
    terms = f.terms
    rad_div = divides(f, radial_pairing(f))[0]
    tan_div = divides(f, tangential_pairing(f))[0]
    if set(terms) <= {(1, 0), (0, 1)}:
        return Classification(FormKind.LINEAR, f.coeff(1, 0), f.coeff(0, 1), rad_div, tan_div)
    if set(terms) <= {(2, 0), (0, 2), (0, 0)} and f.coeff(2, 0) == f.coeff(0, 2) != 0:
        return Classification(FormKind.CIRCLE, f.coeff(2, 0), f.coeff(0, 0), rad_div, tan_div)
    factor = _monomial_factor(f)
    if factor is not None:
        raise NotIrreducible(f"{f} is divisible by {factor}")
    if rad_div or tan_div:
        raise AssertionError(
            f"{f}: a non-special polynomial divides its "
            f"{'radial' if rad_div else 'tangential'} pairing, so it is not irreducible"
        )
    return Classification(FormKind.GENERIC, None, None, False, False)


def is_square_free(f: BivarPoly) -> bool:
    g = sympy.gcd_list([f.to_sympy(), f.diff_x().to_sympy(), f.diff_y().to_sympy()])
    return sympy.Poly(g, X, Y).total_degree() == 0


# --- rotation generator on homogeneous polynomials -------------------------


def spectral_matrix(d: int) -> np.ndarray:
    """Integer matrix of ``x D_y - y D_x`` on degree-``d`` forms.

    Coordinates: entry ``k`` is the coefficient of ``x^(d-k) y^k``.  The
    super-diagonal reads ``1, 2, ..., d`` and the sub-diagonal ``-d, ..., -1``.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    m = np.zeros((d + 1, d + 1), dtype=np.int64)
    for k in range(1, d + 1):
        m[k - 1, k] = k
        m[k, k - 1] = -(d - k + 1)
    return m


def form_vector(f: BivarPoly, d: int) -> list[Fraction]:
    """Coefficients of the degree-``d`` part in spectral-matrix coordinates."""
    return [f.coeff(d - k, k) for k in range(d + 1)]


def form_from_vector(vec, d: int) -> BivarPoly:
    return BivarPoly({(d - k, k): c for k, c in enumerate(vec)})


def exchange_matrix(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n, dtype=np.int64))


def binomial_null_vector(d: int) -> list[int]:
    """``(x^2 + y^2)^(d/2)`` in spectral-matrix coordinates (1-based odd slots get binomials)."""
    if d % 2:
        raise ValueError("only even degrees have a null vector")
    return [math.comb(d // 2, k // 2) if k % 2 == 0 else 0 for k in range(d + 1)]


@dataclass
class SpectralReport:
    d: int
    eigenvalues: np.ndarray
    max_abs_real: float
    nullity: int
    null_vector: list | None
    determinant: int
    anticommutes_with_exchange: bool

    def to_json(self) -> dict:
        imag = sorted(float(v) for v in self.eigenvalues.imag)
        return {
            "d": self.d,
            "eigenvalues_imag": imag,
            "max_abs_real": self.max_abs_real,
            "nullity": self.nullity,
            "null_vector": None if self.null_vector is None else [str(v) for v in self.null_vector],
            "determinant": str(self.determinant),
            "anticommutes_with_exchange": self.anticommutes_with_exchange,
        }


def _balanced(m: np.ndarray) -> np.ndarray:
    """Diagonal similarity turning the tridiagonal matrix into a skew-symmetric one."""
    n = m.shape[0]
    s = np.ones(n)
    for k in range(1, n):
        # equalize |b[k-1,k]| and |b[k,k-1]| for b = S^-1 M S
        s[k] = s[k - 1] * math.sqrt(abs(m[k, k - 1]) / abs(m[k - 1, k]))
    return (m / s[:, None]) * s[None, :]


def spectral_checks(d: int, tol: float = 1e-9) -> SpectralReport:
    """Numerical and exact checks on the rotation matrix of degree ``d``.

    * every eigenvalue of the balanced matrix has ``|Re| < tol``;
    * the exact nullity is 1 for even ``d`` and 0 for odd ``d``;
    * for even ``d`` the null space is spanned by the binomial pattern of
      ``(x^2 + y^2)^(d/2)``;
    * ``M J = -J M`` for the exchange matrix ``J``.
    """
    if not 1 <= d <= 40:
        raise ValueError("d must lie in 1..40")
    m = spectral_matrix(d)
    eig = np.linalg.eigvals(_balanced(m))
    max_re = float(np.max(np.abs(eig.real)))
    if not max_re < tol:
        raise CheckFailed("eigenvalues pure imaginary", d)

    exact = sympy.Matrix(m.tolist())
    null = exact.nullspace()
    nullity = len(null)
    if nullity != (1 if d % 2 == 0 else 0):
        raise CheckFailed("nullity parity", d)
    det = int(exact.det())
    if (det != 0) != (d % 2 == 1):
        raise CheckFailed("invertibility parity", d)
    null_vec = None
    if nullity:
        v = null[0]
        pivot = next(x for x in v if x != 0)
        null_vec = [Fraction(int(sympy.fraction(x / pivot)[0]), int(sympy.fraction(x / pivot)[1])) for x in v]
        if null_vec != [Fraction(c) for c in binomial_null_vector(d)]:
            raise CheckFailed("binomial null vector", d)
    j = exchange_matrix(d + 1)
    anti = bool(np.array_equal(m @ j, -(j @ m)))
    if not anti:
        raise CheckFailed("exchange anticommutation", d)
    return SpectralReport(d, eig, max_re, nullity, null_vec, det, anti)
