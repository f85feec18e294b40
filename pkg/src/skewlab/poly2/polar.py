"""Polar decomposition of ``{f > 0}`` into a cone, radially monotone arc regions and rays.

The positive set is rebuilt as

    ((Z xor X_1 xor ... xor X_M) minus C) union D

where ``Z`` is the cone of directions in which ``f`` is positive right next to
the origin, each ``X_j = {lam * g_j(theta) cis(theta) : theta in I_j, lam >= 1}``
sits above a monotone arc ``r = g_j(theta)`` across which the sign of ``f``
flips, ``C`` is a finite set of rays and ``D`` the positive part of ``f`` on
them.

Arcs are found by an angular sweep rather than by marching along the curve in
the plane.  Substituting ``t = tan(theta / 2)`` turns ``f(r cis theta)`` into a
polynomial ``q(t, r)``; the angles at which the number of positive roots in
``r`` can change, or at which a root stops being monotone, are real roots of
resultants of ``q`` with its partial derivatives.  These are isolated exactly;
between two consecutive ones every positive root is traced numerically by a
predictor-corrector along ``theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from .algebra import FormKind, classify, is_square_free
from .bivar import BivarPoly

TWO_PI = 2.0 * math.pi
_T, _LAM = sympy.symbols("t lam")
# axis directions get exact rational unit vectors
_AXES = {0.0: (1, 0), math.pi / 2: (0, 1), math.pi: (-1, 0), 3 * math.pi / 2: (0, -1)}


class TracerStalled(RuntimeError):
    pass


class SingularityCluster(RuntimeError):
    pass


class NotGeneric(ValueError):
    pass


def _sign(v) -> int:
    return (v > 0) - (v < 0)


class _FloatPoly:
    """Fast float evaluation of a bivariate polynomial and of its restriction to rays."""

    def __init__(self, f: BivarPoly):
        items = list(f.items())
        self.i = np.array([m[0] for m, _ in items], dtype=np.int64)
        self.j = np.array([m[1] for m, _ in items], dtype=np.int64)
        self.c = np.array([float(c) for _, c in items])
        self.deg = max(f.degree, 0)
        self.scale = float(np.max(np.abs(self.c))) if items else 0.0

    def __call__(self, x: float, y: float) -> float:
        return float(np.sum(self.c * x**self.i * y**self.j))

    def ray(self, theta: float) -> np.ndarray:
        """Coefficients, lowest power first, of ``r -> f(r cos theta, r sin theta)``."""
        w = self.c * math.cos(theta) ** self.i * math.sin(theta) ** self.j
        return np.bincount(self.i + self.j, weights=w, minlength=self.deg + 1)


def _polyval(coeffs: np.ndarray, r: float) -> tuple[float, float]:
    p = dp = 0.0
    for c in coeffs[::-1]:
        dp = dp * r + p
        p = p * r + c
    return p, dp


def _newton(coeffs: np.ndarray, r: float, tol: float, iters: int = 60) -> tuple[float, bool]:
    for _ in range(iters):
        p, dp = _polyval(coeffs, r)
        if dp == 0.0 or not math.isfinite(dp):
            return r, False
        step = p / dp
        r -= step
        if abs(step) <= tol * max(abs(r), 1e-300):
            return r, True
    return r, False


def _positive_roots(coeffs: np.ndarray, tol: float = 1e-14) -> list[float]:
    c = np.array(coeffs, dtype=float)
    big = np.max(np.abs(c)) if c.size else 0.0
    if big == 0.0:
        return []
    nz = np.nonzero(np.abs(c) > 1e-14 * big)[0]
    c = c[: nz[-1] + 1]
    if c.size < 2:
        return []
    out = []
    for z in np.roots(c[::-1]):
        if z.real > 0 and abs(z.imag) <= 1e-7 * max(1.0, abs(z)):
            r, _ = _newton(c, float(z.real), tol)
            if r > 0:
                out.append(float(r))
    return sorted(out)


# --- data ------------------------------------------------------------------


@dataclass(frozen=True)
class PolarArc:
    """One branch ``r = g(theta)`` of the curve over an open angular interval.

    ``ends`` records why tracing stopped on each side: ``"finite"`` near an
    interval endpoint, ``"inf"`` once the radius left the working range
    (asymptote), ``"zero"`` when it approached the origin.
    """

    interval: tuple[float, float]
    samples: tuple[tuple[float, float], ...]
    rank: int = 0
    root_count: int = 1
    c_minus: int = 1
    c_plus: int = -1
    ends: tuple[str, str] = ("finite", "finite")

    @property
    def important(self) -> bool:
        return self.c_minus != self.c_plus

    @property
    def monotonicity(self) -> str:
        return "Increasing" if self.samples[-1][1] > self.samples[0][1] else "Decreasing"

    def contains(self, theta: float) -> bool:
        return self.interval[0] < theta < self.interval[1]

    def is_strictly_monotone(self) -> bool:
        rs = np.array([r for _, r in self.samples])
        ths = np.array([t for t, _ in self.samples])
        d = np.diff(rs)
        return bool(np.all(np.diff(ths) > 0) and (np.all(d > 0) or np.all(d < 0)))

    def interpolate(self, theta: float) -> float:
        ths = [t for t, _ in self.samples]
        rs = [r for _, r in self.samples]
        return float(np.interp(theta, ths, rs))

    def radius(self, theta: float, fp: _FloatPoly | None = None, tol: float = 1e-13) -> float:
        """``g(theta)``: interpolated from the samples, Newton-polished on ``f`` when given."""
        lo, hi = self.samples[0][0], self.samples[-1][0]
        side = 0 if theta < lo else 1 if theta > hi else None
        if side is not None:
            if self.ends[side] == "inf":
                return math.inf
            if self.ends[side] == "zero":
                return 0.0
        guess = self.interpolate(theta)
        if fp is None:
            return guess
        coeffs = fp.ray(theta)
        r, ok = _newton(coeffs, guess, tol)
        roots = _positive_roots(coeffs)
        if len(roots) == self.root_count:
            exact = roots[self.rank]
            if not ok or abs(r - exact) > 1e-9 * max(exact, 1.0):
                r = exact
        return r

    def to_json(self) -> dict:
        return {
            "interval": list(self.interval),
            "rank": self.rank,
            "root_count": self.root_count,
            "c_minus": self.c_minus,
            "c_plus": self.c_plus,
            "important": self.important,
            "monotonicity": self.monotonicity,
            "ends": list(self.ends),
            "samples": [list(s) for s in self.samples],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PolarArc":
        return cls(
            tuple(obj["interval"]),
            tuple(tuple(s) for s in obj["samples"]),
            obj["rank"],
            obj["root_count"],
            obj["c_minus"],
            obj["c_plus"],
            tuple(obj["ends"]),
        )


def _inf_to_json(v: float):
    return None if math.isinf(v) else v


@dataclass(frozen=True)
class ExceptionalRay:
    """A ray in ``C``; ``positive_intervals`` lists where ``f > 0`` along it (the ``D`` part)."""

    angle: float
    curve_radii: tuple[float, ...]
    positive_intervals: tuple[tuple[float, float], ...]
    full: bool = False

    def d_member(self, r: float) -> bool:
        return any(lo < r < hi for lo, hi in self.positive_intervals)

    def to_json(self) -> dict:
        return {
            "angle": self.angle,
            "curve_radii": list(self.curve_radii),
            "positive_intervals": [[lo, _inf_to_json(hi)] for lo, hi in self.positive_intervals],
            "full": self.full,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExceptionalRay":
        return cls(
            obj["angle"],
            tuple(obj["curve_radii"]),
            tuple((lo, math.inf if hi is None else hi) for lo, hi in obj["positive_intervals"]),
            obj["full"],
        )


@dataclass(frozen=True)
class PolarDecomposition:
    poly: str
    arcs: tuple[PolarArc, ...]
    z_intervals: tuple[tuple[float, float], ...]
    exceptional_rays: tuple[ExceptionalRay, ...]
    origin_sign: int
    working_radius: float
    critical_angles: tuple[float, ...] = field(default=())

    @property
    def important_arcs(self) -> tuple[PolarArc, ...]:
        return tuple(a for a in self.arcs if a.important)

    def in_z(self, theta: float) -> bool:
        return any(a < theta < b for a, b in self.z_intervals)

    def to_json(self) -> dict:
        return {
            "poly": self.poly,
            "origin_sign": self.origin_sign,
            "working_radius": self.working_radius,
            "critical_angles": list(self.critical_angles),
            "z_intervals": [list(z) for z in self.z_intervals],
            "arcs": [a.to_json() for a in self.arcs],
            "exceptional_rays": [r.to_json() for r in self.exceptional_rays],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PolarDecomposition":
        return cls(
            obj["poly"],
            tuple(PolarArc.from_json(a) for a in obj["arcs"]),
            tuple(tuple(z) for z in obj["z_intervals"]),
            tuple(ExceptionalRay.from_json(r) for r in obj["exceptional_rays"]),
            obj["origin_sign"],
            obj["working_radius"],
            tuple(obj["critical_angles"]),
        )


# --- exact critical angles ---------------------------------------------------


def _angle(t: float) -> float:
    return (2.0 * math.atan(t)) % TWO_PI


def _tan_half(theta: float) -> float:
    return math.tan(theta / 2.0)


def _rational(v: float) -> sympy.Rational:
    q = Fraction(v).limit_denominator(10**12)
    return sympy.Rational(q.numerator, q.denominator)


def _swept(f: BivarPoly) -> tuple[sympy.Poly, int]:
    """``q(t, lam) = (1 + t^2)^D f(lam cis theta) / lam^m`` with ``m`` the lowest degree of ``f``."""
    d, m = f.degree, f.lowest_degree()
    one = 1 + _T**2
    cx, sy = 1 - _T**2, 2 * _T
    q = sympy.Integer(0)
    for k in range(m, d + 1):
        part = f.homogeneous_part(k)
        if part.is_zero():
            continue
        fk = sum(
            (sympy.Rational(c.numerator, c.denominator) * cx**i * sy**j for (i, j), c in part.items()),
            sympy.Integer(0),
        )
        q += _LAM ** (k - m) * sympy.expand(fk * one ** (d - k))
    return sympy.Poly(q, _T, _LAM, domain="QQ"), m


def _critical_t_factors(q: sympy.Poly, check_radial: bool) -> list[sympy.Poly]:
    lam_deg = q.degree(_LAM)
    polys = []
    qe = q.as_expr()
    if lam_deg >= 1:
        disc = sympy.resultant(qe, sympy.diff(qe, _LAM), _LAM)
        if sympy.expand(disc) == 0:
            raise NotGeneric("the curve has a repeated component")
        polys.append(disc)
        if check_radial:
            rad = sympy.resultant(qe, sympy.diff(qe, _T), _LAM)
            if sympy.expand(rad) == 0:
                raise NotGeneric("the radius is stationary along a whole branch (circle about the origin)")
            polys.append(rad)
    coeffs = sympy.Poly(qe, _LAM).all_coeffs()
    polys.append(coeffs[0])  # leading: a root escapes to infinity
    polys.append(coeffs[-1])  # trailing: a root reaches the origin
    factors: dict = {}
    for p in polys:
        p = sympy.Poly(p, _T, domain="QQ")
        if p.degree() < 1:
            continue
        for fac, _ in p.factor_list()[1]:
            if fac.degree() >= 1:
                fac = fac.monic()
                factors[fac.as_expr()] = fac
    return list(factors.values())


def _critical_angles(factors: list[sympy.Poly], tolerance: float) -> list[float]:
    angles = set(_AXES)
    eps = sympy.Rational(1, 10**15)
    for fac in factors:
        if fac.degree() == 1 and any(fac.eval(v) == 0 for v in (0, 1, -1)):
            continue
        for (a, b), _ in fac.intervals(eps=eps):
            angles.add(_angle(float((a + b) / 2)))
    out = sorted(angles)
    gaps = np.diff(out + [out[0] + TWO_PI])
    if np.min(gaps) < tolerance:
        k = int(np.argmin(gaps))
        raise SingularityCluster(
            f"critical angles {out[k]:.15g} and {out[(k + 1) % len(out)]:.15g} are closer than {tolerance}"
        )
    return out


# --- tracing -------------------------------------------------------------------


class _Tracer:
    def __init__(self, f: BivarPoly, step: float, tol: float):
        self.fp = _FloatPoly(f)
        self.fx = _FloatPoly(f.diff_x())
        self.fy = _FloatPoly(f.diff_y())
        self.step = step
        self.tol = tol

    def slope(self, theta: float, r: float) -> float:
        c, s = math.cos(theta), math.sin(theta)
        gx, gy = self.fx(r * c, r * s), self.fy(r * c, r * s)
        radial = c * gx + s * gy
        return -r * (c * gy - s * gx) / radial

    def _count_below(self, theta: float, r: float) -> int:
        return sum(1 for z in _positive_roots(self.fp.ray(theta)) if z < r * (1 - 1e-7))

    def march(self, theta0: float, r0: float, stop: float, rank: int, r_cap: float, r_floor: float):
        """Samples from ``theta0`` (exclusive) towards ``stop``, plus the reason tracing ended."""
        direction = 1.0 if stop > theta0 else -1.0
        out: list[tuple[float, float]] = []
        theta, r, h = theta0, r0, self.step
        while True:
            remaining = abs(stop - theta)
            if remaining <= 1e-15:
                return out, "finite"
            if remaining <= h:
                h = remaining
            elif remaining < 2 * h:
                h = remaining / 2
            nxt = theta + direction * h
            pred = r + direction * h * self.slope(theta, r)
            r_new, ok = (_newton(self.fp.ray(nxt), pred, self.tol) if pred > 0 else (pred, False))
            if ok and r_new > 0 and abs(r_new - pred) <= 1e-3 * max(r_new, r):
                if self._count_below(nxt, r_new) != rank:
                    ok = False
            else:
                ok = False
            if not ok:
                h /= 2
                if h < 1e-14:
                    raise TracerStalled(f"step underflow near theta={theta:.15g}, r={r:.15g}")
                continue
            theta, r = nxt, r_new
            out.append((theta, r))
            if r > r_cap:
                return out, "inf"
            if r < r_floor:
                return out, "zero"
            h = min(h * 1.6, self.step)


def _strictly_monotone(samples: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Drop samples that do not advance (float ties); raise on a genuine reversal."""
    inc = samples[-1][1] > samples[0][1]
    kept = [samples[0]]
    for th, r in samples[1:]:
        last = kept[-1][1]
        if (r > last) if inc else (r < last):
            kept.append((th, r))
        elif abs(r - last) > 1e-9 * max(abs(last), 1.0):
            raise TracerStalled(f"branch is not monotone near theta={th:.15g}")
    return kept


def _probe_pair(f: BivarPoly, x: float, y: float, start: float = 2.0**-12, max_halvings: int = 40):
    """Signs of ``f`` at ``(1 -+ eps)`` times the point, for ``eps`` small enough to be stable."""
    prev = None
    eps = start
    px, py = Fraction(x), Fraction(y)
    for _ in range(max_halvings):
        e = Fraction(eps)
        pair = (_sign(f((1 - e) * px, (1 - e) * py)), _sign(f((1 + e) * px, (1 + e) * py)))
        if pair == prev and 0 not in pair:
            return pair
        prev = pair
        eps /= 2
    raise TracerStalled(f"sign probe at ({x:.6g}, {y:.6g}) never stabilized")


def _eta(f: BivarPoly, theta: float, scale: float) -> int:
    """Sign of ``f`` at ``delta cis theta`` for all small ``delta``."""
    c, s = Fraction(math.cos(theta)), Fraction(math.sin(theta))
    prev = None
    delta = Fraction(min(1.0, scale)) * Fraction(1, 2**12)
    for _ in range(60):
        v = _sign(f(delta * c, delta * s))
        if v == prev and v != 0:
            return v
        prev = v
        delta /= 2
    raise TracerStalled(f"cone probe at theta={theta:.6g} never stabilized")


def _exceptional(f: BivarPoly, fp: _FloatPoly, theta: float, origin_tangent: bool) -> ExceptionalRay | None:
    if theta in _AXES:
        vx, vy = _AXES[theta]
        coeffs = np.array([float(c) for c in f.along_ray(vx, vy)])
    else:
        coeffs = fp.ray(theta)
        vx, vy = math.cos(theta), math.sin(theta)
    if np.max(np.abs(coeffs)) <= 1e-12 * fp.scale:
        return ExceptionalRay(theta, (), (), True)
    radii = _positive_roots(coeffs)
    if not radii and not origin_tangent:
        return None
    bounds = [0.0] + radii + [math.inf]
    pos = []
    for lo, hi in zip(bounds, bounds[1:]):
        mid = 2 * lo + 1 if math.isinf(hi) else (lo + hi) / 2
        if f(Fraction(mid * vx), Fraction(mid * vy)) > 0:
            pos.append((lo, hi))
    # merge across curve points where the sign does not change (tangency)
    merged: list[tuple[float, float]] = []
    for lo, hi in pos:
        if merged and merged[-1][1] == lo:
            merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return ExceptionalRay(theta, tuple(radii), tuple(merged), False)


def polar_decompose(f: BivarPoly, tracer_step: float = 0.05, tolerance: float = 1e-10) -> PolarDecomposition:
    """Decompose ``{f > 0}`` into cone, arc regions and exceptional rays.

    Accepts generic square-free ``f``.  Lines through the origin and circle
    forms without real points are accepted as well; their decomposition has
    no arcs.  A circle form with a real circle raises ``NotGeneric``.
    """
    if not (tracer_step > 0 and tolerance > 0):
        raise ValueError("tracer_step and tolerance must be positive")
    kind = classify(f)
    if kind.kind is FormKind.CIRCLE and kind.b * kind.a < 0:
        raise NotGeneric(f"{f} is a circle about the origin")
    if not is_square_free(f):
        raise NotGeneric(f"{f} is not square-free")

    q, m = _swept(f)
    factors = _critical_t_factors(q, check_radial=kind.kind is not FormKind.CIRCLE)
    angles = _critical_angles(factors, tolerance)
    fp = _FloatPoly(f)
    tracer = _Tracer(f, tracer_step, tolerance * 1e-3)
    f0 = f.coeff(0, 0)
    low = f.homogeneous_part(m)
    fl = _FloatPoly(low)

    rays = []
    for th in angles:
        tangent = f0 == 0 and abs(fl(math.cos(th), math.sin(th))) <= 1e-12 * fl.scale
        if th in _AXES and f0 == 0:
            tangent = low(*_AXES[th]) == 0
        ray = _exceptional(f, fp, th, tangent)
        if ray is not None:
            rays.append(ray)
    feature = max((r for ray in rays for r in ray.curve_radii), default=0.0)
    working = 2.0 * (1.0 + feature)

    bounds = list(angles) + [TWO_PI]
    margin = max(1e3 * tolerance, 1e-9)
    arcs: list[PolarArc] = []
    z_parts: list[tuple[float, float]] = []
    for a, b in zip(bounds, bounds[1:]):
        mid = 0.5 * (a + b)
        t_mid = _rational(_tan_half(mid))
        theta_mid = _angle(float(t_mid))
        if not a < theta_mid < b:
            theta_mid = mid
            t_mid = _rational(_tan_half(mid))
        lam_poly = sympy.Poly(q.as_expr().subs(_T, t_mid), _LAM, domain="QQ")
        starts = []
        if lam_poly.degree() >= 1:
            for (lo, hi), mult in lam_poly.intervals(eps=sympy.Rational(1, 10**12), inf=0):
                if mult != 1:
                    raise NotGeneric(f"repeated radius at theta={theta_mid:.6g}")
                if hi > 0:
                    starts.append(float((lo + hi) / 2))
        starts.sort()
        coeffs = fp.ray(theta_mid)
        starts = [_newton(coeffs, r0, tracer.tol)[0] for r0 in starts]

        scale = starts[0] if starts else 1.0
        eta = _sign(f0) if f0 != 0 else _eta(f, theta_mid, scale)
        if eta > 0:
            z_parts.append((a, b))

        for rank, r0 in enumerate(starts):
            left, why_l = tracer.march(theta_mid, r0, a + margin, rank, 50 * working, 1e-9 * working)
            right, why_r = tracer.march(theta_mid, r0, b - margin, rank, 50 * working, 1e-9 * working)
            samples = _strictly_monotone(left[::-1] + [(theta_mid, r0)] + right)
            c_minus, c_plus = _probe_pair(f, r0 * math.cos(theta_mid), r0 * math.sin(theta_mid))
            arcs.append(PolarArc((a, b), tuple(samples), rank, len(starts), c_minus, c_plus, (why_l, why_r)))

    z: list[tuple[float, float]] = []
    for a, b in z_parts:
        # an interior boundary survives only when it is an exceptional ray
        if z and z[-1][1] == a and not any(r.angle == a for r in rays):
            z[-1] = (z[-1][0], b)
        else:
            z.append((a, b))
    return PolarDecomposition(
        str(f), tuple(arcs), tuple(z), tuple(rays), _sign(f0), working, tuple(angles)
    )


# --- verification ---------------------------------------------------------------


def rhs_member(dec: PolarDecomposition, x: float, y: float, fp: _FloatPoly | None = None, ray_tol: float = 0.0) -> bool:
    """Membership of ``(x, y)`` in the reconstructed set."""
    r = math.hypot(x, y)
    if r == 0.0:
        return dec.origin_sign > 0
    theta = math.atan2(y, x) % TWO_PI
    for ray in dec.exceptional_rays:
        d = abs(theta - ray.angle)
        if min(d, TWO_PI - d) <= ray_tol:
            return ray.d_member(r)
    member = dec.in_z(theta)
    for arc in dec.important_arcs:
        if arc.contains(theta):
            g = arc.radius(theta, fp)
            inside = r >= g if arc.c_minus > 0 else r > g
            member ^= inside
    return member


@dataclass
class VerificationReport:
    checked: int
    agreed: int
    ray_checked: int
    ray_agreed: int
    mismatches: list = field(default_factory=list)

    @property
    def ratio(self) -> float:
        total = self.checked + self.ray_checked
        return (self.agreed + self.ray_agreed) / total if total else 1.0

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "agreed": self.agreed,
            "ray_checked": self.ray_checked,
            "ray_agreed": self.ray_agreed,
            "ratio": self.ratio,
            "mismatches": [[x, y, t] for x, y, t in self.mismatches],
        }


def verify_report(
    f: BivarPoly,
    dec: PolarDecomposition,
    samples: int = 10_000,
    seed: int = 0,
    tube: float = 1e-6,
    ray_samples: int = 32,
) -> VerificationReport:
    """Compare the reconstruction against the exact sign of ``f`` on random points.

    Points are drawn uniformly from the working disk; points within ``tube``
    (relative to the disk radius) of the curve, of a ray of ``C`` or of a
    curve point on such a ray are redrawn.  Each ray of ``C`` is checked
    separately against its ``D`` intervals.
    """
    rng = np.random.default_rng(seed)
    fp = _FloatPoly(f)
    gx, gy = _FloatPoly(f.diff_x()), _FloatPoly(f.diff_y())
    R = dec.working_radius
    ray_angles = np.array([ray.angle for ray in dec.exceptional_rays])
    b_points = [
        (rr * math.cos(ray.angle), rr * math.sin(ray.angle)) for ray in dec.exceptional_rays for rr in ray.curve_radii
    ]
    rep = VerificationReport(0, 0, 0, 0)
    while rep.checked < samples:
        rad = R * math.sqrt(rng.random())
        th = TWO_PI * rng.random()
        x, y = rad * math.cos(th), rad * math.sin(th)
        if rad < tube * R:
            continue
        th = math.atan2(y, x) % TWO_PI
        if ray_angles.size:
            d = np.abs(ray_angles - th)
            if np.min(np.minimum(d, TWO_PI - d)) * rad < tube * R:
                continue
        if any(math.hypot(x - bx, y - by) < 1e-3 * R for bx, by in b_points):
            continue
        grad = math.hypot(gx(x, y), gy(x, y))
        if abs(fp(x, y)) < tube * R * grad:
            continue
        truth = f(Fraction(x), Fraction(y)) > 0
        got = rhs_member(dec, x, y, fp)
        rep.checked += 1
        if truth == got:
            rep.agreed += 1
        elif len(rep.mismatches) < 20:
            rep.mismatches.append((x, y, truth))
    for ray in dec.exceptional_rays:
        if ray.full:
            continue
        c, s = math.cos(ray.angle), math.sin(ray.angle)
        if ray.angle in _AXES:
            c, s = _AXES[ray.angle]
        for lam in np.linspace(0, R, ray_samples + 2)[1:-1]:
            if any(abs(lam - rr) < 1e-3 * R for rr in ray.curve_radii):
                continue
            truth = f(Fraction(float(lam)) * Fraction(c), Fraction(float(lam)) * Fraction(s)) > 0
            rep.ray_checked += 1
            rep.ray_agreed += truth == ray.d_member(float(lam))
    return rep


def verify_decomposition(f: BivarPoly, dec: PolarDecomposition, samples: int = 10_000, seed: int = 0) -> float:
    """Fraction of sampled points on which the reconstruction matches ``f > 0``."""
    return verify_report(f, dec, samples, seed).ratio


def semigroup_witness_arc(arc: PolarArc, pair_samples: int = 1000, seed: int = 0, f: BivarPoly | None = None) -> bool:
    """Sample ``u, v`` in the arc region and check that ``u + v`` stays in it."""
    lo, hi = arc.samples[0][0], arc.samples[-1][0]
    if len(arc.samples) < 2 or hi <= lo:
        return True
    fp = _FloatPoly(f) if f is not None else None
    rng = np.random.default_rng(seed)
    for _ in range(pair_samples):
        pts = []
        for _ in range(2):
            th = lo + (hi - lo) * rng.random()
            lam = 1.0 + 3.0 * rng.random()
            g = arc.radius(th, fp)
            pts.append((lam * g * math.cos(th), lam * g * math.sin(th)))
        sx, sy = pts[0][0] + pts[1][0], pts[0][1] + pts[1][1]
        phi = math.atan2(sy, sx) % TWO_PI
        if not arc.contains(phi):
            return False
        g = arc.radius(phi, fp)
        if math.hypot(sx, sy) < g * (1 - 1e-9):
            return False
    return True
