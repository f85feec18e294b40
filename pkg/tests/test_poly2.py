import json
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from skewlab.poly2 import (
    BivarPoly,
    CheckFailed,
    FormKind,
    NotGeneric,
    NotIrreducible,
    PolarArc,
    PolarDecomposition,
    ZeroPolynomial,
    binomial_null_vector,
    classify,
    divides,
    exchange_matrix,
    form_from_vector,
    form_vector,
    poly,
    polar_decompose,
    radial_pairing,
    rhs_member,
    semigroup_witness_arc,
    spectral_checks,
    spectral_matrix,
    tangential_pairing,
    verify_decomposition,
    verify_report,
)
from skewlab.poly2.bivar import X, Y

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def homogeneous(d):
    return st.lists(small_q, min_size=d + 1, max_size=d + 1).map(
        lambda cs: BivarPoly({(d - k, k): c for k, c in enumerate(cs)})
    )


def polys(max_deg=4):
    mono = st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)).filter(lambda m: sum(m) <= max_deg)
    return st.dictionaries(mono, small_q, max_size=6).map(BivarPoly)


def sym(f: BivarPoly):
    return sympy.expand(f.to_sympy())


# --- text / arithmetic -----------------------------------------------------------


def test_text_format_round_trip():
    f = poly("1 x^2 + 2 y^2 + -1")
    assert str(f) == "1 x^2 + 2 y^2 + -1"
    assert poly(str(f)) == f
    assert poly("2x - 3y") == BivarPoly({(1, 0): 2, (0, 1): -3})
    assert poly("x*y - 1/2") == BivarPoly({(1, 1): 1, (0, 0): Fraction(-1, 2)})


@pytest.mark.parametrize("bad", ["", "x^", "x + + ", "2 z", "^2", "x +* y", "2 ** x", "*x", "x*"])
def test_parse_rejects_garbage(bad):
    with pytest.raises(ValueError):
        poly(bad)


@given(polys(), polys())
@settings(max_examples=60, deadline=None)
def test_arithmetic_matches_sympy(f, g):
    assert sym(f * g - g) == sympy.expand(sym(f) * sym(g) - sym(g))
    assert poly(str(f)) == f


# --- pairings ---------------------------------------------------------------------


def test_radial_examples():
    assert radial_pairing(poly("3x - 5y")) == poly("3x - 5y")
    assert radial_pairing(poly("x^2 + y^2 - 1")) == poly("2x^2 + 2y^2")
    assert radial_pairing(poly("x y - 1")) == poly("2 x y")


def test_tangential_examples():
    assert tangential_pairing(poly("x^2 + y^2")).is_zero()
    assert tangential_pairing(poly("3x - 5y")) == poly("-5x - 3y")
    assert tangential_pairing(poly("x y - 1")) == poly("x^2 - y^2")


@given(st.integers(1, 6).flatmap(lambda d: st.tuples(st.just(d), homogeneous(d))))
@settings(max_examples=80, deadline=None)
def test_euler_identity(dp):
    d, f = dp
    assert radial_pairing(f) == d * f


@given(polys())
@settings(max_examples=60, deadline=None)
def test_pairings_match_sympy(f):
    e = f.to_sympy()
    assert sym(radial_pairing(f)) == sympy.expand(X * sympy.diff(e, X) + Y * sympy.diff(e, Y))
    assert sym(tangential_pairing(f)) == sympy.expand(X * sympy.diff(e, Y) - Y * sympy.diff(e, X))


# --- division -----------------------------------------------------------------------


def test_divides_examples():
    ok, q = divides(poly("x + y"), poly("x^2 - y^2"))
    assert ok and q == poly("x - y")
    assert divides(poly("x y - 1"), poly("2 x y")) == (False, None)
    ok, q = divides(poly("x^3 - 7 y + 2"), BivarPoly())
    assert ok and q.is_zero()
    with pytest.raises(ZeroPolynomial):
        divides(BivarPoly(), poly("x"))


@given(polys(3), polys(3))
@settings(max_examples=80, deadline=None)
def test_divides_recovers_cofactor(f, g):
    if f.is_zero():
        return
    ok, q = divides(f, f * g)
    assert ok and q == g


@given(polys(3), polys(3), polys(2))
@settings(max_examples=80, deadline=None)
def test_divides_agrees_with_sympy(f, g, noise):
    if f.is_zero():
        return
    h = f * g + noise
    # with a single divisor the remainder vanishes iff f divides h, in any term order
    _, r = sympy.div(sym(h), sym(f), X, Y)
    assert divides(f, h)[0] == (sympy.expand(r) == 0)


# --- classification --------------------------------------------------------------------


def test_classify_suite():
    lin = classify(poly("2x - 3y"))
    assert lin.kind is FormKind.LINEAR and (lin.a, lin.b) == (2, -3) and lin.radial_divisible
    circ = classify(poly("x^2 + y^2 - 4"))
    assert circ.kind is FormKind.CIRCLE and (circ.a, circ.b) == (1, -4) and circ.tangential_divisible
    assert tangential_pairing(poly("x^2 + y^2 - 4")).is_zero()
    for text in ("x y - 1", "x^2 + 2 y^2 - 1"):
        c = classify(poly(text))
        assert c.kind is FormKind.GENERIC
        assert not c.radial_divisible and not c.tangential_divisible


def test_classify_errors():
    with pytest.raises(ZeroPolynomial):
        classify(BivarPoly())
    with pytest.raises(ValueError):
        classify(poly("7"))
    with pytest.raises(NotIrreducible):
        classify(poly("x y + x"))


@given(small_q.filter(bool), small_q)
@settings(max_examples=40, deadline=None)
def test_circle_forms_have_zero_tangential_pairing(a, b):
    f = BivarPoly({(2, 0): a, (0, 2): a, (0, 0): b})
    assert classify(f).kind is FormKind.CIRCLE
    assert tangential_pairing(f).is_zero()


@given(small_q, small_q)
@settings(max_examples=40, deadline=None)
def test_linear_forms_divide_radial(a, b):
    f = BivarPoly({(1, 0): a, (0, 1): b})
    if f.is_zero():
        return
    c = classify(f)
    assert c.kind is FormKind.LINEAR and divides(f, radial_pairing(f))[0]


# --- rotation matrix -----------------------------------------------------------------


def test_spectral_matrix_small():
    assert spectral_matrix(1).tolist() == [[0, 1], [-1, 0]]
    assert spectral_matrix(2).tolist() == [[0, 1, 0], [-2, 0, 2], [0, -1, 0]]
    m4 = spectral_matrix(4)
    assert np.diag(m4, 1).tolist() == [1, 2, 3, 4]
    assert np.diag(m4, -1).tolist() == [-4, -3, -2, -1]
    assert not np.diag(m4).any()


def test_spectral_d2_eigenvalues_and_null_vector():
    ev = np.linalg.eigvals(spectral_matrix(2).astype(float))
    assert np.allclose(ev.real, 0) and np.allclose(sorted(ev.imag), [-2, 0, 2])
    assert spectral_checks(2).null_vector == [1, 0, 1]
    assert form_from_vector([1, 0, 1], 2) == poly("x^2 + y^2")


def test_spectral_d1_d3_d4():
    r1 = spectral_checks(1)
    assert np.allclose(sorted(r1.eigenvalues.imag), [-1, 1])
    r3 = spectral_checks(3)
    assert r3.nullity == 0 and r3.determinant != 0
    assert r3.determinant == int(round(np.linalg.det(spectral_matrix(3).astype(float))))
    r4 = spectral_checks(4)
    assert r4.nullity == 1 and r4.null_vector == [1, 0, 2, 0, 1]
    assert form_from_vector(r4.null_vector, 4) == poly("x^2 + y^2") ** 2


@pytest.mark.parametrize("d", range(1, 21))
def test_spectral_checks_through_20(d):
    r = spectral_checks(d)
    assert r.max_abs_real < 1e-9
    assert r.nullity == (d % 2 == 0)
    # eigenvalues are i(d - 2k), k = 0..d
    assert np.allclose(sorted(r.eigenvalues.imag), sorted(d - 2 * k for k in range(d + 1)), atol=1e-8)
    if d % 2 == 0:
        assert r.null_vector == binomial_null_vector(d)
        half = poly("x^2 + y^2") ** (d // 2)
        assert form_from_vector(r.null_vector, d) == half


def test_spectral_checks_range():
    with pytest.raises(ValueError):
        spectral_checks(0)
    with pytest.raises(ValueError):
        spectral_checks(41)
    assert issubclass(CheckFailed, AssertionError)


@pytest.mark.parametrize("d", [1, 2, 3, 5, 8])
def test_spectral_action_is_tangential_pairing(d):
    rng = np.random.default_rng(d)
    m = spectral_matrix(d)
    for _ in range(100):
        vec = [int(v) for v in rng.integers(-9, 10, size=d + 1)]
        f = form_from_vector(vec, d)
        image = [sum(int(m[i, k]) * vec[k] for k in range(d + 1)) for i in range(d + 1)]
        assert form_from_vector(image, d) == tangential_pairing(f)
        assert form_vector(tangential_pairing(f), d) == image


@pytest.mark.parametrize("d", range(1, 16))
def test_exchange_anticommutes(d):
    m, j = spectral_matrix(d), exchange_matrix(d + 1)
    assert np.array_equal(m @ j, -(j @ m))


# --- polar decomposition -------------------------------------------------------------

CORPUS = {
    "ellipse": "x^2 + 2 y^2 - 1",
    "off_center_circle": "x^2 - 4x + y^2 + 3",
    "parabola": "y - x^2 - 1",
    "cubic": "y^2 - x^3 + x",
    "hyperbola": "x y - 1",
    "folium": "x^3 + y^3 - 3 x y",
    "line": "x + y",
    "empty": "-x^2 - y^2 - 1",
}


@pytest.fixture(scope="module")
def decompositions():
    return {name: polar_decompose(poly(text)) for name, text in CORPUS.items()}


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_decomposition_agreement(name, decompositions):
    f = poly(CORPUS[name])
    rep = verify_report(f, decompositions[name], samples=10_000, seed=11)
    assert rep.checked == 10_000
    assert rep.ratio == 1.0, rep.mismatches


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_arc_invariants(name, decompositions):
    dec = decompositions[name]
    f = poly(CORPUS[name])
    crit = set(dec.critical_angles) | {2 * math.pi}
    for arc in dec.arcs:
        a, b = arc.interval
        assert 0 < b - a <= math.pi / 2 + 1e-12
        assert a in crit and b in crit
        assert arc.is_strictly_monotone()
        assert arc.important == (arc.c_minus != arc.c_plus)
        for th, r in arc.samples:
            assert a < th < b
            x, y = r * math.cos(th), r * math.sin(th)
            gx, gy = f.diff_x().evalf(x, y), f.diff_y().evalf(x, y)
            assert abs(f.evalf(x, y)) <= 1e-8 * max(1.0, r) ** f.degree * max(1.0, math.hypot(gx, gy))
    zs = dec.z_intervals
    assert all(a < b for a, b in zs)
    assert all(z1[1] <= z2[0] for z1, z2 in zip(zs, zs[1:]))


def test_ellipse_arcs(decompositions):
    dec = decompositions["ellipse"]
    assert len(dec.arcs) == 4 and all(a.important for a in dec.arcs)
    assert sorted(a.interval for a in dec.arcs) == [
        (0.0, math.pi / 2),
        (math.pi / 2, math.pi),
        (math.pi, 3 * math.pi / 2),
        (3 * math.pi / 2, 2 * math.pi),
    ]
    # closed form of the ellipse in polar coordinates
    for arc in dec.arcs:
        for th, r in arc.samples:
            assert r == pytest.approx(1 / math.sqrt(math.cos(th) ** 2 + 2 * math.sin(th) ** 2), rel=1e-10)
    assert dec.z_intervals == () and dec.origin_sign == -1
    # inside is negative, outside positive
    assert all((a.c_minus, a.c_plus) == (-1, 1) for a in dec.arcs)
    assert {a.monotonicity for a in dec.arcs} == {"Increasing", "Decreasing"}


def test_off_center_circle_arcs(decompositions):
    dec = decompositions["off_center_circle"]
    # near and far pieces on each side of the x-axis; tangent rays at +-30 degrees
    assert len(dec.arcs) == 4 and all(a.important for a in dec.arcs)
    ends = sorted({e for a in dec.arcs for e in a.interval})
    assert ends[1] == pytest.approx(math.pi / 6, abs=1e-12)
    assert ends[-2] == pytest.approx(2 * math.pi - math.pi / 6, abs=1e-12)
    near = [a for a in dec.arcs if a.rank == 0]
    far = [a for a in dec.arcs if a.rank == 1]
    assert len(near) == len(far) == 2
    assert all((a.c_minus, a.c_plus) == (1, -1) for a in near)
    assert all((a.c_minus, a.c_plus) == (-1, 1) for a in far)
    assert dec.origin_sign == 1


def test_parabola_cone_is_empty(decompositions):
    dec = decompositions["parabola"]
    assert dec.z_intervals == () and dec.origin_sign == -1
    # arcs live only where rays reach the curve: between the two tangent rays
    lo = math.atan2(2, 1)
    for arc in dec.arcs:
        assert arc.interval[0] >= lo - 1e-12 and arc.interval[1] <= math.pi - lo + 1e-12


def test_line_and_empty_have_no_arcs(decompositions):
    line, empty = decompositions["line"], decompositions["empty"]
    assert line.arcs == () and empty.arcs == ()
    assert [tuple(round(v, 12) for v in z) for z in line.z_intervals] == [
        (0.0, round(3 * math.pi / 4, 12)),
        (round(7 * math.pi / 4, 12), round(2 * math.pi, 12)),
    ]
    assert all(r.full for r in line.exceptional_rays)
    assert empty.z_intervals == () and empty.exceptional_rays == ()
    assert not rhs_member(empty, 0.3, -0.2)


def test_exceptional_ray_uses_d():
    # on the x-axis the cubic has curve points at 0 and 1 and is positive in (0, 1)
    f = poly("y^2 - x^3 + x")
    dec = polar_decompose(f)
    ray = next(r for r in dec.exceptional_rays if r.angle == 0.0)
    assert ray.curve_radii == (1.0,)
    assert ray.positive_intervals == ((0.0, 1.0),)
    assert rhs_member(dec, 0.5, 0.0) and not rhs_member(dec, 2.0, 0.0)


def test_decomposition_json_round_trip(decompositions):
    for dec in decompositions.values():
        text = json.dumps(dec.to_json(), sort_keys=True)
        back = PolarDecomposition.from_json(json.loads(text))
        assert back == dec
        assert json.dumps(back.to_json(), sort_keys=True) == text


def test_decompose_rejects_special_and_non_square_free():
    with pytest.raises(NotGeneric):
        polar_decompose(poly("x^2 + y^2 - 4"))
    with pytest.raises(NotGeneric):
        polar_decompose(poly("x^2 + 2 y^2 - 1") ** 2)
    with pytest.raises(ValueError):
        polar_decompose(poly("x y - 1"), tracer_step=0)


def test_verify_detects_wrong_decomposition(decompositions):
    f = poly(CORPUS["ellipse"])
    dec = decompositions["ellipse"]
    dropped = PolarDecomposition(
        dec.poly, dec.arcs[1:], dec.z_intervals, dec.exceptional_rays, dec.origin_sign,
        dec.working_radius, dec.critical_angles,
    )
    assert verify_decomposition(f, dropped, samples=2000, seed=3) < 0.9


# --- semigroup closure of arc regions --------------------------------------------------


@pytest.mark.parametrize("name", ["ellipse", "off_center_circle", "parabola", "cubic", "hyperbola", "folium"])
def test_important_arcs_close_under_addition(name, decompositions):
    f = poly(CORPUS[name])
    for arc in decompositions[name].important_arcs:
        assert semigroup_witness_arc(arc, 1000, seed=5, f=f)


def test_degenerate_arc_is_vacuously_closed():
    arc = PolarArc((0.5, 0.5), ((0.5, 1.0),))
    assert semigroup_witness_arc(arc, 100, seed=0)


def test_non_monotone_fixture_fails_closure():
    ths = np.linspace(0.01, math.pi / 2 - 0.01, 200)
    hump = tuple((float(t), float(1 + 4 * math.sin(2 * t))) for t in ths)
    arc = PolarArc((0.0, math.pi / 2), hump)
    assert not arc.is_strictly_monotone()
    assert not semigroup_witness_arc(arc, 1000, seed=0)
