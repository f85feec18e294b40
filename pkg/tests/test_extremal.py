import math
from fractions import Fraction

import mpmath
import pytest

from skewlab.certificates import certificate, seven_lines, three_cycle
from skewlab.extremal import (
    BundleParams,
    bundle,
    lex_power_trans,
    line_exponent,
    milnor_thom_log2,
    mt_bound,
    mt_threshold,
    search_low_trans,
)
from skewlab.lines3d import crossing_tournament, first_non_skew
from skewlab.tourney import Tournament, lexicographic_power, trans_exact

# Smallest n with 4n*log2(3e(n-1)/2) < n(n-1)/2, found beforehand with a
# 60-digit decimal.Decimal scan (independent of mpmath): n = 65 gives +7.19,
# n = 66 gives -19.79.
MT_THRESHOLD = 66


def test_three_cycle_certificate():
    t = crossing_tournament(three_cycle())
    assert t == Tournament(t.adjacency) and trans_exact(t)[0] == 2


def test_bundle_levels_zero_is_identity():
    base = three_cycle()
    assert bundle(base, BundleParams(levels=0)) == base


@pytest.mark.parametrize("levels, size, trans", [(1, 9, 4), (2, 27, 8)])
def test_bundle_three_cycle(levels, size, trans):
    base = three_cycle()
    out = bundle(base, BundleParams(levels=levels))
    assert len(out) == size
    assert first_non_skew(out) is None
    t = crossing_tournament(out)
    assert t == lexicographic_power(crossing_tournament(base), levels)
    assert trans_exact(t)[0] == trans == lex_power_trans(2, levels)


def test_bundle_retries_with_coarse_shrink():
    # a huge first shrink breaks the product structure; halving must recover it
    out = bundle(seven_lines(), BundleParams(shrink=Fraction(9, 10), levels=1))
    assert crossing_tournament(out) == lexicographic_power(crossing_tournament(seven_lines()), 1)


def test_lex_power_trans():
    assert lex_power_trans(2, 1) == 4
    assert lex_power_trans(5, 0) == 5
    assert lex_power_trans(3, 1) == 9
    with pytest.raises(ValueError):
        lex_power_trans(0, 1)


def test_seven_line_certificate_replay():
    config, meta = certificate("seven_lines")
    assert len(config) == 7 and first_non_skew(config) is None
    size, w = trans_exact(crossing_tournament(config))
    assert size == meta["trans"] == 3 and meta["verified"]
    assert abs(line_exponent(7, 3) - 0.564575) < 1e-6


def test_seven_line_bundle_has_trans_nine():
    out = bundle(seven_lines(), BundleParams(levels=1))
    assert len(out) == 49
    assert trans_exact(crossing_tournament(out))[0] == lex_power_trans(3, 1) == 9


def test_mt_bound_small():
    r = mt_bound(2)
    assert r.log2_total == 1
    assert r.realizable_fraction_log2 > 0


def test_mt_bound_n100_vanishing():
    r = mt_bound(100)
    assert r.log2_total == 4950
    assert r.realizable_fraction_log2 < 0
    # 400 * log2(3e*99/2) computed with the stdlib as a cross-check
    expected = 400 * math.log2(3 * math.e * 99 / 2)
    assert abs(float(r.log2_mt_bound) - expected) < 1e-9


def test_mt_general_calculator_specializes():
    n = 17
    general = milnor_thom_log2(3, n * (n - 1) // 2, 4 * n, precision_bits=128)
    special = mt_bound(n, precision_bits=128).log2_mt_bound
    assert abs(general - special) < mpmath.mpf(2) ** -100


def test_mt_threshold():
    t = mt_threshold(precision_bits=53)
    assert t == MT_THRESHOLD == mt_threshold(precision_bits=106)
    assert 50 <= t <= 80
    assert mt_bound(t - 1).realizable_fraction_log2 >= 0
    assert mt_bound(t).realizable_fraction_log2 < 0


def test_mt_fraction_decreasing_past_threshold():
    vals = [mt_bound(n).realizable_fraction_log2 for n in range(MT_THRESHOLD, MT_THRESHOLD + 51)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("n, target", [(2, 2), (3, 2)])
def test_search_small(n, target):
    r = search_low_trans(n, target, budget=4, base_seed=0, workers=1)
    assert r.success and r.best_trans == target
    assert trans_exact(crossing_tournament(r.best_config))[0] == r.best_trans


def test_search_seven_lines_pinned_seed():
    r = search_low_trans(7, 3, budget=16, base_seed=7, workers=1)
    assert r.success and r.seeds_tried <= 16
    assert first_non_skew(r.best_config) is None
    assert trans_exact(crossing_tournament(r.best_config))[0] == 3
    assert r.best_config.lines == seven_lines().lines


def test_search_independent_of_worker_count():
    a = search_low_trans(7, 3, budget=8, base_seed=7, workers=1)
    b = search_low_trans(7, 3, budget=8, base_seed=7, workers=3)
    assert a.best_config.lines == b.best_config.lines
    assert (a.best_restart, a.seeds_tried) == (b.best_restart, b.seeds_tried)


def test_search_budget_exhaustion_is_a_report():
    # 5 lines cannot have trans 2 (every 5-tournament has a transitive triple)
    r = search_low_trans(5, 2, budget=2, base_seed=1, steps=50, workers=1)
    assert not r.success and r.seeds_tried == 2 and r.best_trans >= 3
