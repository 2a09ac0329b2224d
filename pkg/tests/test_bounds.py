from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsrepair import bounds


def test_gf8_two_parities():
    rep = bounds.integral_lower_bound(8, 2, 3, 2)
    assert rep.integral_bound_subsymbols == 14
    assert rep.b_ave_floor == rep.b_ave_ceil == 2 and rep.ell == 7


def test_facebook_parameters():
    rep = bounds.integral_lower_bound(14, 16, 2, 4)
    assert rep.ell == 2
    assert rep.integral_bound_subsymbols == 11 and rep.integral_bound_bits == 44
    assert rep.fractional_bound_bits_ceil == 28
    assert 27.2 < rep.fractional_bound_bits < 27.3


def test_budget_exact():
    assert bounds.budget(14, 16, 2, 4) == Fraction(3 * 255 + 13, 256)


@pytest.mark.parametrize("q,t", [(2, 3), (2, 4), (3, 2), (4, 3), (2, 8), (16, 2)])
def test_full_length_power_redundancy(q, t):
    n = q**t
    for s in range(1, t):
        rep = bounds.integral_lower_bound(n, q, t, q**s)
        assert rep.integral_bound_subsymbols == (n - 1) * (t - s)
        assert math.isclose(rep.fractional_bound_bits, rep.integral_bound_bits, rel_tol=1e-12)


def test_single_helper():
    for q, t in [(2, 3), (3, 2)]:
        for r in (1,):
            L = bounds.budget(2, q, t, r)
            b = next(b for b in range(t + 1) if Fraction(1, q**b) <= L)
            assert bounds.integral_lower_bound(2, q, t, r).integral_bound_subsymbols == b


def test_out_of_range():
    with pytest.raises(bounds.BoundError):
        bounds.integral_lower_bound(10, 2, 3, 2)
    with pytest.raises(bounds.BoundError):
        bounds.integral_lower_bound(8, 2, 3, 8)


@pytest.mark.parametrize("q,t", [(2, 3), (3, 2), (2, 4)])
def test_enumeration_agrees_with_dp(q, t):
    table = bounds.OccupancyTable(q, t)
    for n in range(2, q**t + 1):
        for r in range(1, n):
            assert bounds.enumerate_optima(n, q, t, r)[0] == table.minimum(n, r)


@pytest.mark.parametrize("q,t", [(2, 3), (3, 2), (4, 2), (2, 4)])
def test_balanced_optimum_exists(q, t):
    for n in range(2, q**t + 1):
        for r in range(1, n):
            _, optima = bounds.enumerate_optima(n, q, t, r)
            support = [[b for b, c in enumerate(occ) if c] for occ in optima]
            assert any(max(s) - min(s) <= 1 for s in support)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([(2, 3), (2, 4), (3, 2), (4, 2), (2, 6), (5, 2)]), st.data())
def test_monotone_and_above_fractional(qt, data):
    q, t = qt
    n = data.draw(st.integers(3, q**t))
    r = data.draw(st.integers(1, n - 2))
    here = bounds.integral_lower_bound(n, q, t, r)
    assert here.integral_bound_subsymbols >= bounds.integral_lower_bound(n, q, t, r + 1).integral_bound_subsymbols
    assert here.integral_bound_subsymbols >= bounds.integral_lower_bound(n - 1, q, t, r).integral_bound_subsymbols
    assert here.integral_bound_bits >= here.fractional_bound_bits - 1e-9


def test_gap_grows_with_base_order():
    # GF(256) with B = GF(2), GF(4), GF(16); RS(14, 10)
    gaps = []
    for q, t in [(2, 8), (4, 4), (16, 2)]:
        rep = bounds.integral_lower_bound(14, q, t, 4)
        gaps.append(rep.integral_bound_bits - rep.fractional_bound_bits)
    assert gaps == sorted(gaps) and gaps[-1] > gaps[0]


def test_enumeration_cap():
    with pytest.raises(bounds.BoundError):
        bounds.enumerate_optima(256, 2, 8, 16, cap=1000)
    assert bounds.brute_force_min_bandwidth(256, 2, 8, 16) == 255 * 4


def test_report_json():
    obj = bounds.integral_lower_bound(14, 16, 2, 4).to_json()
    assert obj["L"] == "389/128" and obj["integral_bound_subsymbols"] == 11
