import itertools

import numpy as np
import pytest

from cmobench.core import make_rng
from cmobench.stats import (
    A12Band,
    Orientation,
    _exact_p_two_sided,
    _normal_p_two_sided,
    _signed_ranks,
    a12,
    a12_band,
    median_iqr,
    rank_sum_p,
    wilcoxon_p,
    wilcoxon_signed_rank,
)


def _enumerate_exact_p(diffs):
    """Oracle: exact two-sided p over all 2^n sign assignments."""
    d = np.asarray([v for v in diffs if v != 0.0], dtype=float)
    ranks, pos = _signed_ranks(d)
    w_obs = ranks[pos].sum()
    total = ranks.sum()
    ws = []
    for signs in itertools.product([0, 1], repeat=len(d)):
        ws.append(sum(r for r, s in zip(ranks, signs) if s))
    ws = np.asarray(ws)
    lo = np.mean(ws <= w_obs + 1e-12)
    hi = np.mean(ws >= w_obs - 1e-12)
    return min(1.0, 2.0 * min(lo, hi))


def test_equal_samples_verdict_equals():
    x = np.arange(10.0)
    assert wilcoxon_signed_rank(x, x.copy()) == "="


def test_unit_shift_31_seeds_significant():
    y = np.linspace(0.0, 3.0, 31)
    x = y + 1.0
    p, w_plus, w_minus, n = wilcoxon_p(x, y)
    assert n == 31 and w_plus == 31 * 32 / 2 and w_minus == 0.0
    assert p < 0.001
    assert wilcoxon_signed_rank(x, y, orientation=Orientation.LOWER_BETTER) == "-"
    assert wilcoxon_signed_rank(x, y, orientation=Orientation.HIGHER_BETTER) == "+"


def test_five_positive_differences_not_significant():
    # minimal exact two-sided p is 2/32 = 0.0625 > 0.05
    y = np.zeros(5)
    x = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    p, *_ = wilcoxon_p(x, y)
    assert p == pytest.approx(0.0625)
    assert wilcoxon_signed_rank(x, y) == "="


def test_exact_branch_matches_full_enumeration():
    rng = make_rng(7)
    for n in range(2, 13):
        for _ in range(8):
            x = rng.integers(0, 6, n).astype(float)
            y = rng.integers(0, 6, n).astype(float)
            d = x - y
            if np.all(d == 0):
                continue
            p, *_ = wilcoxon_p(x, y)
            assert p == pytest.approx(_enumerate_exact_p(d), abs=1e-12)


def test_exact_and_normal_agree_near_alpha_at_branch_limit():
    # no-ties samples of size 25 around p = 0.05: the two branches must give
    # the same verdict everywhere; with the continuity correction in place
    # their p-values settle within 2e-3 (1.24e-3 at the boundary itself)
    n = 25
    for w_target in range(80, 100):
        d = -np.arange(1.0, n + 1)
        total = 0
        for r in range(n, 0, -1):
            if total + r <= w_target:
                d[r - 1] = r
                total += r
        ranks, pos = _signed_ranks(d)
        w_plus = ranks[pos].sum()
        p_exact = _exact_p_two_sided(ranks, w_plus)
        p_norm = _normal_p_two_sided(ranks, w_plus)
        assert (p_exact < 0.05) == (p_norm < 0.05)
        if 0.04 <= p_exact <= 0.06:
            assert abs(p_exact - p_norm) < 2e-3


def test_zero_differences_dropped():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    y = np.array([1.0, 2.0, 0.0, 1.0])
    p, w_plus, w_minus, n = wilcoxon_p(x, y)
    assert n == 2


def test_verdict_swaps_consistently(rng):
    for _ in range(50):
        x = rng.random(11)
        y = rng.random(11)
        v1 = wilcoxon_signed_rank(x, y)
        v2 = wilcoxon_signed_rank(y, x)
        assert {"+": "-", "-": "+", "=": "="}[v1] == v2


def test_rank_sum_flags_strong_shift():
    x = np.arange(20.0)
    y = x + 30.0
    assert rank_sum_p(x, y) < 0.001
    assert rank_sum_p(x, x.copy()) > 0.9


# ---------------------------------------------------------------------------
# A12
# ---------------------------------------------------------------------------

def test_a12_identical_constant_samples():
    value, band = a12(np.ones(10), np.ones(10))
    assert value == 0.5 and band is A12Band.EQUAL


def test_a12_total_separation():
    value, band = a12(np.full(5, 2.0), np.zeros(5))
    assert value == 1.0 and band is A12Band.LARGE


def test_a12_banding_boundaries():
    assert a12_band(0.5599999) is A12Band.EQUAL
    assert a12_band(0.56) is A12Band.SMALL
    assert a12_band(0.6399999) is A12Band.SMALL
    assert a12_band(0.64) is A12Band.MEDIUM
    assert a12_band(0.7099999) is A12Band.MEDIUM
    assert a12_band(0.71) is A12Band.LARGE
    # bands are symmetric around 0.5
    assert a12_band(0.45) is A12Band.EQUAL
    assert a12_band(0.44) is A12Band.SMALL
    assert a12_band(0.29) is A12Band.LARGE


def test_a12_exact_band_samples():
    y = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    # 15 of 25 pairs strictly greater -> 0.60, the small-band example
    value, band = a12(y + 0.5, y)
    assert value == pytest.approx(0.6)
    assert band is A12Band.SMALL
    # 14 of 25 -> 0.56, the lower small-band edge
    x = np.array([0.5, 1.5, 2.5, 3.5, 3.6])
    value, band = a12(x, y)
    assert value == pytest.approx(0.56)
    assert band is A12Band.SMALL


def test_a12_complement_identity(rng):
    for _ in range(50):
        x, y = rng.random(9), rng.random(13)
        vx, _ = a12(x, y)
        vy, _ = a12(y, x)
        assert vx + vy == pytest.approx(1.0, abs=1e-12)


def test_a12_invariant_under_monotone_transform(rng):
    for _ in range(30):
        x, y = rng.random(8) + 0.1, rng.random(8) + 0.1
        v1, _ = a12(x, y)
        v2, _ = a12(np.log(x), np.log(y))
        v3, _ = a12(x**3, y**3)
        assert v1 == v2 == v3


# ---------------------------------------------------------------------------
# median / IQR
# ---------------------------------------------------------------------------

def test_median_iqr_odd():
    med, iqr = median_iqr(np.array([1.0, 2.0, 3.0]))
    assert med == 2.0 and iqr == pytest.approx(1.0)


def test_median_iqr_constant():
    med, iqr = median_iqr(np.full(7, 4.2))
    assert med == 4.2 and iqr == 0.0


def test_median_iqr_even_interpolated():
    med, iqr = median_iqr(np.array([1.0, 2.0, 3.0, 4.0]))
    assert med == 2.5 and iqr == pytest.approx(3.25 - 1.75)
