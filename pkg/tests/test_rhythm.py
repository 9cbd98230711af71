import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cineparse.errors import GroupTooSmall, NotAdjacent
from cineparse.model import Shot, make_document
from cineparse.rhythm import (
    Denominator,
    ShotGroup,
    Side,
    aggregation_test,
    duration_variation,
    rhythm_segment,
    rhythm_stats,
    safe_interval,
    zscore,
)


def literal_stats(durations, div=None):
    """Mean and deviation of consecutive duration differences, both divided
    by the group size, evaluated in exact rational arithmetic."""
    n = len(durations)
    div = n if div is None else div
    v = [Fraction(abs(a - b)) for a, b in zip(durations, durations[1:])]
    mean = sum(v) / div
    var = sum((x - mean) ** 2 for x in v) / div
    return float(mean), math.sqrt(var)


def group(durations, first=0):
    return ShotGroup(tuple(range(first, first + len(durations))), tuple(durations))


@pytest.mark.parametrize("a, b, v", [(10, 10, 0), (10, 14, 4), (14, 11, 3)])
def test_duration_variation(a, b, v):
    assert duration_variation(Shot(0, 0, a), Shot(1, a, b)) == v


def test_constant_rhythm():
    st_ = rhythm_stats(group([10, 10, 10]))
    assert st_.variations == (0, 0) and st_.vtpm == 0 and st_.delta == 0


def test_three_shot_example():
    st_ = rhythm_stats(group([10, 14, 11]))
    assert st_.variations == (4, 3)
    assert st_.vtpm == pytest.approx(7 / 3, abs=1e-9)
    assert st_.delta == pytest.approx(math.sqrt(29 / 27), abs=1e-9)
    assert st_.delta == pytest.approx(1.0364, abs=1e-4)


def test_two_shot_group_follows_formula():
    # one variation v, divided by 2: mean v/2, deviation v/(2*sqrt 2)
    st_ = rhythm_stats(group([30, 22]))
    assert st_.vtpm == 4.0
    assert st_.delta == pytest.approx(8 / (2 * math.sqrt(2)), rel=1e-12)


def test_unbiased_denominator():
    st_ = rhythm_stats(group([10, 14, 11]), Denominator.UNBIASED)
    mean, dev = literal_stats([10, 14, 11], div=2)
    assert st_.vtpm == pytest.approx(mean, rel=1e-12) and st_.delta == pytest.approx(dev, rel=1e-12)
    assert Denominator.parse("unbiased") is Denominator.UNBIASED


def test_group_too_small():
    with pytest.raises(GroupTooSmall):
        rhythm_stats(group([5]))


def test_aggregation_accepts_close_candidate():
    gp = group([10, 14, 11])
    d = aggregation_test(gp, Shot(3, 35, 12), alpha=2.25, side=Side.BACK)
    assert d.accept and d.variation == 1
    assert d.zscore == pytest.approx((7 / 3 - 1) / math.sqrt(29 / 27), rel=1e-12)
    assert d.zscore == pytest.approx(1.2865, abs=1e-4)
    assert not aggregation_test(gp, Shot(3, 35, 12), alpha=1.0).accept


def test_zero_deviation_exact_match_only():
    gp = group([10, 10, 10])
    assert aggregation_test(gp, Shot(3, 30, 10)).accept
    d = aggregation_test(gp, Shot(3, 30, 11))
    assert not d.accept and d.zscore == math.inf
    assert zscore(0.0, rhythm_stats(gp)) == 0.0


def test_front_side_uses_first_shot():
    gp = group([10, 14, 11], first=1)
    d = aggregation_test(gp, Shot(0, 0, 9), side=Side.FRONT)
    assert d.variation == 1 and d.accept


def test_candidate_must_be_adjacent():
    gp = group([10, 14, 11], first=2)
    with pytest.raises(NotAdjacent):
        aggregation_test(gp, Shot(6, 0, 10), side=Side.BACK)
    with pytest.raises(NotAdjacent):
        aggregation_test(gp, Shot(0, 0, 10), side=Side.FRONT)


def test_safe_interval_bounds():
    iv = safe_interval(rhythm_stats(group([10, 14, 11])), 2.25)
    assert iv.low == pytest.approx(7 / 3 - 2.25 * math.sqrt(29 / 27))
    assert iv.high == pytest.approx(7 / 3 + 2.25 * math.sqrt(29 / 27))
    assert 2.0 in iv and 5.0 not in iv


def segment_sizes(durations, n=3, alpha=2.25):
    return [len(g) for g in rhythm_segment(make_document(durations).shots, n, alpha)]


def test_constant_durations_one_group():
    assert segment_sizes([10] * 9) == [9]


def test_regime_change_splits():
    durations = [10, 11, 10, 11, 10, 60, 10, 60, 10, 60]
    groups = rhythm_segment(make_document(durations).shots, 3, 2.25)
    assert [(g.first, g.last) for g in groups] == [(0, 4), (5, 9)]


def test_failed_test_leaves_short_tail():
    assert segment_sizes([10, 10, 10, 40]) == [3, 1]


def test_min_group_guard():
    with pytest.raises(ValueError):
        rhythm_segment(make_document([1, 2, 3]).shots, n=2)


@given(st.lists(st.integers(1, 500), min_size=2, max_size=50))
@settings(max_examples=300)
def test_stats_match_literal_formula(durations):
    st_ = rhythm_stats(group(durations))
    mean, dev = literal_stats(durations)
    assert st_.vtpm == pytest.approx(mean, rel=1e-12, abs=1e-300)
    assert st_.delta == pytest.approx(dev, rel=1e-12, abs=1e-300)
    assert st_.n == len(durations)


@given(st.lists(st.integers(1, 300), min_size=3, max_size=40), st.floats(0.5, 4.0))
@settings(max_examples=200, deadline=None)
def test_segmentation_partitions(durations, alpha):
    groups = rhythm_segment(make_document(durations).shots, 3, alpha)
    flat = [i for g in groups for i in g.shot_ids]
    assert flat == list(range(len(durations)))
    assert all(len(g) >= 3 for g in groups[:-1])


@given(st.lists(st.integers(1, 300), min_size=3, max_size=20), st.integers(1, 300), st.floats(0.1, 4.0))
@settings(max_examples=300)
def test_accept_matches_zscore(durations, cand, alpha):
    gp = group(durations)
    d = aggregation_test(gp, Shot(len(durations), 0, cand), alpha)
    st_ = rhythm_stats(gp)
    assert d.accept == (abs(d.variation - st_.vtpm) <= alpha * st_.delta)
    if st_.delta > 0:
        assert d.accept == (d.zscore <= alpha * (1 + 1e-12)) or abs(d.zscore - alpha) < 1e-9
