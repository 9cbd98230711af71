import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from cineparse.errors import BothEmpty, InputError
from cineparse.foe import (
    MatchConfig,
    PointPattern,
    TransitionType,
    detect_shot_transitions,
    load_patterns,
    pattern_resemblance,
    score_sequence,
    transitions_to_manifest,
)
from cineparse.model import validate_manifest


def brute_resemblance(p1, p2, radius, penalty):
    """Loop-by-loop evaluation over the smaller pattern."""
    a, b = list(p1), list(p2)
    if (len(a), sorted(a)) > (len(b), sorted(b)):
        a, b = b, a
    if not a:
        return penalty
    total = 0.0
    for x, y in a:
        best = None
        for u, v in b:
            d = math.hypot(x - u, y - v)
            if d <= radius:
                s = 1 - d / radius
                best = s if best is None else max(best, s)
        total += penalty if best is None else best
    return total / len(a)


def test_identical_patterns_score_one():
    p = PointPattern(((1, 1), (5, 5)))
    for r in (0.1, 1, 100):
        assert pattern_resemblance(p, p, MatchConfig(r, 0.5)) == 1.0


def test_far_patterns_score_penalty():
    cfg = MatchConfig(1.0, 0.5)
    assert pattern_resemblance(PointPattern(((0, 0),)), PointPattern(((10, 10), (20, 0))), cfg) == 0.0


def test_hand_example():
    cfg = MatchConfig(5.0, 0.5)
    score = pattern_resemblance(PointPattern(((0, 0),)), PointPattern(((3, 0), (10, 0))), cfg)
    assert abs(score - 0.4) <= 1e-12


def test_empty_patterns():
    cfg = MatchConfig(5.0, 0.5, penalty=-0.25)
    with pytest.raises(BothEmpty):
        pattern_resemblance(PointPattern(()), PointPattern(()), cfg)
    assert pattern_resemblance(PointPattern(()), PointPattern(((1, 2),)), cfg) == -0.25


def test_config_validation():
    with pytest.raises(InputError):
        MatchConfig(0.0, 0.5)
    with pytest.raises(InputError):
        MatchConfig(1.0, 0.5, penalty=1.0)
    with pytest.raises(InputError):
        PointPattern(((math.nan, 0),))


def still(n, pts=((10, 10), (30, 40))):
    return [PointPattern(pts, frame=i) for i in range(n)]


def test_constant_patterns_no_transitions():
    assert detect_shot_transitions(still(8), MatchConfig(3.0, 0.5)) == []


def test_abrupt_change_is_one_cut():
    seq = still(5) + [PointPattern(((200, 200), (300, 0)), frame=i) for i in range(5, 10)]
    (tr,) = detect_shot_transitions(seq, MatchConfig(3.0, 0.5))
    assert tr.kind is TransitionType.CUT and tr.start == tr.end == 5


def test_drift_is_one_gradual_transition():
    # the point jumps 5 units per frame over frames 3..7 with radius 4, so
    # exactly those 4 pairs score below 0.5
    xs = [0, 0, 0, 0, 5, 10, 15, 20, 20, 20]
    seq = [PointPattern(((x, 0),), frame=i) for i, x in enumerate(xs)]
    cfg = MatchConfig(4.0, 0.5)
    scores = score_sequence(seq, cfg)
    oracle = [brute_resemblance(a.points, b.points, 4.0, 0.0) for a, b in zip(seq, seq[1:])]
    assert scores == pytest.approx(oracle, abs=1e-12)
    assert [s < 0.5 for s in scores] == [False] * 3 + [True] * 4 + [False] * 2
    (tr,) = detect_shot_transitions(seq, cfg)
    assert tr.kind is TransitionType.GRADUAL and (tr.start, tr.end) == (4, 7)


def test_short_run_yields_cuts():
    xs = [0, 0, 50, 100, 100, 100]
    seq = [PointPattern(((x, 0),), frame=i) for i, x in enumerate(xs)]
    found = detect_shot_transitions(seq, MatchConfig(4.0, 0.5))
    assert [(t.kind, t.start) for t in found] == [(TransitionType.CUT, 2), (TransitionType.CUT, 3)]


def test_manifest_skeleton_is_valid(tmp_path):
    xs = [0] * 5 + [5, 10, 15, 20] + [20] * 5 + [500] * 6
    seq = [PointPattern(((x, 0),), frame=100 + i) for i, x in enumerate(xs)]
    found = detect_shot_transitions(seq, MatchConfig(4.0, 0.5))
    skeleton = transitions_to_manifest(found, 100, 100 + len(xs) - 1)
    doc = validate_manifest(skeleton)
    assert len(doc.shots) == 3
    assert doc.shots[0].transition.kind.value == "Dissolve"
    assert doc.shots[1].transition.kind.value == "Cut"
    assert doc.shots[0].t == 100 and doc.end == 100 + len(xs)
    path = tmp_path / "p.json"
    path.write_text(json.dumps([{"frame": p.frame, "points": [list(q) for q in p.points]} for p in reversed(seq)]))
    assert [p.frame for p in load_patterns(path)] == [p.frame for p in seq]


coords = st.floats(-100, 100, allow_nan=False)
patterns = st.lists(st.tuples(coords, coords), max_size=8).map(PointPattern)


@given(patterns, patterns, st.floats(0.1, 50), st.floats(-1, 0.9))
@settings(max_examples=300)
def test_properties(p1, p2, radius, penalty):
    if not p1.points and not p2.points:
        return
    cfg = MatchConfig(radius, 0.5, penalty)
    s = pattern_resemblance(p1, p2, cfg)
    assert s == pattern_resemblance(p2, p1, cfg)
    assert min(penalty, 0.0) - 1e-12 <= s <= 1.0
    assert s == pytest.approx(brute_resemblance(p1.points, p2.points, radius, penalty), abs=1e-12)
