import pytest
from hypothesis import given, settings, strategies as st

from cineparse.errors import UniverseMismatch
from cineparse.evaluation import boundary_scores, evaluate, format_table
from cineparse.synth import synthesize, lone_survivor_spec
from cineparse.coupling import segment_full


def test_identical_segmentations():
    truth = [(0, 3), (4, 9), (10, 12)]
    rep = evaluate(truth, truth)
    assert (rep.precision, rep.recall, rep.f1) == (1.0, 1.0, 1.0)


def test_half_the_boundaries():
    truth = [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)]
    pred = [(0, 3), (4, 7), (8, 9)]
    rep = evaluate(pred, truth)
    assert rep.precision == 1.0 and rep.recall == 0.5
    assert rep.f1 == pytest.approx(2 / 3)


def test_no_predicted_boundaries():
    rep = evaluate([(0, 9)], [(0, 4), (5, 9)])
    assert rep.precision == 0.0 and rep.recall == 0.0 and rep.f1 == 0.0


def test_single_scene_both_sides():
    assert boundary_scores([], []) == (1.0, 1.0, 1.0)


def test_tolerance():
    rep = evaluate([(0, 5), (6, 9)], [(0, 4), (5, 9)], tolerance=1)
    assert rep.f1 == 1.0
    assert evaluate([(0, 5), (6, 9)], [(0, 4), (5, 9)]).f1 == 0.0


def test_universe_mismatch():
    with pytest.raises(UniverseMismatch):
        evaluate([(0, 4)], [(0, 5)])


def test_diffs_and_table():
    doc, truth = synthesize(lone_survivor_spec())
    res = segment_full(doc)
    rep = evaluate(res.final, truth)
    assert rep.f1 == 1.0 and rep.one_shot_scenes == 1
    assert all(d.begin_offset == 0 and d.end_offset == 0 for d in rep.diffs)
    table = format_table(res.initial, res.final, truth)
    assert "Remaining one-shot scenes:" in table
    assert "  Coupled: 25" in table


@st.composite
def cuts(draw):
    n = draw(st.integers(1, 40))
    pts = sorted(draw(st.sets(st.integers(1, n - 1), max_size=n - 1))) if n > 1 else []
    edges = [0] + pts + [n]
    return [(a, b - 1) for a, b in zip(edges, edges[1:])]


@given(cuts(), cuts())
@settings(max_examples=200)
def test_score_ranges(a, b):
    if a[-1][1] != b[-1][1]:
        return
    rep = evaluate(a, b)
    for x in (rep.precision, rep.recall, rep.f1):
        assert 0.0 <= x <= 1.0
    assert (rep.f1 == 1.0) == (a == b)
    swapped = evaluate(b, a)
    assert (swapped.precision, swapped.recall) == (rep.recall, rep.precision)
