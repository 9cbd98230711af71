import pytest
from hypothesis import given, settings, strategies as st

from cineparse.errors import (
    EmptyManifest,
    InvalidManifest,
    InvalidTransition,
    NegativeDuration,
    NonContiguousTimeline,
)
from cineparse.model import (
    SequenceSpan,
    TransitionEffect,
    TransitionKind,
    document_to_json,
    make_document,
    sequence_boundaries,
    validate_manifest,
)


def test_single_shot():
    doc = validate_manifest([{"td": 10}])
    assert doc.shots[0].t == 0
    assert (doc.shots[0].t, doc.shots[0].end) == (0, 10)
    assert doc.shots[0].transition is None


def test_cut_adjacency():
    doc = validate_manifest([{"td": 10, "transition": {"kind": "Cut"}}, {"td": 5}])
    assert [s.t for s in doc.shots] == [0, 10]


def test_dissolve_shifts_successor():
    doc = validate_manifest([{"td": 10, "transition": {"kind": "dissolve", "tau": 30}}, {"td": 5}])
    assert [s.t for s in doc.shots] == [0, 40]


def test_explicit_time_codes_must_agree():
    ok = validate_manifest({"frame_rate": 25, "shots": [{"t": 5, "td": 10}, {"t": 15, "td": 5}]})
    assert [s.t for s in ok.shots] == [5, 15]
    with pytest.raises(NonContiguousTimeline):
        validate_manifest([{"t": 0, "td": 10}, {"t": 11, "td": 5}])


@pytest.mark.parametrize(
    "records, exc",
    [
        ([], EmptyManifest),
        ([{"td": 0}], NegativeDuration),
        ([{"td": -4}], NegativeDuration),
        ([{"td": 3, "transition": {"kind": "Cut", "tau": 2}}, {"td": 1}], InvalidTransition),
        ([{"td": 3, "transition": {"kind": "FadeIn"}}, {"td": 1}], InvalidTransition),
        ([{"td": 3, "transition": {"kind": "wipe", "tau": 3}}, {"td": 1}], InvalidTransition),
        ([{"id": 1, "td": 3}], InvalidManifest),
        ([{"td": 2.5}], InvalidManifest),
    ],
)
def test_rejects_bad_records(records, exc):
    with pytest.raises(exc):
        validate_manifest(records)


def test_transition_invariant():
    with pytest.raises(InvalidTransition):
        TransitionEffect(TransitionKind.DISSOLVE, 0)
    assert TransitionKind.parse("fade-out") is TransitionKind.FADE_OUT
    assert TransitionKind.parse("FadeIn") is TransitionKind.FADE_IN


def test_no_gradual_transition_single_span():
    doc = make_document([5] * 6)
    assert sequence_boundaries(doc) == [SequenceSpan(0, 5)]


def test_dissolve_after_shot_two():
    doc = make_document([5] * 5, {2: TransitionEffect.dissolve(4)})
    assert sequence_boundaries(doc) == [SequenceSpan(0, 2), SequenceSpan(3, 4)]


def test_130_shots_two_dissolves():
    # one-frame shots: shot 69 ends at frame 70; after the first dissolve
    # (tau 3) shot 94 ends at frame 98
    durations = [1] * 130
    doc = make_document(durations, {69: TransitionEffect.dissolve(3), 94: TransitionEffect.dissolve(3)})
    assert doc.shots[69].end == 70 and doc.shots[94].end == 98
    spans = sequence_boundaries(doc)
    assert spans == [SequenceSpan(0, 69), SequenceSpan(70, 94), SequenceSpan(95, 129)]


def test_trailing_fade_out_does_not_open_a_sequence():
    doc = validate_manifest([{"td": 4}, {"td": 4, "transition": {"kind": "FadeOut", "tau": 12}}])
    assert sequence_boundaries(doc) == [SequenceSpan(0, 1)]


transitions = st.one_of(
    st.just({"kind": "Cut", "tau": 0}),
    st.builds(lambda k, t: {"kind": k, "tau": t}, st.sampled_from(["Dissolve", "FadeIn", "FadeOut"]), st.integers(1, 50)),
)


@st.composite
def manifests(draw):
    n = draw(st.integers(1, 25))
    recs = []
    for i in range(n):
        rec = {"td": draw(st.integers(1, 300))}
        if i < n - 1:
            rec["transition"] = draw(transitions)
        recs.append(rec)
    return {"frame_rate": draw(st.sampled_from([24.0, 25.0, 29.97])), "shots": recs}


@given(manifests())
@settings(max_examples=200)
def test_round_trip(raw):
    doc = validate_manifest(raw)
    again = validate_manifest(document_to_json(doc))
    assert again == doc


@given(manifests())
@settings(max_examples=200)
def test_spans_partition_shots(raw):
    doc = validate_manifest(raw)
    spans = sequence_boundaries(doc)
    covered = [i for s in spans for i in s.shot_ids]
    assert covered == list(range(len(doc)))
    for a, b in zip(spans, spans[1:]):
        assert doc.shots[a.last_shot].transition.kind.is_gradual
        assert b.first_shot == a.last_shot + 1


@given(manifests())
@settings(max_examples=100)
def test_time_chain(raw):
    doc = validate_manifest(raw)
    for a, b in zip(doc.shots, doc.shots[1:]):
        assert b.t == a.t + a.td + a.tau
