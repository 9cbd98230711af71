import json

import pytest
from hypothesis import given, settings, strategies as st

from cineparse.clustering import cluster_document
from cineparse.errors import UnrealizableSpec
from cineparse.histogram import compute_histogram, dissimilarity, read_ppm
from cineparse.model import load_manifest
from cineparse.scenes import segment_spatial_temporal
from cineparse.synth import (
    FixtureSpec,
    GroundTruth,
    SceneSpec,
    SequenceSpec,
    easy_spec,
    hull_groups,
    random_spec,
    synthesize,
    four_scene_spec,
    write_fixture,
)


def one_scene(pattern, **kw):
    return FixtureSpec((SequenceSpec((SceneSpec(pattern, **kw),)),))


def test_trivial_spec():
    doc, truth = synthesize(one_scene("AAA"))
    assert len(doc.shots) == 3
    assert truth.scenes == ((0, 2),) and truth.clusters == ((0, 1, 2),)
    assert segment_spatial_temporal(doc).intervals() == [(0, 2)]


def test_hull_groups():
    assert hull_groups("ABAB") == [(0, 3)]
    assert hull_groups("ABCCBA") == [(0, 5)]
    assert hull_groups("AABB") == [(0, 1), (2, 3)]
    assert hull_groups("ABACDC") == [(0, 2), (3, 5)]


def test_four_scene_counts():
    doc, truth = synthesize(four_scene_spec())
    assert len(doc.shots) == 67
    assert len(truth.clusters) == 46
    assert len(truth.initial_scenes) == 25
    assert len(truth.scenes) == 4


def test_deterministic():
    a = synthesize(random_spec(9))
    b = synthesize(random_spec(9))
    assert a[0] == b[0] and a[1] == b[1]


def test_unrealizable_specs():
    with pytest.raises(UnrealizableSpec):
        synthesize(FixtureSpec((SequenceSpec((SceneSpec("AB"),)),), jitter=0.06))
    with pytest.raises(UnrealizableSpec):
        synthesize(one_scene("AB", durations=(1, 2, 3)))
    with pytest.raises(UnrealizableSpec):
        synthesize(FixtureSpec((SequenceSpec(()),)))
    # 2 bins per channel leave 28 bin pairs for 30 clusters
    with pytest.raises(UnrealizableSpec):
        synthesize(FixtureSpec((SequenceSpec((SceneSpec("A", head=29),)),), bins_per_channel=2))


def test_spec_and_truth_json_round_trip():
    spec = easy_spec(4)
    assert FixtureSpec.from_json(json.loads(json.dumps(spec.to_json()))) == spec
    _, truth = synthesize(spec)
    assert GroundTruth.from_json(json.loads(json.dumps(truth.to_json()))) == truth


def test_write_fixture(tmp_path):
    doc, truth = synthesize(easy_spec(1))
    write_fixture(doc, truth, tmp_path / "m.json", tmp_path / "t.json", tmp_path / "kf")
    again = load_manifest(tmp_path / "m.json")
    assert [s.td for s in again.shots] == [s.td for s in doc.shots]
    assert [s.histogram for s in again.shots] == [s.histogram for s in doc.shots]
    # key frames carry the same histograms
    first = doc.shots[0]
    img = read_ppm(tmp_path / "kf" / sorted(p.name for p in (tmp_path / "kf").iterdir())[0])
    assert compute_histogram(img, 4) == first.histogram


@given(st.integers(0, 100_000))
@settings(max_examples=40, deadline=None)
def test_histogram_plan_respects_threshold(seed):
    doc, truth = synthesize(random_spec(seed))
    spec = random_spec(seed)
    for members in truth.clusters:
        seed_h = doc.shots[members[0]].histogram
        assert all(dissimilarity(seed_h, doc.shots[i].histogram) < spec.threshold for i in members)
    seeds = [doc.shots[m[0]].histogram for m in truth.clusters]
    for i in range(len(seeds)):
        for j in range(i + 1, min(i + 6, len(seeds))):
            assert dissimilarity(seeds[i], seeds[j]) >= spec.threshold
    assert [c.shot_ids for c in cluster_document(doc).clusters] == list(truth.clusters)
