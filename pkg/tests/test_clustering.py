import pytest
from hypothesis import given, settings, strategies as st

from cineparse.clustering import cluster_document, cluster_sequence, clusters_from_json
from cineparse.errors import MissingHistogram
from cineparse.histogram import Histogram, dissimilarity
from cineparse.model import TransitionEffect, make_document
from cineparse.synth import synthesize, four_scene_spec

from conftest import color, labeled_doc


def members(clusters):
    return [c.shot_ids for c in clusters]


def test_identical_shots_one_cluster():
    doc = labeled_doc("AAAAA")
    assert members(cluster_sequence(doc.shots)) == [(0, 1, 2, 3, 4)]


def test_disjoint_shots_one_cluster_each():
    doc = labeled_doc("ABCDE")
    assert members(cluster_sequence(doc.shots)) == [(i,) for i in range(5)]


def test_interleaved_groups():
    doc = labeled_doc("ABAAB")
    assert members(cluster_sequence(doc.shots)) == [(0, 2, 3), (1, 4)]


def test_threshold_is_strict():
    a = Histogram([10, 0, 0, 0, 0, 0, 0, 0], 2)
    b = Histogram([9, 1, 0, 0, 0, 0, 0, 0], 2)
    doc = make_document([5, 5], histograms=[a, b])
    assert dissimilarity(a, b) == pytest.approx(0.1)
    assert len(cluster_sequence(doc.shots, threshold=0.1)) == 2
    assert len(cluster_sequence(doc.shots, threshold=0.11)) == 1


def test_compares_to_seed_only():
    # 1 is close to 0 and 2 is close to 1, but 2 is too far from seed 0
    hs = [Histogram([10, 0, 0, 0, 0, 0, 0, 0], 2), Histogram([9, 1, 0, 0, 0, 0, 0, 0], 2), Histogram([8, 2, 0, 0, 0, 0, 0, 0], 2)]
    doc = make_document([5, 5, 5], histograms=hs)
    assert members(cluster_sequence(doc.shots, threshold=0.15)) == [(0, 1), (2,)]


def test_one_sequence_document_matches_cluster_sequence():
    doc = labeled_doc("ABCABD")
    assert members(cluster_document(doc).clusters) == members(cluster_sequence(doc.shots))


def test_dissolve_separates_identical_shots():
    doc = labeled_doc("AA", transitions={0: TransitionEffect.dissolve(12)})
    tsg = cluster_document(doc)
    assert members(tsg.clusters) == [(0,), (1,)]
    assert [c.sequence.first_shot for c in tsg.clusters] == [0, 1]


def test_missing_histogram():
    with pytest.raises(MissingHistogram):
        cluster_sequence(make_document([3, 3]).shots)


def test_four_scene_fixture_has_46_clusters():
    doc, truth = synthesize(four_scene_spec())
    tsg = cluster_document(doc)
    assert len(doc.shots) == 67 and len(tsg.clusters) == 46
    assert members(tsg.clusters) == list(truth.clusters)


def test_json_round_trip_and_timeline():
    doc = labeled_doc("ABAB", transitions={1: TransitionEffect.dissolve(5)})
    tsg = cluster_document(doc)
    again = clusters_from_json(tsg.to_json(), doc)
    assert members(again.clusters) == members(tsg.clusters)
    lines = tsg.render_timeline().splitlines()
    assert len(lines) >= len(tsg.clusters)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=30), st.sets(st.integers(0, 28), max_size=4))
@settings(max_examples=150, deadline=None)
def test_partition_and_sequence_confinement(labels, breaks):
    n = len(labels)
    transitions = {i: TransitionEffect.dissolve(3) for i in breaks if i < n - 1}
    doc = make_document([7] * n, transitions, [color(x) for x in labels])
    tsg = cluster_document(doc)
    flat = sorted(i for c in tsg.clusters for i in c.shot_ids)
    assert flat == list(range(n))
    assert [c.id for c in tsg.clusters] == list(range(len(tsg.clusters)))
    for c in tsg.clusters:
        assert all(c.sequence.first_shot <= i <= c.sequence.last_shot for i in c.shot_ids)
        # seeds are the earliest member; every member matches its seed
        assert c.seed == min(c.shot_ids)
        assert all(labels[i] == labels[c.seed] for i in c.shot_ids)
