"""Initial scene segmentation from the temporal-clusters graph.

Before edges cut the graph into sequence subgraphs. Inside a subgraph,
clusters tied together by During/Overlaps form one scene and Meets edges
separate scenes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .clustering import DEFAULT_THRESHOLD, Cluster, TimeSpaceGraph, cluster_document
from .errors import InvalidManifest, NonContiguousScene
from .model import SequenceSpan, VideoDocument, sequence_index
from .temporal_graph import Edge, RelationKind, TemporalClustersGraph, build_tcg

MERGING = (RelationKind.DURING, RelationKind.OVERLAPS)


@dataclass(frozen=True)
class Scene:
    id: int
    first_shot: int
    last_shot: int
    clusters: tuple[int, ...] = ()
    sequence: int = 0

    def __post_init__(self):
        if self.last_shot < self.first_shot:
            raise ValueError(f"scene {self.id}: empty shot range")

    @property
    def shot_ids(self) -> range:
        return range(self.first_shot, self.last_shot + 1)

    @property
    def is_one_shot(self) -> bool:
        return self.first_shot == self.last_shot

    def __len__(self) -> int:
        return self.last_shot - self.first_shot + 1

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "first_shot": self.first_shot,
            "last_shot": self.last_shot,
            "clusters": list(self.clusters),
            "one_shot": self.is_one_shot,
            "sequence": self.sequence,
        }


@dataclass(frozen=True)
class Segmentation:
    scenes: tuple[Scene, ...]
    sequences: tuple[SequenceSpan, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.scenes)

    @property
    def n_shots(self) -> int:
        return self.scenes[-1].last_shot + 1 if self.scenes else 0

    @property
    def boundaries(self) -> list[int]:
        """Scene start shots, excluding shot 0."""
        return [s.first_shot for s in self.scenes if s.first_shot != 0]

    @property
    def one_shot_scenes(self) -> list[Scene]:
        return [s for s in self.scenes if s.is_one_shot]

    def intervals(self) -> list[tuple[int, int]]:
        return [(s.first_shot, s.last_shot) for s in self.scenes]

    def to_json(self) -> dict:
        return {
            "scenes": [s.to_json() for s in self.scenes],
            "sequences": [s.to_json() for s in self.sequences],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Segmentation":
        try:
            scenes = tuple(
                Scene(
                    int(r["id"]),
                    int(r["first_shot"]),
                    int(r["last_shot"]),
                    tuple(int(c) for c in r.get("clusters", ())),
                    int(r.get("sequence", 0)),
                )
                for r in data["scenes"]
            )
            sequences = tuple(
                SequenceSpan(int(r["first_shot"]), int(r["last_shot"])) for r in data.get("sequences", ())
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidManifest(f"malformed segmentation JSON: {exc}") from exc
        seg = cls(scenes, sequences)
        problems = check_partition(seg)
        if problems:
            raise InvalidManifest("; ".join(problems))
        return seg


def check_partition(seg: Segmentation, n_shots: int | None = None) -> list[str]:
    """Scenes must tile ``0..n_shots-1`` in order with no gaps or overlaps."""
    problems = []
    nxt = 0
    for s in seg.scenes:
        if s.first_shot != nxt:
            problems.append(f"scene {s.id} starts at {s.first_shot}, expected {nxt}")
        nxt = s.last_shot + 1
    if n_shots is not None and nxt != n_shots:
        problems.append(f"scenes end at {nxt}, expected {n_shots}")
    return problems


@dataclass(frozen=True)
class SequenceSubgraph:
    clusters: tuple[Cluster, ...]
    edges: tuple[Edge, ...]

    @property
    def first_shot(self) -> int:
        return min(c.first for c in self.clusters)


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {i: i for i in items}

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def split_sequences(tcg: TemporalClustersGraph) -> list[SequenceSubgraph]:
    """Connected components once every Before edge is removed, in time order."""
    uf = _UnionFind(c.id for c in tcg.clusters)
    kept = [e for e in tcg.edges if e.kind is not RelationKind.BEFORE]
    for e in kept:
        uf.union(e.source, e.target)
    by_id = {c.id: c for c in tcg.clusters}
    subgraphs = []
    for members in uf.groups().values():
        ids = set(members)
        subgraphs.append(
            SequenceSubgraph(
                tuple(sorted((by_id[i] for i in ids), key=lambda c: c.id)),
                tuple(e for e in kept if e.source in ids),
            )
        )
    subgraphs.sort(key=lambda g: g.first_shot)
    return subgraphs


def extract_scenes(
    subgraph: SequenceSubgraph,
    doc: VideoDocument,
    sequences: Sequence[SequenceSpan] | None = None,
    first_id: int = 0,
) -> list[Scene]:
    uf = _UnionFind(c.id for c in subgraph.clusters)
    for e in subgraph.edges:
        if e.kind in MERGING:
            uf.union(e.source, e.target)
    by_id = {c.id: c for c in subgraph.clusters}
    owner = {sid: c.id for c in subgraph.clusters for sid in c.shot_ids}

    groups = []
    for members in uf.groups().values():
        shots = [sid for cid in members for sid in by_id[cid].shot_ids]
        lo, hi = min(shots), max(shots)
        member_set = set(members)
        for sid in range(lo, hi + 1):
            if owner.get(sid) not in member_set:
                raise NonContiguousScene(
                    f"shot {sid} lies inside the hull [{lo}, {hi}] of clusters {sorted(members)} "
                    "but belongs elsewhere"
                )
        groups.append((lo, hi, tuple(sorted(members))))
    groups.sort()

    scenes = []
    for lo, hi, members in groups:
        seq = sequence_index(sequences, lo) if sequences else 0
        scenes.append(Scene(first_id + len(scenes), lo, hi, members, seq))
    return scenes


@dataclass(frozen=True)
class SpatialTemporalResult:
    tsg: TimeSpaceGraph
    tcg: TemporalClustersGraph
    segmentation: Segmentation


def scenes_from_tcg(tcg: TemporalClustersGraph, tsg: TimeSpaceGraph) -> Segmentation:
    scenes: list[Scene] = []
    for sub in split_sequences(tcg):
        scenes.extend(extract_scenes(sub, tsg.doc, tsg.sequences, first_id=len(scenes)))
    scenes.sort(key=lambda s: s.first_shot)
    scenes = [Scene(i, s.first_shot, s.last_shot, s.clusters, s.sequence) for i, s in enumerate(scenes)]
    seg = Segmentation(tuple(scenes), tsg.sequences)
    problems = check_partition(seg, len(tsg.doc.shots))
    if problems:
        raise NonContiguousScene("; ".join(problems))
    return seg


def run_spatial_temporal(doc: VideoDocument, threshold: float = DEFAULT_THRESHOLD) -> SpatialTemporalResult:
    tsg = cluster_document(doc, threshold)
    tcg = build_tcg(tsg, doc)
    return SpatialTemporalResult(tsg, tcg, scenes_from_tcg(tcg, tsg))


def segment_spatial_temporal(doc: VideoDocument, threshold: float = DEFAULT_THRESHOLD) -> Segmentation:
    return run_spatial_temporal(doc, threshold).segmentation
