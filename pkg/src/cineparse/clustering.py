"""Temporally delimited shot clustering and the time-space graph.

Clustering never looks across a sequence boundary: two visually identical
shots on either side of a dissolve end up in different clusters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import MissingHistogram
from .histogram import dissimilarity
from .model import SequenceSpan, Shot, VideoDocument, sequence_boundaries

DEFAULT_THRESHOLD = 0.1


@dataclass(frozen=True)
class Cluster:
    id: int
    shot_ids: tuple[int, ...]
    sequence: SequenceSpan

    @property
    def seed(self) -> int:
        return self.shot_ids[0]

    @property
    def first(self) -> int:
        return self.shot_ids[0]

    @property
    def last(self) -> int:
        return self.shot_ids[-1]

    def __len__(self) -> int:
        return len(self.shot_ids)

    def to_json(self) -> dict:
        return {"id": self.id, "shots": list(self.shot_ids)}


def cluster_sequence(
    shots: Sequence[Shot],
    threshold: float = DEFAULT_THRESHOLD,
    first_id: int = 0,
    sequence: SequenceSpan | None = None,
) -> list[Cluster]:
    """Greedy first-fit clustering against each cluster's seed histogram.

    The earliest unclassified shot seeds a cluster; every later unclassified
    shot whose dissimilarity to the seed is strictly below ``threshold``
    joins it.
    """
    for s in shots:
        if s.histogram is None:
            raise MissingHistogram(f"shot {s.id} has no histogram")
    if sequence is None and shots:
        sequence = SequenceSpan(shots[0].id, shots[-1].id)

    unclassified = list(shots)
    clusters = []
    while unclassified:
        seed, rest = unclassified[0], unclassified[1:]
        members = [seed.id]
        remaining = []
        for s in rest:
            if dissimilarity(seed.histogram, s.histogram) < threshold:
                members.append(s.id)
            else:
                remaining.append(s)
        clusters.append(Cluster(first_id + len(clusters), tuple(members), sequence))
        unclassified = remaining
    return clusters


@dataclass(frozen=True)
class TimeSpaceGraph:
    """Shots laid out on a time axis against their cluster index."""

    doc: VideoDocument
    clusters: tuple[Cluster, ...]
    sequences: tuple[SequenceSpan, ...]

    @property
    def cluster_of(self) -> list[int]:
        owner = [-1] * len(self.doc.shots)
        for c in self.clusters:
            for sid in c.shot_ids:
                owner[sid] = c.id
        return owner

    def to_json(self) -> dict:
        return {
            "clusters": [c.to_json() for c in self.clusters],
            "sequences": [s.to_json() for s in self.sequences],
        }

    def render_timeline(self) -> str:
        """Plain-text TSG: one row per cluster, one column per shot."""
        owner = self.cluster_of
        width = len(str(max(len(self.clusters) - 1, 0)))
        seq_ends = {s.last_shot for s in self.sequences[:-1]}
        lines = []
        for c in self.clusters:
            cells = []
            for sid in range(len(owner)):
                cells.append("#" if owner[sid] == c.id else ".")
                if sid in seq_ends:
                    cells.append("|")
            lines.append(f"C{c.id:<{width}} {''.join(cells)}")
        return "\n".join(lines)


def cluster_document(doc: VideoDocument, threshold: float = DEFAULT_THRESHOLD) -> TimeSpaceGraph:
    spans = sequence_boundaries(doc)
    clusters: list[Cluster] = []
    for span in spans:
        shots = [doc.shots[i] for i in span.shot_ids]
        clusters.extend(cluster_sequence(shots, threshold, first_id=len(clusters), sequence=span))
    return TimeSpaceGraph(doc, tuple(clusters), tuple(spans))


def clusters_from_json(data: dict, doc: VideoDocument) -> TimeSpaceGraph:
    """Rebuild a TSG from its JSON export (ids and memberships only)."""
    spans = sequence_boundaries(doc)
    clusters = []
    for rec in sorted(data["clusters"], key=lambda r: r["id"]):
        ids = tuple(int(i) for i in rec["shots"])
        span = next(s for s in spans if ids[0] in s)
        clusters.append(Cluster(int(rec["id"]), ids, span))
    return TimeSpaceGraph(doc, tuple(clusters), tuple(spans))
