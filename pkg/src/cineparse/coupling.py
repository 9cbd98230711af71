"""Rhythm coupling: fold one-shot scenes into rhythm-compatible neighbours.

Each pass walks the current one-shot scenes in time order. A one-shot scene
may join the multi-shot scene right before it (attaching at that scene's
back) or right after it (attaching at the front), provided both lie in the
same sequence and the duration difference fits the neighbour's safe
interval. Among accepting neighbours the smallest z-score wins, ties going
to the preceding scene. Passes repeat until nothing moves. Surviving runs
of more than two one-shot scenes are then re-cut by pure rhythm
segmentation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .clustering import TimeSpaceGraph
from .config import Config
from .model import VideoDocument
from .rhythm import (
    DEFAULT_ALPHA,
    DEFAULT_MIN_GROUP,
    Denominator,
    ShotGroup,
    Side,
    aggregation_test,
    rhythm_segment,
)
from .scenes import Scene, Segmentation, SpatialTemporalResult, run_spatial_temporal
from .temporal_graph import TemporalClustersGraph


@dataclass(frozen=True)
class MergeEvent:
    pass_no: int
    shot: int
    absorbed_into: int
    side: Side
    zscore: float

    def to_json(self) -> dict:
        return {
            "pass": self.pass_no,
            "shot": self.shot,
            "absorbed_into": self.absorbed_into,
            "side": self.side.value,
            "zscore": self.zscore,
        }


@dataclass(eq=False)
class _Work:
    origin: int
    first: int
    last: int
    sequence: int
    clusters: set = field(default_factory=set)

    @property
    def size(self) -> int:
        return self.last - self.first + 1


@dataclass(frozen=True)
class CouplingResult:
    segmentation: Segmentation
    trace: tuple[MergeEvent, ...]
    passes: int


def _renumber(work: list[_Work], sequences) -> Segmentation:
    scenes = tuple(
        Scene(i, w.first, w.last, tuple(sorted(w.clusters)), w.sequence)
        for i, w in enumerate(sorted(work, key=lambda w: w.first))
    )
    return Segmentation(scenes, tuple(sequences))


def couple(
    initial: Segmentation,
    doc: VideoDocument,
    alpha: float = DEFAULT_ALPHA,
    denominator: Denominator | str = Denominator.GROUP_SIZE,
) -> CouplingResult:
    work = [_Work(s.id, s.first_shot, s.last_shot, s.sequence, set(s.clusters)) for s in initial.scenes]
    trace: list[MergeEvent] = []
    passes = 0
    while True:
        chi = [w for w in work if w.size == 1]
        if not chi:
            break
        passes += 1
        moved = False
        for single in chi:
            idx = work.index(single)
            shot = doc.shots[single.first]
            options = []
            for order, (pos, side) in enumerate(((idx - 1, Side.BACK), (idx + 1, Side.FRONT))):
                if not 0 <= pos < len(work):
                    continue
                host = work[pos]
                if host.size < 2 or host.sequence != single.sequence:
                    continue
                gp = ShotGroup.of(doc.shots[host.first : host.last + 1])
                decision = aggregation_test(gp, shot, alpha, side, denominator)
                if decision.accept:
                    options.append((decision.zscore, order, side, host))
            if not options:
                continue
            z, _, side, host = min(options, key=lambda o: (o[0], o[1]))
            if side is Side.BACK:
                host.last = single.last
            else:
                host.first = single.first
            host.clusters |= single.clusters
            work.remove(single)
            trace.append(MergeEvent(passes, single.first, host.origin, side, z))
            moved = True
        if not moved:
            break
    return CouplingResult(_renumber(work, initial.sequences), tuple(trace), passes)


def resolve_residuals(
    segmentation: Segmentation,
    doc: VideoDocument,
    n: int = DEFAULT_MIN_GROUP,
    alpha: float = DEFAULT_ALPHA,
    denominator: Denominator | str = Denominator.GROUP_SIZE,
) -> Segmentation:
    """Re-cut runs of more than two consecutive one-shot scenes by rhythm.

    Runs never span a sequence boundary. Shorter runs stay as they are.
    """
    scenes = list(segmentation.scenes)
    runs: list[list[Scene]] = []
    for s in scenes:
        if s.is_one_shot and runs and runs[-1][-1].is_one_shot and runs[-1][-1].sequence == s.sequence:
            runs[-1].append(s)
        else:
            runs.append([s])

    work = []
    for run in runs:
        if len(run) <= 2 or not run[0].is_one_shot:
            work.extend(_Work(s.id, s.first_shot, s.last_shot, s.sequence, set(s.clusters)) for s in run)
            continue
        shots = doc.shots[run[0].first_shot : run[-1].last_shot + 1]
        owner = {s.first_shot: s for s in run}
        for gp in rhythm_segment(shots, n, alpha, denominator):
            members = [owner[i] for i in gp.shot_ids]
            clusters = set().union(*(set(m.clusters) for m in members))
            work.append(_Work(members[0].id, gp.first, gp.last, run[0].sequence, clusters))
    return _renumber(work, segmentation.sequences)


@dataclass(frozen=True)
class FullResult:
    tsg: TimeSpaceGraph
    tcg: TemporalClustersGraph
    initial: Segmentation
    coupled: Segmentation
    final: Segmentation
    trace: tuple[MergeEvent, ...]
    passes: int


def segment_full(doc: VideoDocument, config: Config | None = None) -> FullResult:
    """Spatial-temporal segmentation, then coupling, then residual handling."""
    cfg = config or Config()
    st: SpatialTemporalResult = run_spatial_temporal(doc, cfg.threshold)
    coupled = couple(st.segmentation, doc, cfg.alpha, cfg.denominator)
    final = resolve_residuals(coupled.segmentation, doc, cfg.min_group, cfg.alpha, cfg.denominator)
    return FullResult(st.tsg, st.tcg, st.segmentation, coupled.segmentation, final, coupled.trace, coupled.passes)
