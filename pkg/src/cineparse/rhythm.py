"""Editing-rhythm statistics over shot durations.

A group's rhythm is summarized by the absolute duration differences between
consecutive shots. Their mean and deviation are both divided by the group
size ``n`` although only ``n - 1`` differences exist; ``Denominator.UNBIASED``
switches to ``n - 1`` for comparison runs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import GroupTooSmall, NotAdjacent
from .model import Shot

DEFAULT_ALPHA = 2.25
DEFAULT_MIN_GROUP = 3


class Denominator(enum.Enum):
    """Divisor of the variation mean and deviation: the group size n (the
    default) or n - 1."""

    GROUP_SIZE = "n"
    UNBIASED = "n-1"

    @classmethod
    def parse(cls, raw: "str | Denominator") -> "Denominator":
        if isinstance(raw, cls):
            return raw
        key = str(raw).lower()
        aliases = {"group_size": "n", "unbiased": "n-1"}
        return cls(aliases.get(key, key))


class Side(enum.Enum):
    FRONT = "Front"
    BACK = "Back"


@dataclass(frozen=True)
class ShotGroup:
    shot_ids: tuple[int, ...]
    durations: tuple[int, ...]

    def __post_init__(self):
        if not self.shot_ids or len(self.shot_ids) != len(self.durations):
            raise ValueError("a shot group needs one duration per shot and at least one shot")
        if any(b != a + 1 for a, b in zip(self.shot_ids, self.shot_ids[1:])):
            raise ValueError(f"shot ids must be consecutive: {self.shot_ids}")

    @classmethod
    def of(cls, shots: Sequence[Shot]) -> "ShotGroup":
        return cls(tuple(s.id for s in shots), tuple(s.td for s in shots))

    @property
    def first(self) -> int:
        return self.shot_ids[0]

    @property
    def last(self) -> int:
        return self.shot_ids[-1]

    def __len__(self) -> int:
        return len(self.shot_ids)

    def extended(self, shot: Shot, side: Side) -> "ShotGroup":
        if side is Side.BACK:
            return ShotGroup(self.shot_ids + (shot.id,), self.durations + (shot.td,))
        return ShotGroup((shot.id,) + self.shot_ids, (shot.td,) + self.durations)


@dataclass(frozen=True)
class RhythmStats:
    variations: tuple[int, ...]
    vtpm: float
    delta: float
    n: int

    def to_json(self) -> dict:
        return {"variations": list(self.variations), "vtpm": self.vtpm, "delta": self.delta, "n": self.n}


@dataclass(frozen=True)
class SafeInterval:
    low: float
    high: float
    alpha: float

    def __contains__(self, v: float) -> bool:
        return self.low <= v <= self.high


@dataclass(frozen=True)
class AggregationDecision:
    accept: bool
    zscore: float
    variation: int


def duration_variation(a: Shot, b: Shot) -> int:
    return abs(a.td - b.td)


def rhythm_stats(gp: ShotGroup, denominator: Denominator | str = Denominator.GROUP_SIZE) -> RhythmStats:
    if len(gp) < 2:
        raise GroupTooSmall(f"rhythm statistics need at least 2 shots, got {len(gp)}")
    denominator = Denominator.parse(denominator)
    d = gp.durations
    variations = tuple(abs(a - b) for a, b in zip(d, d[1:]))
    n = len(gp)
    div = n if denominator is Denominator.GROUP_SIZE else n - 1
    vtpm = math.fsum(variations) / div
    delta = math.sqrt(math.fsum((v - vtpm) ** 2 for v in variations) / div)
    return RhythmStats(variations, vtpm, delta, n)


def safe_interval(stats: RhythmStats, alpha: float = DEFAULT_ALPHA) -> SafeInterval:
    return SafeInterval(stats.vtpm - alpha * stats.delta, stats.vtpm + alpha * stats.delta, alpha)


def zscore(v: float, stats: RhythmStats) -> float:
    dev = abs(v - stats.vtpm)
    if stats.delta > 0:
        return dev / stats.delta
    return 0.0 if dev == 0 else math.inf


def aggregation_test(
    gp: ShotGroup,
    candidate: Shot,
    alpha: float = DEFAULT_ALPHA,
    side: Side | str = Side.BACK,
    denominator: Denominator | str = Denominator.GROUP_SIZE,
    stats: RhythmStats | None = None,
) -> AggregationDecision:
    """Does ``candidate`` keep the group's rhythm when attached on ``side``?

    The candidate must sit right before the group's first shot (Front) or
    right after its last (Back). Its duration difference with that boundary
    shot has to land in the group's safe interval.
    """
    side = Side(side) if not isinstance(side, Side) else side
    if side is Side.BACK:
        if candidate.id != gp.last + 1:
            raise NotAdjacent(f"shot {candidate.id} does not follow shot {gp.last}")
        boundary_td = gp.durations[-1]
    else:
        if candidate.id != gp.first - 1:
            raise NotAdjacent(f"shot {candidate.id} does not precede shot {gp.first}")
        boundary_td = gp.durations[0]
    stats = stats or rhythm_stats(gp, denominator)
    v = abs(boundary_td - candidate.td)
    accept = abs(v - stats.vtpm) <= alpha * stats.delta
    return AggregationDecision(accept, zscore(v, stats), v)


def rhythm_segment(
    shots: Sequence[Shot],
    n: int = DEFAULT_MIN_GROUP,
    alpha: float = DEFAULT_ALPHA,
    denominator: Denominator | str = Denominator.GROUP_SIZE,
) -> list[ShotGroup]:
    """Pure rhythm segmentation by forward scan.

    Seed a group with the next ``n`` shots, grow it while the following shot
    passes the aggregation test, re-seed at the first failure. Fewer than
    ``n`` leftover shots form one final group.
    """
    if n < 3:
        raise ValueError(f"minimum group size must be at least 3, got {n}")
    shots = list(shots)
    groups = []
    i = 0
    while i < len(shots):
        if len(shots) - i < n:
            groups.append(ShotGroup.of(shots[i:]))
            break
        gp = ShotGroup.of(shots[i : i + n])
        i += n
        while i < len(shots) and aggregation_test(gp, shots[i], alpha, Side.BACK, denominator).accept:
            gp = gp.extended(shots[i], Side.BACK)
            i += 1
        groups.append(gp)
    return groups
