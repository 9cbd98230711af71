"""Shot-transition detection by comparing per-frame FOE point patterns.

The upstream stage (line contours, double Hough transform) is not part of
this package; it hands over one pattern of candidate focus-of-expansion
points per frame. Consecutive patterns are scored by greedy per-point
matching inside a fixed zone; low scores mark transitions.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BothEmpty, InputError

DEFAULT_MIN_RUN = 3


@dataclass(frozen=True)
class PointPattern:
    points: tuple[tuple[float, float], ...]
    frame: int | None = None

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        if not all(math.isfinite(c) for p in pts for c in p):
            raise InputError("point coordinates must be finite")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def translated(self, dx: float, dy: float) -> "PointPattern":
        return PointPattern(tuple((x + dx, y + dy) for x, y in self.points), self.frame)


@dataclass(frozen=True)
class MatchConfig:
    zone_radius: float
    threshold: float
    penalty: float = 0.0
    min_run: int = DEFAULT_MIN_RUN

    def __post_init__(self):
        if not self.zone_radius > 0:
            raise InputError(f"zone radius must be positive, got {self.zone_radius}")
        if not self.penalty < 1.0:
            raise InputError("penalty must stay below a perfect local match (1.0)")
        if self.min_run < 2:
            raise InputError("a gradual transition needs a run of at least 2 low scores")


def _local_scores(probe: np.ndarray, other: np.ndarray, cfg: MatchConfig) -> np.ndarray:
    if other.size == 0:
        return np.full(len(probe), cfg.penalty)
    d = np.sqrt(((probe[:, None, :] - other[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
    return np.where(d <= cfg.zone_radius, 1.0 - d / cfg.zone_radius, cfg.penalty)


def pattern_resemblance(p1: PointPattern, p2: PointPattern, cfg: MatchConfig) -> float:
    """Mean local resemblance of the smaller pattern's points.

    Each point scores ``1 - d / zone_radius`` against its nearest partner
    within the zone, or ``cfg.penalty`` when the zone is empty. Equal-size
    patterns are put in a canonical order first so the score is symmetric.
    """
    if not p1.points and not p2.points:
        raise BothEmpty("cannot compare two empty patterns")
    a, b = p1.points, p2.points
    if (len(a), sorted(a)) > (len(b), sorted(b)):
        a, b = b, a
    if not a:
        return float(cfg.penalty)
    scores = _local_scores(np.asarray(a), np.asarray(b), cfg)
    mean = math.fsum(scores) / len(a)
    # a mean cannot leave [min, max]; clamp away division rounding
    return float(min(max(mean, scores.min()), scores.max()))


class TransitionType(enum.Enum):
    CUT = "Cut"
    GRADUAL = "Gradual"


@dataclass(frozen=True)
class DetectedTransition:
    """``start``/``end`` are frame numbers: the first frame of the change and
    the first frame of the new shot (equal for a cut)."""

    kind: TransitionType
    start: int
    end: int

    def to_json(self) -> dict:
        return {"frame": self.start, "end": self.end, "kind": self.kind.value}


def score_sequence(patterns: Sequence[PointPattern], cfg: MatchConfig) -> list[float]:
    return [pattern_resemblance(a, b, cfg) for a, b in zip(patterns, patterns[1:])]


def _frames(patterns: Sequence[PointPattern]) -> list[int]:
    return [p.frame if p.frame is not None else i for i, p in enumerate(patterns)]


def detect_shot_transitions(patterns: Sequence[PointPattern], cfg: MatchConfig) -> list[DetectedTransition]:
    """Cuts for short runs of low scores, one gradual transition per long run.

    A run of ``cfg.min_run`` or more consecutive sub-threshold scores is one
    gradual transition; shorter runs are reported as a cut per low score.
    """
    if len(patterns) < 2:
        raise InputError("need at least two patterns")
    scores = score_sequence(patterns, cfg)
    frames = _frames(patterns)
    low = [s < cfg.threshold for s in scores]
    out = []
    k = 0
    while k < len(low):
        if not low[k]:
            k += 1
            continue
        j = k
        while j + 1 < len(low) and low[j + 1]:
            j += 1
        if j - k + 1 >= cfg.min_run:
            out.append(DetectedTransition(TransitionType.GRADUAL, frames[k + 1], frames[j + 1]))
        else:
            out.extend(DetectedTransition(TransitionType.CUT, frames[i + 1], frames[i + 1]) for i in range(k, j + 1))
        k = j + 1
    return out


def transitions_to_manifest(
    transitions: Sequence[DetectedTransition],
    first_frame: int,
    last_frame: int,
    frame_rate: float = 25.0,
) -> dict:
    """Shot-manifest skeleton: one shot between consecutive transitions.

    Gradual transitions become dissolves whose ``tau`` covers the changing
    frames.
    """
    shots = []
    start = first_frame
    for tr in transitions:
        td = tr.start - start
        if td < 1:
            # back-to-back cuts on one frame: fold into the previous joint
            continue
        if tr.kind is TransitionType.CUT:
            shots.append({"t": start, "td": td, "transition": {"kind": "Cut", "tau": 0}})
        else:
            shots.append({"t": start, "td": td, "transition": {"kind": "Dissolve", "tau": tr.end - tr.start}})
        start = tr.end
    shots.append({"t": start, "td": last_frame + 1 - start, "transition": None})
    for i, s in enumerate(shots):
        s["id"] = i
    return {"frame_rate": frame_rate, "shots": shots}


def load_patterns(path) -> list[PointPattern]:
    with open(path) as fh:
        data = json.load(fh)
    try:
        patterns = [PointPattern(tuple(tuple(p) for p in rec["points"]), int(rec["frame"])) for rec in data]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed pattern file: {exc}") from exc
    return sorted(patterns, key=lambda p: p.frame)
