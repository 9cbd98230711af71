"""Boundary precision/recall against a reference segmentation.

A boundary is the first shot of every scene except the one starting at
shot 0. A predicted boundary counts as a hit when some reference boundary
lies within ``tolerance`` shots of it (and vice versa for recall).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import UniverseMismatch
from .scenes import Segmentation
from .synth import GroundTruth

Scenes = Union[Segmentation, GroundTruth, Sequence[tuple[int, int]]]


def _intervals(x: Scenes) -> list[tuple[int, int]]:
    if isinstance(x, Segmentation):
        return x.intervals()
    if isinstance(x, GroundTruth):
        return list(x.scenes)
    return [(int(a), int(b)) for a, b in x]


@dataclass(frozen=True)
class SceneDiff:
    truth: tuple[int, int]
    predicted: tuple[int, int]
    begin_offset: int
    end_offset: int


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    predicted_scenes: int
    truth_scenes: int
    one_shot_scenes: int
    tolerance: int
    diffs: tuple[SceneDiff, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "predicted_scenes": self.predicted_scenes,
            "truth_scenes": self.truth_scenes,
            "one_shot_scenes": self.one_shot_scenes,
            "tolerance": self.tolerance,
            "diffs": [
                {
                    "truth": list(d.truth),
                    "predicted": list(d.predicted),
                    "begin_offset": d.begin_offset,
                    "end_offset": d.end_offset,
                }
                for d in self.diffs
            ],
        }


def boundary_scores(predicted: Sequence[int], truth: Sequence[int], tolerance: int = 0) -> tuple[float, float, float]:
    """(precision, recall, F1). Both sides empty counts as perfect agreement;
    an empty side otherwise scores 0 for its own ratio."""
    if not predicted and not truth:
        return 1.0, 1.0, 1.0
    hit_p = sum(any(abs(p - t) <= tolerance for t in truth) for p in predicted)
    hit_t = sum(any(abs(p - t) <= tolerance for p in predicted) for t in truth)
    precision = hit_p / len(predicted) if predicted else 0.0
    recall = hit_t / len(truth) if truth else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def evaluate(predicted: Scenes, truth: Scenes, tolerance: int = 0) -> EvalReport:
    pred, ref = _intervals(predicted), _intervals(truth)
    if not pred or not ref or pred[-1][1] != ref[-1][1] or pred[0][0] != ref[0][0]:
        raise UniverseMismatch("predicted and reference segmentations cover different shots")
    pb = [a for a, _ in pred if a != pred[0][0]]
    tb = [a for a, _ in ref if a != ref[0][0]]
    p, r, f = boundary_scores(pb, tb, tolerance)
    diffs = []
    for t in ref:
        best = max(pred, key=lambda q: (min(q[1], t[1]) - max(q[0], t[0]), -q[0]))
        diffs.append(SceneDiff(t, best, best[0] - t[0], best[1] - t[1]))
    return EvalReport(
        p,
        r,
        f,
        len(pred),
        len(ref),
        sum(1 for a, b in pred if a == b),
        tolerance,
        tuple(diffs),
    )


def format_table(
    initial: Scenes,
    coupled: Scenes,
    truth: Scenes | None = None,
    titles: tuple[str, str, str] = ("Spatial-temporal", "Coupled", "Truth"),
) -> str:
    """Side-by-side scene table: multi-shot scenes listed with begin/end
    shots, one-shot scenes collected on a trailing "remaining" line."""
    cols = [initial, coupled] + ([truth] if truth is not None else [])
    titles = titles[: len(cols)]
    multi = [[iv for iv in _intervals(c) if iv[0] != iv[1]] for c in cols]
    single = [[iv[0] for iv in _intervals(c) if iv[0] == iv[1]] for c in cols]
    w = 24
    header = "".join(f"{t:<{w}}" for t in titles).rstrip()
    sub = "".join(f"{'No':<4}{'Begin':<10}{'End':<10}" for _ in cols).rstrip()
    lines = [header, sub]
    for row in range(max(len(m) for m in multi)):
        cells = []
        for m in multi:
            if row < len(m):
                a, b = m[row]
                cells.append(f"{row + 1:<4}{'Shot ' + str(a):<10}{'Shot ' + str(b):<10}")
            else:
                cells.append(" " * w)
        lines.append("".join(cells).rstrip())
    lines.append("Remaining one-shot scenes:")
    for t, s in zip(titles, single):
        lines.append(f"  {t}: {', '.join(map(str, s)) if s else '-'}")
    return "\n".join(lines) + "\n"
