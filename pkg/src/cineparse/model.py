"""Shot / sequence data model and shot-manifest ingestion.

Time codes are integer frame indices. A shot occupies the half-open interval
``[t, t + td)``; the transition attached to shot ``i`` links it to shot
``i + 1`` and consumes ``tau`` frames, so ``t[i+1] == t[i] + td[i] + tau[i]``.
"""

from __future__ import annotations

import enum
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .errors import (
    EmptyManifest,
    InvalidManifest,
    InvalidTransition,
    NegativeDuration,
    NonContiguousTimeline,
)
from .histogram import DEFAULT_BINS, Histogram, compute_histogram, read_ppm

DEFAULT_FRAME_RATE = 25.0


class TransitionKind(enum.Enum):
    CUT = "Cut"
    DISSOLVE = "Dissolve"
    FADE_IN = "FadeIn"
    FADE_OUT = "FadeOut"

    @property
    def is_gradual(self) -> bool:
        return self is not TransitionKind.CUT

    @classmethod
    def parse(cls, raw: str) -> "TransitionKind":
        key = str(raw).replace("-", "").replace("_", "").replace(" ", "").lower()
        for kind in cls:
            if kind.value.lower() == key:
                return kind
        raise InvalidTransition(f"unknown transition kind {raw!r}")


@dataclass(frozen=True)
class TransitionEffect:
    kind: TransitionKind
    tau: int = 0

    def __post_init__(self):
        if self.tau < 0:
            raise InvalidTransition(f"transition duration must be non-negative, got {self.tau}")
        if (self.kind is TransitionKind.CUT) != (self.tau == 0):
            raise InvalidTransition(
                f"{self.kind.value} with tau={self.tau}: cuts take no time, gradual effects must"
            )

    @classmethod
    def cut(cls) -> "TransitionEffect":
        return cls(TransitionKind.CUT, 0)

    @classmethod
    def dissolve(cls, tau: int) -> "TransitionEffect":
        return cls(TransitionKind.DISSOLVE, tau)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "tau": self.tau}


CUT = TransitionEffect.cut()


@dataclass(frozen=True)
class Shot:
    id: int
    t: int
    td: int
    transition: TransitionEffect | None = None
    histogram: Histogram | None = None
    keyframe_ref: str | None = None

    @property
    def end(self) -> int:
        return self.t + self.td

    @property
    def tau(self) -> int:
        return self.transition.tau if self.transition is not None else 0

    @property
    def breaks_sequence(self) -> bool:
        """True when the effect after this shot is a dissolve or fade."""
        return self.transition is not None and self.transition.kind.is_gradual


@dataclass(frozen=True)
class SequenceSpan:
    first_shot: int
    last_shot: int

    def __contains__(self, shot_id: int) -> bool:
        return self.first_shot <= shot_id <= self.last_shot

    def __len__(self) -> int:
        return self.last_shot - self.first_shot + 1

    @property
    def shot_ids(self) -> range:
        return range(self.first_shot, self.last_shot + 1)

    def to_json(self) -> dict:
        return {"first_shot": self.first_shot, "last_shot": self.last_shot}


@dataclass(frozen=True)
class VideoDocument:
    shots: tuple[Shot, ...]
    frame_rate: float = DEFAULT_FRAME_RATE

    def __len__(self) -> int:
        return len(self.shots)

    def __getitem__(self, shot_id: int) -> Shot:
        return self.shots[shot_id]

    @property
    def end(self) -> int:
        last = self.shots[-1]
        return last.end + last.tau

    @property
    def durations(self) -> list[int]:
        return [s.td for s in self.shots]

    def with_histograms(self, histograms: Sequence[Histogram]) -> "VideoDocument":
        if len(histograms) != len(self.shots):
            raise InvalidManifest("one histogram per shot required")
        shots = tuple(replace(s, histogram=h) for s, h in zip(self.shots, histograms))
        return replace(self, shots=shots)


def _as_int(value: Any, what: str) -> int:
    if isinstance(value, bool):
        raise InvalidManifest(f"{what} must be an integer, got {value!r}")
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, int):
        return value
    raise InvalidManifest(f"{what} must be an integer, got {value!r}")


def _parse_transition(raw: Any, index: int) -> TransitionEffect | None:
    if raw is None:
        return None
    if isinstance(raw, str):
        raw = {"kind": raw}
    if not isinstance(raw, Mapping) or "kind" not in raw:
        raise InvalidTransition(f"shot {index}: transition needs a 'kind'")
    kind = TransitionKind.parse(raw["kind"])
    tau = raw.get("tau")
    if tau is None:
        if kind.is_gradual:
            raise InvalidTransition(f"shot {index}: {kind.value} requires tau > 0")
        tau = 0
    return TransitionEffect(kind, _as_int(tau, f"shot {index} tau"))


def validate_manifest(
    records: Sequence[Mapping[str, Any]] | Mapping[str, Any],
    frame_rate: float | None = None,
    bins_per_channel: int | None = None,
) -> VideoDocument:
    """Turn raw shot records into a checked :class:`VideoDocument`.

    ``records`` is either the manifest's ``shots`` list or the whole manifest
    mapping. Missing ``t`` values are derived from the duration/transition
    chain; explicit ones must agree with it. A missing transition on a
    non-final shot means a cut.
    """
    if isinstance(records, Mapping):
        if frame_rate is None:
            frame_rate = records.get("frame_rate")
        if bins_per_channel is None:
            bins_per_channel = records.get("bins_per_channel")
        records = records.get("shots")
    if not records:
        raise EmptyManifest("manifest contains no shots")
    if frame_rate is None:
        frame_rate = DEFAULT_FRAME_RATE
    if not isinstance(frame_rate, (int, float)) or isinstance(frame_rate, bool) or frame_rate <= 0:
        raise InvalidManifest(f"frame_rate must be a positive number, got {frame_rate!r}")

    shots = []
    expected_t = None
    n = len(records)
    for i, rec in enumerate(records):
        if not isinstance(rec, Mapping):
            raise InvalidManifest(f"shot record {i} is not an object")
        if "id" in rec and rec["id"] is not None and _as_int(rec["id"], f"shot {i} id") != i:
            raise InvalidManifest(f"shot ids must be 0..N-1 in time order; record {i} has id {rec['id']}")
        if "td" not in rec:
            raise InvalidManifest(f"shot {i}: missing 'td'")
        td = _as_int(rec["td"], f"shot {i} td")
        if td < 1:
            raise NegativeDuration(f"shot {i}: duration must be >= 1 frame, got {td}")

        transition = _parse_transition(rec.get("transition"), i)
        if transition is None and i < n - 1:
            transition = CUT

        t = rec.get("t")
        if t is not None:
            t = _as_int(t, f"shot {i} t")
            if t < 0:
                raise NonContiguousTimeline(f"shot {i}: negative time code {t}")
            if expected_t is not None and t != expected_t:
                raise NonContiguousTimeline(
                    f"shot {i}: explicit t={t} contradicts previous shot's end + tau = {expected_t}"
                )
        else:
            t = 0 if expected_t is None else expected_t

        hist = rec.get("histogram")
        if hist is not None:
            if isinstance(hist, Mapping):
                hist = Histogram.from_list(hist["counts"], hist.get("bins_per_channel", bins_per_channel))
            elif not isinstance(hist, Histogram):
                hist = Histogram.from_list(hist, bins_per_channel)
            if hist.bins_per_channel is None:
                raise InvalidManifest(f"shot {i}: histogram length {hist.counts.size} is not a cube b**3")

        keyframe = rec.get("keyframe", rec.get("keyframe_ref"))
        shot = Shot(i, t, td, transition, hist, None if keyframe is None else str(keyframe))
        shots.append(shot)
        expected_t = shot.end + shot.tau

    return VideoDocument(tuple(shots), float(frame_rate))


def sequence_boundaries(doc: VideoDocument) -> list[SequenceSpan]:
    """Split the shot list after every dissolve / fade."""
    spans = []
    first = 0
    last_id = len(doc.shots) - 1
    for shot in doc.shots:
        if shot.breaks_sequence and shot.id < last_id:
            spans.append(SequenceSpan(first, shot.id))
            first = shot.id + 1
    spans.append(SequenceSpan(first, last_id))
    return spans


def sequence_index(spans: Sequence[SequenceSpan], shot_id: int) -> int:
    for k, span in enumerate(spans):
        if shot_id in span:
            return k
    raise KeyError(shot_id)


# --- manifest JSON ---------------------------------------------------------


def document_to_json(doc: VideoDocument) -> dict:
    bins = {s.histogram.bins_per_channel for s in doc.shots if s.histogram is not None}
    out: dict[str, Any] = {"frame_rate": doc.frame_rate}
    shared_bins = bins.pop() if len(bins) == 1 else None
    if shared_bins is not None:
        out["bins_per_channel"] = shared_bins
    records = []
    for s in doc.shots:
        rec: dict[str, Any] = {
            "id": s.id,
            "t": s.t,
            "td": s.td,
            "transition": None if s.transition is None else s.transition.to_json(),
        }
        if s.keyframe_ref is not None:
            rec["keyframe"] = s.keyframe_ref
        if s.histogram is not None:
            if shared_bins is not None:
                rec["histogram"] = s.histogram.to_list()
            else:
                rec["histogram"] = {
                    "bins_per_channel": s.histogram.bins_per_channel,
                    "counts": s.histogram.to_list(),
                }
        records.append(rec)
    out["shots"] = records
    return out


def load_manifest(
    path: str | os.PathLike,
    bins_per_channel: int = DEFAULT_BINS,
    workers: int = 1,
) -> VideoDocument:
    """Read a manifest file and fill in histograms from key frames.

    Shots that carry a precomputed histogram keep it; shots with only a
    ``keyframe`` path (resolved relative to the manifest) get one computed at
    ``bins_per_channel``.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidManifest(f"{path}: not valid JSON ({exc})") from exc
    doc = validate_manifest(raw)
    return attach_histograms(doc, bins_per_channel, base_dir=path.parent, workers=workers)


def attach_histograms(
    doc: VideoDocument,
    bins_per_channel: int = DEFAULT_BINS,
    base_dir: str | os.PathLike = ".",
    workers: int = 1,
) -> VideoDocument:
    todo = [s for s in doc.shots if s.histogram is None and s.keyframe_ref is not None]
    if not todo:
        return doc
    base = Path(base_dir)

    def work(shot: Shot) -> Histogram:
        ref = Path(shot.keyframe_ref)
        return compute_histogram(read_ppm(ref if ref.is_absolute() else base / ref), bins_per_channel)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            computed = list(pool.map(work, todo))
    else:
        computed = [work(s) for s in todo]
    by_id = {s.id: h for s, h in zip(todo, computed)}
    return doc.with_histograms([by_id.get(s.id, s.histogram) for s in doc.shots])


def make_document(
    durations: Iterable[int],
    transitions: Mapping[int, TransitionEffect] | None = None,
    histograms: Sequence[Histogram] | None = None,
    frame_rate: float = DEFAULT_FRAME_RATE,
) -> VideoDocument:
    """Convenience constructor: cuts everywhere unless ``transitions`` says otherwise."""
    durations = list(durations)
    transitions = transitions or {}
    records = []
    for i, td in enumerate(durations):
        tr = transitions.get(i)
        if tr is None and i < len(durations) - 1:
            tr = CUT
        rec: dict[str, Any] = {"td": td, "transition": None if tr is None else tr.to_json()}
        if histograms is not None:
            rec["histogram"] = histograms[i]
        records.append(rec)
    return validate_manifest(records, frame_rate)
