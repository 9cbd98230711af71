"""Pipeline configuration shared by the library entry points and the CLI."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .clustering import DEFAULT_THRESHOLD
from .histogram import DEFAULT_BINS
from .rhythm import DEFAULT_ALPHA, DEFAULT_MIN_GROUP, Denominator

STAGES = ("clustering", "tcg", "initial")


@dataclass(frozen=True)
class Config:
    threshold: float = DEFAULT_THRESHOLD
    alpha: float = DEFAULT_ALPHA
    min_group: int = DEFAULT_MIN_GROUP
    bins_per_channel: int = DEFAULT_BINS
    denominator: Denominator = Denominator.GROUP_SIZE
    stop_after: str | None = None

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.min_group < 3:
            raise ValueError(f"min_group must be at least 3, got {self.min_group}")
        if not 2 <= self.bins_per_channel <= 256:
            raise ValueError(f"bins_per_channel must lie in [2, 256], got {self.bins_per_channel}")
        object.__setattr__(self, "denominator", Denominator.parse(self.denominator))
        if self.stop_after is not None and self.stop_after not in STAGES:
            raise ValueError(f"stop_after must be one of {STAGES}, got {self.stop_after!r}")

    def to_json(self) -> dict:
        out = asdict(self)
        out["denominator"] = self.denominator.value
        return out
