"""Color histograms and the intersection-based (dis)similarity measures.

Histograms are uniform RGB quantizations: a channel value ``v`` falls in
bucket ``floor(v * b / 256)`` and the flat bin index is ``r*b*b + g*b + b``.
Counts are plain integers so every measure here is exact up to the final
division.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import (
    EmptyReferenceHistogram,
    InvalidBinCount,
    InvalidImage,
    LayoutMismatch,
)

DEFAULT_BINS = 4


@dataclass(frozen=True, eq=False)
class Histogram:
    """Bin counts plus the quantization that produced them.

    ``bins_per_channel`` may be None for free-form count vectors (handy in
    tests and for externally computed features); such histograms only
    compare against vectors of the same length.
    """

    counts: np.ndarray
    bins_per_channel: int | None = None

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 1 or counts.size == 0:
            raise InvalidBinCount("histogram counts must be a non-empty 1-D vector")
        if counts.dtype.kind not in "iu":
            if not np.all(np.equal(np.mod(counts, 1), 0)):
                raise InvalidBinCount("histogram counts must be integers")
        counts = counts.astype(np.int64)
        if np.any(counts < 0):
            raise InvalidBinCount("histogram counts must be non-negative")
        b = self.bins_per_channel
        if b is not None:
            if not 2 <= b <= 256:
                raise InvalidBinCount(f"bins per channel must lie in [2, 256], got {b}")
            if counts.size != b**3:
                raise InvalidBinCount(f"expected {b**3} bins for b={b}, got {counts.size}")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_counts(cls, counts: Sequence[int], bins_per_channel: int | None = None) -> "Histogram":
        return cls(np.asarray(counts), bins_per_channel)

    @classmethod
    def from_list(cls, counts: Sequence[int], bins_per_channel: int | None = None) -> "Histogram":
        """Build from a manifest array, inferring ``b`` from a cube length."""
        if bins_per_channel is None:
            root = round(len(counts) ** (1 / 3))
            if root**3 == len(counts) and root >= 2:
                bins_per_channel = root
        return cls(np.asarray(counts), bins_per_channel)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def layout(self) -> tuple[int, int | None]:
        return (int(self.counts.size), self.bins_per_channel)

    def to_list(self) -> list[int]:
        return [int(c) for c in self.counts]

    def __eq__(self, other):
        if not isinstance(other, Histogram):
            return NotImplemented
        return self.layout == other.layout and bool(np.array_equal(self.counts, other.counts))

    def __hash__(self):
        return hash((self.layout, self.counts.tobytes()))

    def __repr__(self):
        return f"Histogram(total={self.total}, layout={self.layout})"


HistogramLike = Union[Histogram, Sequence[int], np.ndarray]


def _as_histogram(h: HistogramLike) -> Histogram:
    return h if isinstance(h, Histogram) else Histogram.from_counts(h)


@dataclass(frozen=True, eq=False)
class Image:
    """8-bit RGB raster, ``pixels`` shaped ``(height, width, 3)``."""

    width: int
    height: int
    pixels: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidImage("image must contain at least one pixel")
        px = np.asarray(self.pixels, dtype=np.uint8)
        if px.shape != (self.height, self.width, 3):
            px = px.reshape(self.height, self.width, 3)
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_array(cls, arr) -> "Image":
        arr = np.asarray(arr, dtype=np.uint8)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise InvalidImage(f"expected an (h, w, 3) array, got shape {arr.shape}")
        return cls(arr.shape[1], arr.shape[0], arr)


def _check_bins(b: int) -> None:
    if isinstance(b, bool) or not isinstance(b, (int, np.integer)) or not 2 <= b <= 256:
        raise InvalidBinCount(f"bins per channel must be an integer in [2, 256], got {b!r}")


def quantize(values: np.ndarray, bins_per_channel: int) -> np.ndarray:
    return (values.astype(np.int64) * bins_per_channel) // 256


def compute_histogram(img: Image, bins_per_channel: int = DEFAULT_BINS) -> Histogram:
    _check_bins(bins_per_channel)
    b = int(bins_per_channel)
    q = quantize(img.pixels.reshape(-1, 3), b)
    flat = (q[:, 0] * b + q[:, 1]) * b + q[:, 2]
    counts = np.bincount(flat, minlength=b**3)
    return Histogram(counts, b)


def _check_layout(hi: Histogram, hj: Histogram) -> None:
    if hi.layout != hj.layout:
        raise LayoutMismatch(f"histogram layouts differ: {hi.layout} vs {hj.layout}")


def intersection(hi: HistogramLike, hj: HistogramLike) -> int:
    hi, hj = _as_histogram(hi), _as_histogram(hj)
    _check_layout(hi, hj)
    return int(np.minimum(hi.counts, hj.counts).sum())


def similarity(hi: HistogramLike, hj: HistogramLike) -> float:
    """Intersection normalized by the *second* histogram's mass.

    The measure is therefore asymmetric when totals differ:
    ``similarity([4, 0], [2, 0]) == 1.0`` but the reverse is 0.5.
    """
    hi, hj = _as_histogram(hi), _as_histogram(hj)
    _check_layout(hi, hj)
    ref = hj.total
    if ref == 0:
        raise EmptyReferenceHistogram("reference histogram is empty")
    return intersection(hi, hj) / ref


def dissimilarity(hi: HistogramLike, hj: HistogramLike) -> float:
    """``1 - similarity``, computed from integer counts so that a ratio such as
    1/10 comes out exactly 0.1 and compares cleanly against the threshold."""
    hi, hj = _as_histogram(hi), _as_histogram(hj)
    _check_layout(hi, hj)
    ref = hj.total
    if ref == 0:
        raise EmptyReferenceHistogram("reference histogram is empty")
    return (ref - intersection(hi, hj)) / ref


# --- binary PPM (P6) -------------------------------------------------------

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def read_ppm(path: Union[str, os.PathLike]) -> Image:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_ppm(data)


def parse_ppm(data: bytes) -> Image:
    pos = 0
    fields = []
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise InvalidImage("truncated PPM header")
        fields.append(m.group(1))
        pos = m.end()
    magic, w, h, maxval = fields
    if magic != b"P6":
        raise InvalidImage(f"only binary PPM (P6) is supported, got {magic!r}")
    try:
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError as exc:
        raise InvalidImage("malformed PPM header") from exc
    if maxval != 255:
        raise InvalidImage(f"only maxval 255 is supported, got {maxval}")
    # exactly one whitespace byte separates the header from the raster
    pos += 1
    need = width * height * 3
    raster = data[pos : pos + need]
    if len(raster) != need:
        raise InvalidImage(f"PPM raster holds {len(raster)} bytes, expected {need}")
    px = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    return Image(width, height, px)


def format_ppm(img: Image) -> bytes:
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(img.pixels, dtype=np.uint8).tobytes()


def write_ppm(path: Union[str, os.PathLike], img: Image) -> None:
    with open(path, "wb") as fh:
        fh.write(format_ppm(img))


def bin_center_color(index: int, bins_per_channel: int) -> tuple[int, int, int]:
    """An RGB triple that quantizes back into flat bin ``index``."""
    b = bins_per_channel
    r, rem = divmod(index, b * b)
    g, bl = divmod(rem, b)
    return tuple(int((q * 2 + 1) * 128 // b) for q in (r, g, bl))


def render_histogram(h: Histogram, width: int | None = None) -> Image:
    """Flat-color raster whose histogram is exactly ``h``.

    Pixels are laid out bin by bin in row-major order; ``width`` defaults to
    the largest divisor of the total not exceeding its square root.
    """
    if h.bins_per_channel is None:
        raise InvalidBinCount("rendering requires a histogram with a declared bin layout")
    total = h.total
    if total == 0:
        raise InvalidImage("cannot render an empty histogram")
    if width is None:
        rows = max(d for d in range(1, int(total**0.5) + 1) if total % d == 0)
        width = total // rows
    if total % width:
        raise InvalidImage(f"total {total} is not divisible by width {width}")
    colors = np.array(
        [bin_center_color(i, h.bins_per_channel) for i in range(h.counts.size)],
        dtype=np.uint8,
    )
    px = np.repeat(colors, h.counts, axis=0)
    return Image(width, total // width, px)
