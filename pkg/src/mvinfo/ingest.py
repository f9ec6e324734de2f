"""Spike-train ingestion: binning, triplet estimation, sweeps and the rotation null.

A triplet ``(x1, x2 -> y)`` pairs the states of channels ``x1`` and ``x2`` at
bin ``t`` with the state of ``y`` at bin ``t + 1``; its joint pmf is the
empirical frequency over ``t = 0 .. T-2``.
"""
from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .dist import DiscreteDistribution


class IngestError(ValueError):
    pass


class NonPositiveBinWidth(IngestError):
    pass


class DuplicateChannel(IngestError):
    pass


class TooShort(IngestError):
    pass


class EmptyInput(IngestError):
    pass


# guard against t / w landing a hair below an exact bin edge
_EDGE_DIGITS = 9


@dataclass(frozen=True)
class EventSeries:
    channels: tuple
    events: tuple  # ((channel, time_s), ...) sorted by time
    duration: float

    def __init__(self, channels: Sequence, events: Iterable[tuple], duration: float | None = None):
        events = sorted(((ch, float(t)) for ch, t in events), key=lambda e: e[1])
        if duration is None:
            duration = events[-1][1] if events else 0.0
        for ch, t in events:
            if not 0.0 <= t <= duration:
                raise IngestError(f"event time {t} outside [0, {duration}]")
            if ch not in channels:
                raise IngestError(f"event on unknown channel {ch!r}")
        object.__setattr__(self, "channels", tuple(channels))
        object.__setattr__(self, "events", tuple(events))
        object.__setattr__(self, "duration", float(duration))


@dataclass(frozen=True)
class SpikeRaster:
    channels: tuple
    bin_width: float
    bins: np.ndarray = field(repr=False)

    def __post_init__(self):
        bins = np.ascontiguousarray(self.bins, dtype=np.uint8)
        if bins.ndim != 2 or bins.shape[0] != len(self.channels):
            raise IngestError("bins must be a (n_channels, n_bins) matrix")
        if bins.size and bins.max() > 1:
            raise IngestError("raster cells must be 0 or 1")
        if len(set(self.channels)) != len(self.channels):
            raise DuplicateChannel("channel ids must be unique")
        bins.setflags(write=False)
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "bins", bins)

    @property
    def n_bins(self) -> int:
        return self.bins.shape[1]

    def index(self, channel) -> int:
        try:
            return self.channels.index(channel)
        except ValueError:
            raise IngestError(f"unknown channel {channel!r}") from None

    def __eq__(self, other):
        if not isinstance(other, SpikeRaster):
            return NotImplemented
        return (
            self.channels == other.channels
            and self.bin_width == other.bin_width
            and np.array_equal(self.bins, other.bins)
        )


def n_bins_for(duration: float, bin_width: float) -> int:
    return max(1, math.ceil(round(duration / bin_width, _EDGE_DIGITS)))


def bin(events: EventSeries, bin_width: float) -> SpikeRaster:
    """Binary raster: cell ``(c, t)`` is 1 iff channel ``c`` fires in ``[t w, (t+1) w)``.

    An event exactly at ``duration`` on a bin edge falls in the last bin.
    """
    if not bin_width > 0:
        raise NonPositiveBinWidth(f"bin width must be positive, got {bin_width}")
    n = n_bins_for(events.duration, bin_width)
    out = np.zeros((len(events.channels), n), dtype=np.uint8)
    if events.events:
        row = {ch: i for i, ch in enumerate(events.channels)}
        ch_idx = np.fromiter((row[ch] for ch, _ in events.events), dtype=np.intp)
        times = np.fromiter((t for _, t in events.events), dtype=np.float64)
        t_idx = np.floor(np.round(times / bin_width, _EDGE_DIGITS)).astype(np.intp)
        np.minimum(t_idx, n - 1, out=t_idx)
        out[ch_idx, t_idx] = 1
    return SpikeRaster(events.channels, bin_width, out)


def _triplet_counts(r: SpikeRaster, i: int, j: int, k: int) -> np.ndarray:
    b = r.bins
    code = 4 * b[i, :-1].astype(np.intp) + 2 * b[j, :-1] + b[k, 1:]
    return np.bincount(code, minlength=8)


def triplet_distribution(r: SpikeRaster, x1, x2, y) -> DiscreteDistribution:
    """Empirical pmf of ``(x1_t, x2_t, y_{t+1})`` as a distribution over ``("x1", "x2", "y")``."""
    if len({x1, x2, y}) != 3:
        raise DuplicateChannel(f"triplet channels must be distinct, got {(x1, x2, y)}")
    if r.n_bins < 2:
        raise TooShort("need at least two bins for a one-bin lag")
    counts = _triplet_counts(r, r.index(x1), r.index(x2), r.index(y))
    total = r.n_bins - 1
    pmf = {(a >> 2, (a >> 1) & 1, a & 1): c / total for a, c in enumerate(counts) if c}
    return DiscreteDistribution(("x1", "x2", "y"), (2, 2, 2), pmf)


# Selection names -> kernel columns.
MEASURE_GROUPS = {
    "mi_single": ("mi_x1", "mi_x2"),
    "mi_joint": ("mi_joint",),
    "ii": ("ii",),
    "ci": ("ci",),
    "tc": ("tc",),
    "dtc": ("dtc",),
    "delta_i": ("delta_i",),
    "mi_delta_gap": ("mi_delta_gap",),
    "rsi": ("rsi",),
    "vs": ("vs",),
    "pid": ("pid_red", "pid_unq1", "pid_unq2", "pid_syn"),
}


def resolve_measures(selection: Iterable[str] | None) -> tuple[str, ...]:
    """Expand selection names (groups or single columns) into kernel column names."""
    if selection is None:
        return tuple(c for c in kernels.COLUMNS if c != "h_y")
    cols: list[str] = []
    for name in selection:
        if name in MEASURE_GROUPS:
            expanded = MEASURE_GROUPS[name]
        elif name in kernels.COLUMNS and name != "h_y":
            expanded = (name,)
        else:
            raise KeyError(f"unknown measure {name!r}")
        cols.extend(c for c in expanded if c not in cols)
    return tuple(cols)


@dataclass(frozen=True)
class TripletResult:
    x1: object
    x2: object
    y: object
    measures: dict
    normalizer: float | None  # H(Y) in bits; None when H(Y) == 0

    @property
    def h_y(self) -> float:
        return 0.0 if self.normalizer is None else self.normalizer

    @property
    def normalized(self) -> dict | None:
        if self.normalizer is None:
            return None
        return {k: v / self.normalizer for k, v in self.measures.items()}


@dataclass
class SweepTable:
    """Column-oriented sweep output; rows sorted by ``(y, x1, x2)`` channel position."""

    channels: tuple
    y: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    columns: tuple
    values: np.ndarray  # (n_rows, len(columns)), bits
    h_y: np.ndarray

    def __len__(self):
        return self.y.size

    def normalized(self) -> np.ndarray:
        out = np.full_like(self.values, np.nan)
        ok = self.h_y > 0
        out[ok] = self.values[ok] / self.h_y[ok, None]
        return out

    def results(self) -> list[TripletResult]:
        ch = self.channels
        out = []
        for r in range(len(self)):
            h = float(self.h_y[r])
            out.append(
                TripletResult(
                    ch[self.x1[r]], ch[self.x2[r]], ch[self.y[r]],
                    dict(zip(self.columns, self.values[r].tolist())),
                    h if h > 0 else None,
                )
            )
        return out


def triplet_index(n_channels: int):
    """``(y, x1, x2, pair_row)`` index arrays for every triplet, sorted by ``(y, x1, x2)``."""
    pairs = list(combinations(range(n_channels), 2))
    ys, x1s, x2s, rows = [], [], [], []
    for y in range(n_channels):
        for p, (i, j) in enumerate(pairs):
            if y != i and y != j:
                ys.append(y)
                x1s.append(i)
                x2s.append(j)
                rows.append(p)
    as_arr = lambda v: np.asarray(v, dtype=np.intp)  # noqa: E731
    return as_arr(ys), as_arr(x1s), as_arr(x2s), as_arr(rows)


def sweep_table(r: SpikeRaster, measures: Iterable[str] | None = None, backend: str | None = None) -> SweepTable:
    """Every triplet measure for every ``({x1, x2}, y)`` group of distinct channels."""
    n = len(r.channels)
    if n < 3:
        raise IngestError("a sweep needs at least three channels")
    if r.n_bins < 2:
        raise TooShort("need at least two bins for a one-bin lag")
    cols = resolve_measures(measures)
    counts = kernels.triplet_counts(r.bins, backend)
    ys, x1s, x2s, rows = triplet_index(n)
    pmf = counts[rows, ys].astype(np.float64) / (r.n_bins - 1)
    table = kernels.binary_measures(pmf, backend)
    pick = [kernels.COLUMNS.index(c) for c in cols]
    return SweepTable(r.channels, ys, x1s, x2s, cols, table[:, pick], table[:, 0])


def triplet_sweep(r: SpikeRaster, measures: Iterable[str] | None = None, backend: str | None = None) -> list[TripletResult]:
    """Like :func:`sweep_table`, as a list of :class:`TripletResult`."""
    return sweep_table(r, measures, backend).results()


def rotate(r: SpikeRaster, offsets: Sequence[int]) -> SpikeRaster:
    """Circularly shift each channel's bins right by its offset."""
    offsets = list(offsets)
    if len(offsets) != len(r.channels):
        raise IngestError("one offset per channel required")
    out = np.empty_like(r.bins)
    for c, k in enumerate(offsets):
        out[c] = np.roll(r.bins[c], int(k))
    return SpikeRaster(r.channels, r.bin_width, out)


def shuffle_null(r: SpikeRaster, seed: int) -> SpikeRaster:
    """Split each channel at an independent random point and swap the two pieces.

    Equivalent to a circular shift by an offset drawn uniformly from
    ``[1, T-1]``; each channel's spike count is preserved exactly.
    """
    T = r.n_bins
    if T < 2:
        raise TooShort("need at least two bins to split a train")
    rng = np.random.default_rng(seed)
    return rotate(r, rng.integers(1, T, size=len(r.channels)))


PERCENTILES = (10, 50, 90)


def summarize(results) -> dict[str, dict[str, float]]:
    """10th/50th/90th percentiles and mean of each normalized measure.

    Percentiles interpolate linearly between closest ranks. Triplets whose
    target has zero entropy carry no normalized values and are skipped.
    """
    if isinstance(results, SweepTable):
        columns, norm = results.columns, results.normalized()
        norm = norm[~np.isnan(norm).any(axis=1)] if norm.size else norm
    else:
        results = list(results)
        if not results:
            raise EmptyInput("nothing to summarize")
        columns = tuple(results[0].measures)
        rows = [[res.normalized[c] for c in columns] for res in results if res.normalized is not None]
        norm = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(columns))
    if len(columns) == 0 or (isinstance(results, SweepTable) and len(results) == 0):
        raise EmptyInput("nothing to summarize")
    out = {}
    for k, c in enumerate(columns):
        v = norm[:, k]
        if v.size == 0:
            out[c] = {"p10": math.nan, "p50": math.nan, "p90": math.nan, "mean": math.nan, "n": 0}
            continue
        p10, p50, p90 = np.percentile(v, PERCENTILES, method="linear")
        out[c] = {"p10": float(p10), "p50": float(p50), "p90": float(p90), "mean": float(v.mean()), "n": int(v.size)}
    return out
