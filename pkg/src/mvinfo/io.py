"""Readers and writers for distributions, event lists, rasters and sweep tables.

Distribution CSV::

    p,x1,x2,y
    0.25,0,0,0
    ...

Symbols that are all non-negative integers are used as codes directly;
otherwise the sorted distinct strings of a column become its alphabet.
Probabilities may be decimals or fractions such as ``1/4``.

Distribution JSON::

    {"variables": ["x1", "y"], "alphabets": [2, 2],
     "states": [{"state": [0, 0], "p": 0.5}, {"state": [1, 1], "p": 0.5}]}

``states`` entries may also be plain lists ``[p, s1, s2, ...]``.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from pathlib import Path

import numpy as np

from .dist import DiscreteDistribution
from .ingest import EventSeries, SpikeRaster, SweepTable


class ParseError(ValueError):
    pass


SIG_DIGITS = 12


def fmt(x: float, digits: int = SIG_DIGITS) -> str:
    """Plain decimal rendering rounded half-even to ``digits`` significant digits."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    d = Decimal(x)
    q = d.quantize(Decimal(1).scaleb(d.adjusted() - digits + 1), rounding=ROUND_HALF_EVEN)
    s = format(q, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _prob(text: str) -> float:
    text = text.strip()
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a probability: {text!r}") from None


def _encode_columns(columns: list[list[str]]):
    sizes, labels, coded, any_labels = [], [], [], False
    for col in columns:
        if all(s.strip().isdigit() for s in col):
            codes = [int(s) for s in col]
            sizes.append(max(codes) + 1 if codes else 1)
            labels.append([str(i) for i in range(sizes[-1])])
            coded.append(codes)
        else:
            any_labels = True
            alphabet = sorted({s.strip() for s in col})
            pos = {s: i for i, s in enumerate(alphabet)}
            sizes.append(len(alphabet))
            labels.append(alphabet)
            coded.append([pos[s.strip()] for s in col])
    return sizes, (labels if any_labels else None), coded


def parse_distribution_csv(text: str) -> DiscreteDistribution:
    rows = [r for r in csv.reader(_io.StringIO(text)) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ParseError("empty distribution file")
    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "p" or len(header) < 2:
        raise ParseError("header must be `p,var1,var2,...`")
    body = rows[1:]
    for r in body:
        if len(r) != len(header):
            raise ParseError(f"row {r} has {len(r)} fields, expected {len(header)}")
    probs = [_prob(r[0]) for r in body]
    columns = [[r[k] for r in body] for k in range(1, len(header))]
    sizes, labels, coded = _encode_columns(columns)
    pmf: dict[tuple, float] = {}
    for k, p in enumerate(probs):
        state = tuple(col[k] for col in coded)
        pmf[state] = pmf.get(state, 0.0) + p
    return DiscreteDistribution(header[1:], sizes, pmf, labels)


def parse_distribution_json(text: str) -> DiscreteDistribution:
    try:
        obj = json.loads(text)
        variables = obj["variables"]
        states = obj["states"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"bad distribution JSON: {exc}") from None
    pmf: dict[tuple, float] = {}
    for entry in states:
        if isinstance(entry, dict):
            p, state = entry["p"], entry["state"]
        else:
            p, state = entry[0], entry[1:]
        p = _prob(str(p))
        key = tuple(int(s) for s in state)
        pmf[key] = pmf.get(key, 0.0) + p
    alphabets = obj.get("alphabets")
    if alphabets is None:
        alphabets = [max((s[i] for s in pmf), default=0) + 1 for i in range(len(variables))]
    return DiscreteDistribution(variables, alphabets, pmf, obj.get("labels"))


def read_distribution(path) -> DiscreteDistribution:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        return parse_distribution_json(text)
    return parse_distribution_csv(text)


def distribution_to_csv(d: DiscreteDistribution) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", *d.variables])
    for state in sorted(s for s, _ in d.items()):
        syms = state if d.labels is None else [d.labels[i][s] for i, s in enumerate(state)]
        w.writerow([fmt(d[state]), *syms])
    return buf.getvalue()


def distribution_to_json(d: DiscreteDistribution) -> str:
    obj = {
        "variables": list(d.variables),
        "alphabets": list(d.alphabet_sizes),
        "states": [{"state": list(s), "p": d[s]} for s in sorted(s for s, _ in d.items())],
    }
    if d.labels is not None:
        obj["labels"] = [list(lab) for lab in d.labels]
    return json.dumps(obj, indent=2)


def write_distribution(d: DiscreteDistribution, path) -> None:
    path = Path(path)
    text = distribution_to_json(d) if path.suffix.lower() == ".json" else distribution_to_csv(d)
    path.write_text(text, encoding="utf-8")


# -- spike data -----------------------------------------------------------


def _channel_order(ids):
    ids = sorted(set(ids), key=str)
    if all(str(i).lstrip("-").isdigit() for i in ids):
        return sorted(ids, key=lambda s: int(s))
    return ids


def read_events(path, duration: float | None = None) -> EventSeries:
    """Event CSV with header ``channel,time_s``; one spike per row."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows or [h.strip() for h in rows[0][:2]] != ["channel", "time_s"]:
        raise ParseError("event file header must be `channel,time_s`")
    events = []
    for r in rows[1:]:
        try:
            events.append((r[0].strip(), float(r[1])))
        except (IndexError, ValueError):
            raise ParseError(f"bad event row {r}") from None
    return EventSeries(_channel_order(ch for ch, _ in events), events, duration)


def write_events(ev: EventSeries, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["channel", "time_s"])
        for ch, t in ev.events:
            w.writerow([ch, repr(t)])


def read_raster(path) -> SpikeRaster:
    """Raster CSV: ``# bin_width_s=<w>`` comment, then ``channel,b0,b1,...`` rows."""
    bin_width = None
    channels, rows = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                if key.strip() == "bin_width_s":
                    bin_width = float(val)
                continue
            ch, _, rest = line.partition(",")
            channels.append(ch.strip())
            rows.append(np.array(rest.split(","), dtype=np.uint8) if rest else np.zeros(0, np.uint8))
    if bin_width is None:
        raise ParseError("raster file lacks a `# bin_width_s=<value>` line")
    if not rows:
        raise ParseError("raster file has no channels")
    if len({r.size for r in rows}) != 1:
        raise ParseError("raster rows have different lengths")
    return SpikeRaster(tuple(channels), bin_width, np.vstack(rows))


def write_raster(r: SpikeRaster, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# bin_width_s={r.bin_width!r}\n")
        for ch, row in zip(r.channels, r.bins):
            fh.write(str(ch) + "," + ",".join("1" if v else "0" for v in row) + "\n")


def write_sweep(table: SweepTable, path, scale: float = 1.0, extra: dict[str, np.ndarray] | None = None) -> None:
    """Sweep CSV ``y,x1,x2,<measure>...,<measure>_norm...,h_y[,extra...]``.

    Values are multiplied by ``scale`` (1000 for millibits); normalized
    columns are ratios and are left unscaled. Empty cells mark triplets whose
    target has zero entropy.
    """
    extra = extra or {}
    norm = table.normalized()
    ch = table.channels
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["y", "x1", "x2", *table.columns, *(c + "_norm" for c in table.columns), "h_y", *extra])
        extra_cols = list(extra.values())
        for r in range(len(table)):
            w.writerow(
                [ch[table.y[r]], ch[table.x1[r]], ch[table.x2[r]]]
                + [fmt(v * scale) for v in table.values[r].tolist()]
                + [fmt(v) for v in norm[r].tolist()]
                + [fmt(float(table.h_y[r]) * scale)]
                + [fmt(float(col[r])) for col in extra_cols]
            )
