"""Worked-example regression tables.

``data/golden_tables.json`` holds the example distributions, the network
parameter sets and one record per published table cell (value, unit and
absolute tolerance). :func:`run_tables` recomputes each cell from scratch
with the general-purpose measure functions and compares.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from . import measures, netgen
from . import pid as _pid
from .dist import DiscreteDistribution, SourceTargetSplit
from .io import _prob

TABLES = ("I", "II", "III", "IV", "V", "VI", "VII", "AI")
_UNIT_SCALE = {"bits": 1.0, "millibits": 1000.0, "probability": 1.0}


@lru_cache(maxsize=1)
def load() -> dict:
    text = resources.files("mvinfo").joinpath("data/golden_tables.json").read_text(encoding="utf-8")
    return json.loads(text)


def example(name: str) -> tuple[DiscreteDistribution, SourceTargetSplit]:
    """Distribution and source/target split of a named worked example."""
    entry = load()["examples"][name]
    if "network" in entry:
        d = netgen.expand(network_params(entry["network"]))
    else:
        pmf = {}
        for row in entry["states"]:
            key = tuple(int(s) for s in row[1:])
            pmf[key] = pmf.get(key, 0.0) + _prob(str(row[0]))
        d = DiscreteDistribution(entry["variables"], entry["alphabets"], pmf)
    return d, SourceTargetSplit.of(d, entry["sources"], entry["target"])


def network_params(number: int) -> netgen.NetworkParams:
    return netgen.NetworkParams(**load()["networks"][str(number)])


def _parse_state(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in text.split(","))


def compute(name: str, measure: str) -> float:
    """Value of ``measure`` for example ``name``, in bits (or as a probability).

    Looked up through the module namespaces on every call so that patched
    implementations are what get checked.
    """
    d, split = example(name)
    y = (split.target,)
    if measure.startswith("mi_x"):
        src = split.sources[int(measure[4:]) - 1]
        return measures.mutual_information(d, (src,), y)
    if measure == "mi_joint":
        return measures.mutual_information(d, split.sources, y)
    if measure == "ii":
        return measures.interaction_information(d, split.all_indices)
    if measure == "ci":
        return measures.co_information(d, split.all_indices)
    if measure == "tc":
        return measures.total_correlation(d, split.all_indices)
    if measure == "dtc":
        return measures.dual_total_correlation(d, split.all_indices)
    if measure == "delta_i":
        return measures.delta_i(d, split)
    if measure == "rsi":
        return measures.redundancy_synergy_index(d, split)
    if measure == "vs":
        return measures.varadan_synergy(d, split)
    if measure.startswith("pid"):
        return _pid.decompose(d, split)[measure[3:]]
    if measure.startswith("p_ind(") or measure.startswith("p(y="):
        return _conditional_cell(d, split, measure)
    if measure.startswith("p("):
        return d[_parse_state(measure[2:-1])]
    raise KeyError(f"unknown golden measure {measure!r}")


def _conditional_cell(d, split, measure: str) -> float:
    # "p_ind(y=1|1,1)" or "p(y=1|1,1)"
    head, _, rest = measure.partition("(y=")
    y_txt, _, x_txt = rest[:-1].partition("|")
    y, x = int(y_txt), _parse_state(x_txt)
    p_y: dict[int, float] = defaultdict(float)
    p_xy: dict[tuple, float] = defaultdict(float)
    single = [defaultdict(float) for _ in split.sources]
    for state, p in d.items():
        yy = state[split.target]
        p_y[yy] += p
        p_xy[(tuple(state[i] for i in split.sources), yy)] += p
        for k, i in enumerate(split.sources):
            single[k][(state[i], yy)] += p
    if head == "p":
        p_x = sum(v for (xx, _), v in p_xy.items() if xx == x)
        return p_xy.get((x, y), 0.0) / p_x
    # Bayes over the conditionally independent model: p_ind(x|y) p(y) / p_ind(x)
    weight = {}
    for yy, pyy in p_y.items():
        w = pyy
        for k, xi in enumerate(x):
            w *= single[k].get((xi, yy), 0.0) / pyy
        weight[yy] = w
    return weight.get(y, 0.0) / sum(weight.values())


@dataclass(frozen=True)
class CellResult:
    table: str
    example: str
    measure: str
    unit: str
    expected: float
    actual: float
    tol: float

    @property
    def residual(self) -> float:
        return self.actual - self.expected

    @property
    def passed(self) -> bool:
        return abs(self.residual) <= self.tol


def run_tables(tables=None) -> list[CellResult]:
    """Recompute every golden cell (optionally only ``tables``) and compare."""
    wanted = None if tables is None else {t.upper() for t in tables}
    out = []
    for cell in load()["cells"]:
        if wanted is not None and cell["table"].upper() not in wanted:
            continue
        scale = _UNIT_SCALE[cell["unit"]]
        actual = compute(cell["example"], cell["measure"]) * scale
        out.append(
            CellResult(cell["table"], cell["example"], cell["measure"], cell["unit"], cell["value"], actual, cell["tol"])
        )
    return out
