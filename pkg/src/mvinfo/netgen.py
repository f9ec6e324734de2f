"""Three-node probabilistic network: X1 -> X2, X1 -> Y, X2 -> Y.

Each node fires spontaneously with probability ``p_r``; every active parent
adds an independent chance to fire (noisy-OR). The joint over
``(x1, x2, y)`` is computed exactly.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .dist import DiscreteDistribution, SourceTargetSplit
from . import measures
from . import pid as _pid


class ParamOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class NetworkParams:
    p_r: float
    p_12: float
    p_1y: float
    p_2y: float

    def __post_init__(self):
        for name, v in asdict(self).items():
            if not (0.0 <= v <= 1.0) or math.isnan(v):
                raise ParamOutOfRange(f"{name}={v} is not a probability")


# Parameter sets of the five worked network examples (Ex. 9-13).
EXAMPLES = {
    9: NetworkParams(0.02, 0.0, 0.1, 0.1),
    10: NetworkParams(0.02, 0.1, 0.1, 0.1),
    11: NetworkParams(0.02, 0.1, 0.0, 0.1),
    12: NetworkParams(0.02, 0.1, 0.1, 0.0),
    13: NetworkParams(0.02, 0.1, 0.0, 0.0),
}


def noisy_or(p_r: float, *drives: float) -> float:
    """Probability a node fires given the strengths of its active drives."""
    stay_off = 1.0 - p_r
    for p in drives:
        stay_off *= 1.0 - p
    return 1.0 - stay_off


def expand(params: NetworkParams) -> DiscreteDistribution:
    """Exact joint distribution of ``(x1, x2, y)``, binary alphabets."""
    pr = params.p_r
    pmf = {}
    for x1 in (0, 1):
        p1 = pr if x1 else 1.0 - pr
        on2 = noisy_or(pr, *([params.p_12] if x1 else []))
        for x2 in (0, 1):
            p2 = on2 if x2 else 1.0 - on2
            drives = ([params.p_1y] if x1 else []) + ([params.p_2y] if x2 else [])
            ony = noisy_or(pr, *drives)
            for y in (0, 1):
                py = ony if y else 1.0 - ony
                pmf[(x1, x2, y)] = p1 * p2 * py
    return DiscreteDistribution(("x1", "x2", "y"), (2, 2, 2), pmf)


SWEEP_MEASURES = (
    "mi_x1", "mi_x2", "mi_joint", "ii", "tc", "dtc", "delta_i", "rsi", "vs",
    "pid_red", "pid_unq1", "pid_unq2", "pid_syn",
)


def sweep(params: NetworkParams, unit: str = "millibits") -> dict[str, float]:
    """Every measure of the expanded network with ``S = {x1, x2}`` and target ``y``."""
    scale = {"bits": 1.0, "millibits": 1000.0}[unit]
    d = expand(params)
    split = SourceTargetSplit((0, 1), 2)
    h = measures.EntropyTable(d)
    p = _pid.decompose(d, split)
    values = {
        "mi_x1": measures.mutual_information(d, 0, 2, cache=h),
        "mi_x2": measures.mutual_information(d, 1, 2, cache=h),
        "mi_joint": measures.mutual_information(d, (0, 1), 2, cache=h),
        "ii": measures.interaction_information(d, (0, 1, 2), cache=h),
        "tc": measures.total_correlation(d, (0, 1, 2), cache=h),
        "dtc": measures.dual_total_correlation(d, (0, 1, 2), cache=h),
        "delta_i": measures.delta_i(d, split),
        "rsi": measures.redundancy_synergy_index(d, split, cache=h),
        "vs": measures.varadan_synergy(d, split, cache=h),
        "pid_red": p["{1}{2}"],
        "pid_unq1": p["{1}"],
        "pid_unq2": p["{2}"],
        "pid_syn": p["{12}"],
    }
    return {k: v * scale for k, v in values.items()}
