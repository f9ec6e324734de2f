"""Williams-Beer partial information decomposition for two or three sources.

Redundancy is measured with the minimum specific information ``I_min`` and
partial-information atoms are obtained by Moebius inversion over the
redundancy lattice of antichains.

Antichain members are tuples of *source positions* (0-based positions in
``split.sources``). Labels use 1-based positions, e.g. ``"{1}{23}"``.
"""
from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .dist import DiscreteDistribution, SourceTargetSplit, ZeroProbabilityCondition
from .measures import InternalInconsistency, _split, interaction_information

CLAMP_TOL = 1e-9


class UnsupportedSourceCount(ValueError):
    pass


class DecompositionError(ArithmeticError):
    """A partial-information atom came out clearly negative."""


class ZeroProbabilityTarget(ZeroProbabilityCondition):
    pass


@dataclass(frozen=True, order=True)
class Antichain:
    """A lattice node: source subsets none of which contains another."""

    members: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        members = tuple(sorted({tuple(sorted(set(m))) for m in self.members}, key=lambda m: (len(m), m)))
        if not members or any(not m for m in members):
            raise ValueError("antichain members must be non-empty")
        for a, b in combinations(members, 2):
            if set(a) <= set(b) or set(b) <= set(a):
                raise ValueError(f"{a} and {b} are comparable; not an antichain")
        object.__setattr__(self, "members", members)

    @classmethod
    def parse(cls, label: str) -> Antichain:
        """Parse ``"{1}{23}"`` style labels (1-based, single-digit positions)."""
        groups = re.findall(r"\{([^{}]*)\}", label)
        if not groups or "".join("{" + g + "}" for g in groups) != label.replace(" ", ""):
            raise ValueError(f"cannot parse antichain label {label!r}")
        return cls(tuple(tuple(int(c) - 1 for c in g.replace(",", "")) for g in groups))

    @property
    def label(self) -> str:
        return "".join("{" + "".join(str(i + 1) for i in m) + "}" for m in self.members)

    def __str__(self):
        return self.label

    def below(self, other: Antichain) -> bool:
        """Lattice order: every member of ``other`` contains some member of ``self``."""
        return all(any(set(a) <= set(b) for a in self.members) for b in other.members)


def _nodes(*labels: str) -> tuple[Antichain, ...]:
    return tuple(Antichain.parse(s) for s in labels)


# Listed bottom-up; each node appears after everything below it.
_LATTICES = {
    2: _nodes("{1}{2}", "{1}", "{2}", "{12}"),
    3: _nodes(
        "{1}{2}{3}",
        "{1}{2}", "{1}{3}", "{2}{3}",
        "{1}{23}", "{2}{13}", "{3}{12}",
        "{1}", "{2}", "{3}", "{12}{13}{23}",
        "{12}{13}", "{12}{23}", "{13}{23}",
        "{12}", "{13}", "{23}",
        "{123}",
    ),
}


def lattice(n_sources: int) -> list[Antichain]:
    """Redundancy lattice for ``n_sources`` in {2, 3}, in a topological (bottom-up) order."""
    try:
        return list(_LATTICES[n_sources])
    except KeyError:
        raise UnsupportedSourceCount(f"PID supports 2 or 3 sources, got {n_sources}") from None


def _source_tables(d: DiscreteDistribution, split: SourceTargetSplit):
    """``p(y)``, and per source subset ``A`` the tables ``p(a, y)`` and ``p(a)``."""
    n = split.n_sources
    joint: dict[tuple, float] = defaultdict(float)
    for state, p in d.items():
        joint[(tuple(state[i] for i in split.sources), state[split.target])] += p
    p_y: dict[int, float] = defaultdict(float)
    for (_, y), p in joint.items():
        p_y[y] += p
    subsets = [c for k in range(1, n + 1) for c in combinations(range(n), k)]
    p_ay: dict[tuple, dict] = {}
    p_a: dict[tuple, dict] = {}
    for sub in subsets:
        ay: dict[tuple, float] = defaultdict(float)
        a: dict[tuple, float] = defaultdict(float)
        for (x, y), p in joint.items():
            key = tuple(x[i] for i in sub)
            ay[(key, y)] += p
            a[key] += p
        p_ay[sub] = ay
        p_a[sub] = a
    return p_y, p_ay, p_a


def _specific(p_y, p_ay, p_a, sub, y) -> float:
    py = p_y[y]
    terms = []
    for (a, yy), pay in p_ay[sub].items():
        if yy != y:
            continue
        pa = p_a[sub][a]
        if pa <= 0.0:
            raise InternalInconsistency(f"p(a)=0 for a state with p(a|y)>0 (a={a}, y={y})")
        terms.append((pay / py) * math.log2(pay / (pa * py)))
    return max(math.fsum(terms), 0.0)


def specific_information(d: DiscreteDistribution, split, y_state: int, subset=None):
    """Specific information ``I_spec(y; A) = sum_a p(a|y) log2[p(y|a) / p(y)]``.

    Parameters
    ----------
    subset : iterable of int, optional
        Source positions (0-based) forming ``A``. When omitted a dict over
        every non-empty subset of the sources is returned.
    """
    split = _split(d, split)
    p_y, p_ay, p_a = _source_tables(d, split)
    if p_y.get(y_state, 0.0) <= 0.0:
        raise ZeroProbabilityTarget(f"p(y={y_state}) = 0")
    if subset is None:
        return {sub: _specific(p_y, p_ay, p_a, sub, y_state) for sub in p_ay}
    sub = tuple(sorted(set(subset)))
    if sub not in p_ay:
        raise ValueError(f"{subset} is not a non-empty subset of source positions")
    return _specific(p_y, p_ay, p_a, sub, y_state)


def _as_node(node) -> Antichain:
    return Antichain.parse(node) if isinstance(node, str) else node


def _imin_all(d, split, nodes):
    p_y, p_ay, p_a = _source_tables(d, split)
    spec = {
        y: {sub: _specific(p_y, p_ay, p_a, sub, y) for sub in p_ay}
        for y in sorted(p_y)
        if p_y[y] > 0.0
    }
    out = {}
    for node in nodes:
        out[node] = math.fsum(p_y[y] * min(spec[y][m] for m in node.members) for y in spec)
    return out


def i_min(d: DiscreteDistribution, split, node) -> float:
    """Redundancy ``I_min(Y; node) = sum_y p(y) min_{A in node} I_spec(y; A)``."""
    split = _split(d, split)
    node = _as_node(node)
    for m in node.members:
        if max(m) >= split.n_sources:
            raise ValueError(f"node {node} refers to a source beyond {split.n_sources}")
    return _imin_all(d, split, [node])[node]


@dataclass
class PIDResult:
    split: SourceTargetSplit
    terms: dict[Antichain, float]
    imin: dict[Antichain, float] = field(repr=False)

    def __getitem__(self, node) -> float:
        return self.terms[_as_node(node)]

    @property
    def n_sources(self) -> int:
        return self.split.n_sources

    @property
    def total(self) -> float:
        return math.fsum(self.terms.values())

    # two-source names
    @property
    def redundancy(self) -> float:
        return self["{1}{2}"] if self.n_sources == 2 else self["{1}{2}{3}"]

    @property
    def synergy(self) -> float:
        return self["{12}"] if self.n_sources == 2 else self["{123}"]

    def unique(self, source: int) -> float:
        """Unique information of 1-based ``source``."""
        return self["{%d}" % source]

    def by_label(self) -> dict[str, float]:
        return {node.label: v for node, v in self.terms.items()}


def decompose(d: DiscreteDistribution, split=None, order=None) -> PIDResult:
    """Partial information decomposition of ``I(S;Y)`` for 2 or 3 sources.

    ``order`` optionally overrides the evaluation order with another linear
    extension of the lattice; the result does not depend on it.
    """
    split = _split(d, split)
    nodes = lattice(split.n_sources)
    if order is not None:
        order = [_as_node(n) for n in order]
        if sorted(order) != sorted(nodes):
            raise ValueError("order must be a permutation of the lattice nodes")
        nodes = order
    imin = _imin_all(d, split, nodes)
    raw: dict[Antichain, float] = {}
    for node in nodes:
        below = [b for b in nodes if b != node and b.below(node)]
        if any(b not in raw for b in below):
            raise ValueError("order is not a linear extension of the lattice")
        raw[node] = imin[node] - math.fsum(raw[b] for b in below)
    terms = {}
    for node in lattice(split.n_sources):
        v = raw[node]
        if v < 0.0:
            if v <= -CLAMP_TOL:
                raise DecompositionError(f"partial information {node} = {v:.3e} < 0")
            v = 0.0
        terms[node] = v
    return PIDResult(split, terms, imin)


# Coefficients of the atoms in the (n+1)-variable interaction information.
def _ii_coefficients(n: int) -> dict[Antichain, int]:
    # II(Y; X_1..X_n) = sum over non-empty A of (-1)^(n-|A|) I(A; Y), and
    # I(A; Y) collects every atom below the single-member node {A}.
    coef: dict[Antichain, int] = defaultdict(int)
    for node in lattice(n):
        for k in range(1, n + 1):
            for sub in combinations(range(n), k):
                if node.below(Antichain((sub,))):
                    coef[node] += (-1) ** (n - k)
    return dict(coef)


def ii_from_pid(pid: PIDResult) -> float:
    """Interaction information of ``{Y} + S`` rebuilt from the atoms.

    For two sources this is synergy minus redundancy; for three it is the
    alternating combination with the doubled ``{12}{13}{23}`` atom.
    """
    coef = _ii_coefficients(pid.n_sources)
    return math.fsum(c * pid.terms[node] for node, c in coef.items() if c)


def ii_consistency(d: DiscreteDistribution, split, pid: PIDResult) -> float:
    """Absolute gap between the entropy-expansion II and its PID reconstruction."""
    split = _split(d, split)
    ii = interaction_information(d, split.all_indices)
    return abs(ii - ii_from_pid(pid))
