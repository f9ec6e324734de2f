"""Shannon and multivariate information measures over a :class:`DiscreteDistribution`.

Every function returns a value in bits. Variable arguments accept names or
positions (single values or iterables); see :meth:`DiscreteDistribution.index_set`.
Measures that separate sources from a target take a
:class:`~mvinfo.dist.SourceTargetSplit`.

Measures that are non-negative in exact arithmetic (entropies, mutual
informations, TC, DTC, Delta I) have float round-off below ``-NEG_FLOOR``
clamped to zero. Interaction information, co-information, RSI and Varadan's
synergy are signed and returned as computed.
"""
from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import combinations

from .dist import (
    DiscreteDistribution,
    DistributionError,
    IndexSet,
    InvalidSplit,
    SourceTargetSplit,
    marginal_pmf,
)

NEG_FLOOR = 1e-12


class InternalInconsistency(ArithmeticError):
    """A quantity that is provably non-zero evaluated to zero."""


def _clamp(value: float) -> float:
    if -NEG_FLOOR < value < 0.0:
        return 0.0
    return value


def _plogp_sum(probs) -> float:
    probs = [p for p in probs if p > 0.0]
    # one support state is a point mass even if rounding left it a hair below 1
    if len(probs) <= 1:
        return 0.0
    return -math.fsum(p * math.log2(p) for p in probs)


class EntropyTable:
    """Memoized joint entropies of variable subsets of one distribution.

    Most multivariate measures are signed sums of subset entropies; sharing
    one table across a batch of measures avoids recomputing marginals.
    """

    def __init__(self, d: DiscreteDistribution):
        self.d = d
        self._cache: dict[IndexSet, float] = {(): 0.0}

    def __call__(self, idx) -> float:
        key = tuple(sorted(set(idx)))
        h = self._cache.get(key)
        if h is None:
            h = _plogp_sum(marginal_pmf(self.d, key).values())
            self._cache[key] = h
        return h


def _table(d: DiscreteDistribution, cache: EntropyTable | None) -> EntropyTable:
    if cache is not None and cache.d is d:
        return cache
    return EntropyTable(d)


def _nonempty(d: DiscreteDistribution, refs, what: str) -> IndexSet:
    idx = d.index_set(refs)
    if not idx:
        raise DistributionError(f"{what} must name at least one variable")
    return idx


def _disjoint(*sets: IndexSet) -> None:
    seen: set[int] = set()
    for s in sets:
        if seen & set(s):
            raise DistributionError("variable sets must be disjoint")
        seen |= set(s)


# -- Shannon quantities -------------------------------------------------


def entropy(d: DiscreteDistribution, over=None, *, cache: EntropyTable | None = None) -> float:
    """Joint entropy ``H(over)``; all variables when ``over`` is None."""
    idx = tuple(range(d.n_variables)) if over is None else _nonempty(d, over, "entropy set")
    return _clamp(_table(d, cache)(idx))


def conditional_entropy(d, of, given, *, cache=None) -> float:
    """``H(of | given) = sum_z p(z) H(of | z)``, evaluated as ``H(of, given) - H(given)``."""
    a = _nonempty(d, of, "`of`")
    g = _nonempty(d, given, "`given`")
    _disjoint(a, g)
    h = _table(d, cache)
    return _clamp(h(a + g) - h(g))


def mutual_information(d, a, b, *, cache=None) -> float:
    """``I(a; b) = H(a) + H(b) - H(a, b)``; multi-variable sets are treated as one vector variable."""
    a = _nonempty(d, a, "first set")
    b = _nonempty(d, b, "second set")
    _disjoint(a, b)
    h = _table(d, cache)
    return _clamp(h(a) + h(b) - h(a + b))


def conditional_mutual_information(d, a, b, given=(), *, cache=None) -> float:
    """``I(a; b | given) = H(a,g) + H(b,g) - H(a,b,g) - H(g)``."""
    a = _nonempty(d, a, "first set")
    b = _nonempty(d, b, "second set")
    g = d.index_set(given)
    _disjoint(a, b, g)
    h = _table(d, cache)
    return _clamp(h(a + g) + h(b + g) - h(a + b + g) - h(g))


# -- multivariate measures ---------------------------------------------


def _subsets(idx: IndexSet) -> Iterator[IndexSet]:
    for k in range(1, len(idx) + 1):
        yield from combinations(idx, k)


def interaction_information(d, vars=None, *, cache=None) -> float:
    """McGill's interaction information of ``vars`` (all variables by default).

    ``II(S) = -sum_{T subset S} (-1)^(|S|-|T|) H(T)``. For three variables this
    equals ``I(X;Y|Z) - I(X;Y)``; for two it is the mutual information.
    """
    idx = tuple(range(d.n_variables)) if vars is None else d.index_set(vars)
    if len(idx) < 2:
        raise DistributionError("interaction information needs at least two variables")
    h = _table(d, cache)
    n = len(idx)
    terms = [(-1) ** (n - len(t)) * h(t) for t in _subsets(idx)]
    return -math.fsum(terms)


def co_information(d, vars=None, *, cache=None) -> float:
    """Bell's co-information, ``CI(S) = (-1)^|S| II(S)``."""
    idx = tuple(range(d.n_variables)) if vars is None else d.index_set(vars)
    ii = interaction_information(d, idx, cache=cache)
    return ii if len(idx) % 2 == 0 else -ii


def total_correlation(d, vars=None, *, cache=None) -> float:
    """Watanabe's total correlation, ``sum_i H(X_i) - H(S)``."""
    idx = tuple(range(d.n_variables)) if vars is None else d.index_set(vars)
    if len(idx) < 2:
        raise DistributionError("total correlation needs at least two variables")
    h = _table(d, cache)
    return _clamp(math.fsum(h((i,)) for i in idx) - h(idx))


def dual_total_correlation(d, vars=None, *, cache=None) -> float:
    """Han's dual total correlation, ``sum_i H(S minus X_i) - (n-1) H(S)``."""
    idx = tuple(range(d.n_variables)) if vars is None else d.index_set(vars)
    if len(idx) < 2:
        raise DistributionError("dual total correlation needs at least two variables")
    h = _table(d, cache)
    n = len(idx)
    rest = [tuple(j for j in idx if j != i) for i in idx]
    return _clamp(math.fsum(h(r) for r in rest) - (n - 1) * h(idx))


# -- source/target measures --------------------------------------------


def _split(d: DiscreteDistribution, split) -> SourceTargetSplit:
    if split is None:
        return SourceTargetSplit.default(d)
    if isinstance(split, SourceTargetSplit):
        return split
    sources, target = split
    return SourceTargetSplit.of(d, sources, target)


def _independent_model(d: DiscreteDistribution, split: SourceTargetSplit):
    """Pieces of the conditionally independent decoding model.

    Returns ``(joint, p_y, p_ind_x_given_y, p_ind_x)`` where ``joint`` maps
    ``(x_vec, y)`` to ``p(x_vec, y)`` over the support, ``p_ind_x_given_y``
    maps ``(x_vec, y)`` to ``prod_i p(x_i | y)`` and ``p_ind_x`` maps ``x_vec``
    to ``sum_y p_ind(x_vec | y) p(y)``. Only support states of ``x_vec`` are
    evaluated, which is all either measure needs.
    """
    src, tgt = split.sources, split.target
    joint: dict[tuple, float] = defaultdict(float)
    for state, p in d.items():
        joint[(tuple(state[i] for i in src), state[tgt])] += p
    p_y: dict[int, float] = defaultdict(float)
    for (_, y), p in joint.items():
        p_y[y] += p
    # p(x_i, y) for each source position
    single: list[dict[tuple[int, int], float]] = [defaultdict(float) for _ in src]
    for (x, y), p in joint.items():
        for k, xi in enumerate(x):
            single[k][(xi, y)] += p

    def p_ind_given(x, y) -> float:
        py = p_y[y]
        out = 1.0
        for k, xi in enumerate(x):
            out *= single[k].get((xi, y), 0.0) / py
        return out

    xs = {x for x, _ in joint}
    cond = {(x, y): p_ind_given(x, y) for x in xs for y in p_y}
    p_ind_x = {x: math.fsum(cond[(x, y)] * p_y[y] for y in p_y) for x in xs}
    return joint, p_y, cond, p_ind_x


def delta_i(d, split=None) -> float:
    """Nirenberg-Latham Delta I: cost of decoding ``Y`` while ignoring source correlations.

    ``sum_x p(x) sum_y p(y|x) log2[p(y|x) / p_ind(y|x)]`` with
    ``p_ind(y|x) = prod_i p(x_i|y) p(y) / p_ind(x)``.
    """
    split = _split(d, split)
    joint, p_y, cond, p_ind_x = _independent_model(d, split)
    p_x: dict[tuple, float] = defaultdict(float)
    for (x, _), p in joint.items():
        p_x[x] += p
    terms = []
    for (x, y), p in joint.items():
        num = cond[(x, y)] * p_y[y]
        if num <= 0.0 or p_ind_x[x] <= 0.0:
            raise InternalInconsistency(f"independent model assigns zero mass to support state {x}, y={y}")
        p_ind_y_x = num / p_ind_x[x]
        terms.append(p * math.log2((p / p_x[x]) / p_ind_y_x))
    return _clamp(math.fsum(terms))


def mi_delta_gap(d, split=None) -> float:
    """``I(S;Y) - Delta I(S;Y)`` evaluated directly as ``sum p(x,y) log2[p_ind(x|y) / p_ind(x)]``."""
    split = _split(d, split)
    joint, _, cond, p_ind_x = _independent_model(d, split)
    terms = []
    for (x, y), p in joint.items():
        if cond[(x, y)] <= 0.0 or p_ind_x[x] <= 0.0:
            raise InternalInconsistency(f"independent model assigns zero mass to support state {x}, y={y}")
        terms.append(p * math.log2(cond[(x, y)] / p_ind_x[x]))
    return math.fsum(terms)


def redundancy_synergy_index(d, split=None, *, cache=None) -> float:
    """Chechik's RSI, ``I(S;Y) - sum_i I(X_i;Y)``."""
    split = _split(d, split)
    if split.n_sources < 2:
        raise InvalidSplit("RSI needs at least two sources")
    h = _table(d, cache)
    y = (split.target,)
    joint = mutual_information(d, split.sources, y, cache=h)
    return joint - math.fsum(mutual_information(d, (i,), y, cache=h) for i in split.sources)


def set_partitions(items: Sequence) -> Iterator[list[tuple]]:
    """All partitions of ``items`` into non-empty blocks (block order follows first element)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [(first,)] + part
        for k in range(len(part)):
            yield part[:k] + [(first,) + part[k]] + part[k + 1 :]


def varadan_synergy(d, split=None, *, cache=None) -> float:
    """Varadan's synergy: ``I(S;Y)`` minus the best split of ``S`` into two or more blocks.

    The maximum runs over every set partition of the sources with at least two
    blocks, each block contributing ``I(block; Y)``.
    """
    split = _split(d, split)
    if split.n_sources < 2:
        raise InvalidSplit("Varadan's synergy needs at least two sources")
    h = _table(d, cache)
    y = (split.target,)
    best = max(
        math.fsum(mutual_information(d, block, y, cache=h) for block in part)
        for part in set_partitions(split.sources)
        if len(part) >= 2
    )
    return mutual_information(d, split.sources, y, cache=h) - best


@dataclass(frozen=True)
class MeasureResult:
    value: float
    measure_name: str
    split: SourceTargetSplit | None = None
    label: str = ""

    def scaled(self, factor: float) -> float:
        return self.value * factor
