"""Sparse joint probability mass functions over named discrete variables.

A :class:`DiscreteDistribution` stores only the support (states with
``p > 0``); any state not present has probability zero. States are tuples of
integer symbols, one per variable, each in ``range(alphabet_size)``.

Variable subsets are passed around as *index sets*: sorted tuples of
positions into the distribution's variable order. Most functions accept
names, positions, or a mix, and resolve them with
:meth:`DiscreteDistribution.index_set`.
"""
from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Union

NORMALIZATION_TOL = 1e-9

VarRef = Union[int, str]
State = tuple[int, ...]
IndexSet = tuple[int, ...]


class DistributionError(ValueError):
    """Base class for malformed distributions and invalid variable references."""


class NegativeProbability(DistributionError):
    pass


class NotNormalized(DistributionError):
    def __init__(self, total: float):
        self.total = total
        self.deficit = 1.0 - total
        super().__init__(f"probabilities sum to {total!r} (deficit {self.deficit:.3g})")


class MalformedState(DistributionError):
    pass


class UnknownVariable(DistributionError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown variable"


class EmptyKeepSet(DistributionError):
    pass


class ZeroProbabilityCondition(DistributionError):
    """The conditioning event has probability zero."""


class OverlappingBlocks(DistributionError):
    pass


class EmptyBlock(DistributionError):
    pass


@dataclass(frozen=True)
class VariableId:
    name: str
    index: int


class DiscreteDistribution:
    """Joint pmf over ``N`` named finite-alphabet variables.

    Parameters
    ----------
    variables : sequence of str
        Unique variable names, in state-tuple order.
    alphabet_sizes : sequence of int
        Number of symbols of each variable.
    pmf : mapping of state tuple -> float
        Probabilities of the support states. Exact zeros are dropped.
    labels : sequence of sequence of str, optional
        Human-readable symbol names per variable, used only for I/O.
    check : bool
        Run :func:`validate` on construction (default).

    Instances are immutable; every operation returns a new distribution.
    """

    __slots__ = ("_variables", "_alphabets", "_pmf", "_labels", "_index")

    def __init__(
        self,
        variables: Sequence[str],
        alphabet_sizes: Sequence[int],
        pmf: Mapping[Sequence[int], float],
        labels: Sequence[Sequence[str]] | None = None,
        check: bool = True,
    ):
        variables = tuple(str(v) for v in variables)
        alphabets = tuple(int(a) for a in alphabet_sizes)
        if len(set(variables)) != len(variables):
            raise DistributionError(f"duplicate variable names in {variables}")
        if len(alphabets) != len(variables):
            raise DistributionError("one alphabet size per variable required")
        if any(a < 1 for a in alphabets):
            raise DistributionError("alphabet sizes must be positive")
        stored: dict[State, float] = {}
        for state, p in pmf.items():
            key = tuple(int(s) for s in state) if isinstance(state, Iterable) else (int(state),)
            p = float(p)
            if p == 0.0:
                continue
            stored[key] = stored.get(key, 0.0) + p
        self._variables = variables
        self._alphabets = alphabets
        self._pmf = stored
        self._labels = None if labels is None else tuple(tuple(str(s) for s in lab) for lab in labels)
        self._index = {name: i for i, name in enumerate(variables)}
        if check:
            validate(self)

    @classmethod
    def from_array(cls, array, variables: Sequence[str] | None = None, check: bool = True):
        """Build a distribution from a dense ndarray indexed by state."""
        import numpy as np

        array = np.asarray(array, dtype=float)
        if variables is None:
            variables = [f"x{i + 1}" for i in range(array.ndim)]
        pmf = {tuple(int(i) for i in idx): float(array[idx]) for idx in zip(*np.nonzero(array))}
        return cls(variables, array.shape, pmf, check=check)

    # -- accessors -------------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return self._variables

    @property
    def variable_ids(self) -> tuple[VariableId, ...]:
        return tuple(VariableId(n, i) for i, n in enumerate(self._variables))

    @property
    def alphabet_sizes(self) -> tuple[int, ...]:
        return self._alphabets

    @property
    def labels(self):
        return self._labels

    @property
    def pmf(self) -> Mapping[State, float]:
        return dict(self._pmf)

    @property
    def n_variables(self) -> int:
        return len(self._variables)

    def items(self):
        return self._pmf.items()

    def __len__(self):
        return len(self._pmf)

    def __getitem__(self, state) -> float:
        return self._pmf.get(tuple(state), 0.0)

    def __repr__(self):
        return (
            f"DiscreteDistribution(variables={self._variables}, "
            f"alphabet_sizes={self._alphabets}, support={len(self._pmf)})"
        )

    def __eq__(self, other):
        if not isinstance(other, DiscreteDistribution):
            return NotImplemented
        return (
            self._variables == other._variables
            and self._alphabets == other._alphabets
            and self._pmf == other._pmf
        )

    def __hash__(self):
        return hash((self._variables, self._alphabets, frozenset(self._pmf.items())))

    def allclose(self, other: DiscreteDistribution, atol: float = 1e-12) -> bool:
        if self._variables != other._variables or self._alphabets != other._alphabets:
            return False
        keys = set(self._pmf) | set(other._pmf)
        return all(abs(self[k] - other[k]) <= atol for k in keys)

    def to_array(self):
        import numpy as np

        out = np.zeros(self._alphabets)
        for state, p in self._pmf.items():
            out[state] = p
        return out

    # -- variable resolution ---------------------------------------------

    def resolve(self, ref: VarRef) -> int:
        if isinstance(ref, VariableId):
            ref = ref.index
        if isinstance(ref, str):
            try:
                return self._index[ref]
            except KeyError:
                raise UnknownVariable(f"no variable named {ref!r}; have {self._variables}") from None
        idx = int(ref)
        if not 0 <= idx < len(self._variables):
            raise UnknownVariable(f"variable index {idx} out of range")
        return idx

    def index_set(self, refs: Iterable[VarRef] | VarRef) -> IndexSet:
        """Resolve names/positions to a sorted, duplicate-free index tuple."""
        if isinstance(refs, (str, int, VariableId)):
            refs = [refs]
        return tuple(sorted({self.resolve(r) for r in refs}))


def validate(d: DiscreteDistribution) -> None:
    """Raise if ``d`` violates a distribution invariant; return ``None`` otherwise."""
    n = len(d.variables)
    for state, p in d.items():
        if len(state) != n:
            raise MalformedState(f"state {state} has {len(state)} symbols, expected {n}")
        for s, a in zip(state, d.alphabet_sizes):
            if not 0 <= s < a:
                raise MalformedState(f"symbol {s} outside alphabet of size {a} in state {state}")
        if not math.isfinite(p):
            raise MalformedState(f"non-finite probability {p} for state {state}")
        if p < 0:
            raise NegativeProbability(f"p{state} = {p} < 0")
    total = math.fsum(p for _, p in d.items())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalized(total)


def marginalize(d: DiscreteDistribution, keep) -> DiscreteDistribution:
    """Sum out every variable not in ``keep``; variable order follows ``keep`` sorted."""
    idx = d.index_set(keep)
    if not idx:
        raise EmptyKeepSet("cannot marginalize onto an empty variable set")
    if idx == tuple(range(d.n_variables)):
        return d
    acc: dict[State, float] = defaultdict(float)
    for state, p in d.items():
        acc[tuple(state[i] for i in idx)] += p
    labels = None if d.labels is None else [d.labels[i] for i in idx]
    return DiscreteDistribution(
        [d.variables[i] for i in idx], [d.alphabet_sizes[i] for i in idx], acc, labels, check=False
    )


def marginal_pmf(d: DiscreteDistribution, idx: IndexSet) -> dict[State, float]:
    """Marginal over an already-resolved index set as a plain dict."""
    acc: dict[State, float] = defaultdict(float)
    for state, p in d.items():
        acc[tuple(state[i] for i in idx)] += p
    return acc


def condition(d: DiscreteDistribution, on, state: Sequence[int] = ()) -> DiscreteDistribution:
    """Distribution of the remaining variables given ``on == state``.

    ``state`` lists one symbol per member of ``on`` in ascending index order.
    Raises :class:`ZeroProbabilityCondition` if the event never occurs.
    """
    idx = d.index_set(on)
    state = tuple(int(s) for s in state)
    if len(state) != len(idx):
        raise MalformedState(f"conditioning state {state} does not match variables {idx}")
    if not idx:
        return d
    rest = tuple(i for i in range(d.n_variables) if i not in idx)
    if not rest:
        raise EmptyKeepSet("conditioning on every variable leaves nothing")
    acc: dict[State, float] = defaultdict(float)
    for full, p in d.items():
        if tuple(full[i] for i in idx) == state:
            acc[tuple(full[i] for i in rest)] += p
    mass = math.fsum(acc.values())
    if mass <= 0.0:
        raise ZeroProbabilityCondition(f"p({dict(zip((d.variables[i] for i in idx), state))}) = 0")
    labels = None if d.labels is None else [d.labels[i] for i in rest]
    return DiscreteDistribution(
        [d.variables[i] for i in rest],
        [d.alphabet_sizes[i] for i in rest],
        {k: v / mass for k, v in acc.items()},
        labels,
        check=False,
    )


def group(d: DiscreteDistribution, blocks) -> DiscreteDistribution:
    """Merge each block of variables into one composite variable.

    The composite symbol is the mixed-radix code of the member symbols (first
    member most significant), so its alphabet is the product of the member
    alphabets. Variables outside every block are summed out.
    """
    resolved = []
    seen: set[int] = set()
    for block in blocks:
        idx = d.index_set(block)
        if not idx:
            raise EmptyBlock("blocks must be non-empty")
        if seen & set(idx):
            raise OverlappingBlocks(f"variables {sorted(seen & set(idx))} appear in several blocks")
        seen |= set(idx)
        resolved.append(idx)
    if not resolved:
        raise EmptyKeepSet("no blocks given")

    names = [",".join(d.variables[i] for i in idx) for idx in resolved]
    sizes = [math.prod(d.alphabet_sizes[i] for i in idx) for idx in resolved]

    def code(state, idx):
        c = 0
        for i in idx:
            c = c * d.alphabet_sizes[i] + state[i]
        return c

    acc: dict[State, float] = defaultdict(float)
    for state, p in d.items():
        acc[tuple(code(state, idx) for idx in resolved)] += p
    return DiscreteDistribution(names, sizes, acc, check=False)


class InvalidSplit(DistributionError):
    pass


@dataclass(frozen=True)
class SourceTargetSplit:
    """Source variables ``S`` and a single target ``Y``, as indices into a distribution.

    Source order is preserved: it fixes which source is "1", "2", ... in
    partial-information labels.
    """

    sources: IndexSet
    target: int

    def __post_init__(self):
        if not self.sources:
            raise InvalidSplit("at least one source variable is required")
        if len(set(self.sources)) != len(self.sources):
            raise InvalidSplit(f"duplicate sources {self.sources}")
        if self.target in self.sources:
            raise InvalidSplit("target cannot also be a source")

    @classmethod
    def of(cls, d: DiscreteDistribution, sources, target) -> SourceTargetSplit:
        if isinstance(sources, (str, int)):
            sources = [sources]
        try:
            src = tuple(d.resolve(s) for s in sources)
            tgt = d.resolve(target)
        except UnknownVariable as exc:
            raise InvalidSplit(str(exc)) from None
        return cls(src, tgt)

    @classmethod
    def default(cls, d: DiscreteDistribution) -> SourceTargetSplit:
        """All variables but the last are sources; the last is the target."""
        n = d.n_variables
        return cls(tuple(range(n - 1)), n - 1)

    @property
    def n_sources(self) -> int:
        return len(self.sources)

    @property
    def all_indices(self) -> IndexSet:
        return tuple(sorted(self.sources + (self.target,)))
