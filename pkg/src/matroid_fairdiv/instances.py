"""Instances, allocations and the comparison primitives built on them.

Agents are numbered from 1 in the public API (their index is also their
tie-breaking priority); internally bundles live in a tuple where position
``i - 1`` belongs to agent ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, UnsupportedKindError
from .valuations import Valuation


def as_weight(w) -> Fraction:
    """Parse ``3``, ``"3/2"``, ``Fraction(3, 2)``; floats are rejected to stay exact."""
    if isinstance(w, float):
        raise InputError(f"weights must be exact (int, Fraction or 'p/q' string), got float {w!r}")
    try:
        w = Fraction(w)
    except (ValueError, ZeroDivisionError, TypeError):
        raise InputError(f"cannot parse weight {w!r}") from None
    if w <= 0:
        raise InputError(f"weights must be strictly positive, got {w}")
    return w


@dataclass(frozen=True)
class Agent:
    index: int
    weight: Fraction
    valuation: Valuation


@dataclass(frozen=True)
class Instance:
    goods: tuple
    agents: tuple

    def __post_init__(self):
        goods = tuple(self.goods)
        if len(set(goods)) != len(goods):
            raise InputError("good labels must be unique")
        agents = tuple(self.agents)
        for pos, agent in enumerate(agents, start=1):
            if agent.index != pos:
                raise InputError(f"agent indices must be 1..n in order, got {agent.index} at position {pos}")
            if agent.valuation.ground != goods:
                raise InputError(f"agent {agent.index}'s valuation is over a different ground set")
            if agent.weight <= 0:
                raise InputError("weights must be strictly positive")
        object.__setattr__(self, "goods", goods)
        object.__setattr__(self, "agents", agents)

    @classmethod
    def build(cls, goods: Iterable[str], valuations: Sequence[Valuation], weights=None) -> "Instance":
        goods = tuple(goods)
        if weights is None:
            weights = [1] * len(valuations)
        if len(weights) != len(valuations):
            raise InputError("one weight per valuation required")
        return cls(goods, tuple(
            Agent(i, as_weight(w), v) for i, (w, v) in enumerate(zip(weights, valuations), start=1)
        ))

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def m(self) -> int:
        return len(self.goods)

    @property
    def weights(self) -> tuple:
        return tuple(a.weight for a in self.agents)

    @property
    def valuations(self) -> tuple:
        return tuple(a.valuation for a in self.agents)

    def all_matroid_kind(self) -> bool:
        return all(a.valuation.is_matroid_kind for a in self.agents)

    def with_weights(self, weights) -> "Instance":
        return Instance.build(self.goods, self.valuations, weights)

    def with_valuations(self, valuations) -> "Instance":
        return Instance.build(self.goods, valuations, self.weights)

    def restrict_goods(self, kept: Iterable[str]) -> "Instance":
        kept = frozenset(kept)
        order = tuple(g for g in self.goods if g in kept)
        return Instance.build(order, [v.restrict(order) for v in self.valuations], self.weights)

    def remove_agent(self, index: int) -> "Instance":
        if not 1 <= index <= self.n:
            raise InputError(f"no agent {index}")
        keep = [a for a in self.agents if a.index != index]
        return Instance.build(self.goods, [a.valuation for a in keep], [a.weight for a in keep])


@dataclass(frozen=True)
class Allocation:
    """One bundle per agent (position ``i - 1`` is agent ``i``); goods may stay unallocated."""

    bundles: tuple

    def __post_init__(self):
        bundles = tuple(frozenset(b) for b in self.bundles)
        seen = set()
        for b in bundles:
            if seen & b:
                raise InputError(f"good(s) {sorted(seen & b)} allocated twice")
            seen |= b
        object.__setattr__(self, "bundles", bundles)

    @classmethod
    def empty(cls, n: int) -> "Allocation":
        return cls((frozenset(),) * n)

    def __getitem__(self, agent: int) -> frozenset:
        return self.bundles[agent - 1]

    def __len__(self):
        return len(self.bundles)

    def allocated(self) -> frozenset:
        return frozenset().union(*self.bundles)

    def unallocated(self, goods) -> tuple:
        taken = self.allocated()
        return tuple(g for g in goods if g not in taken)

    def sizes(self) -> tuple:
        return tuple(len(b) for b in self.bundles)

    def owner(self, good):
        for i, b in enumerate(self.bundles, start=1):
            if good in b:
                return i
        return None

    def replace(self, agent: int, bundle) -> "Allocation":
        bundles = list(self.bundles)
        bundles[agent - 1] = frozenset(bundle)
        return Allocation(tuple(bundles))


def check_allocation(inst: Instance, alloc: Allocation):
    if len(alloc) != inst.n:
        raise InputError(f"allocation has {len(alloc)} bundles for {inst.n} agents")
    stray = alloc.allocated() - set(inst.goods)
    if stray:
        raise InputError(f"allocation uses unknown goods {sorted(stray)}")


def utility_vector(inst: Instance, alloc: Allocation) -> tuple:
    check_allocation(inst, alloc)
    return tuple(a.valuation._value(b) for a, b in zip(inst.agents, alloc.bundles))


def _require_matroid(inst: Instance):
    # explicit tables are accepted too; callers wanting certainty validate first
    bad = [a.index for a in inst.agents if a.valuation.kind in ("xos", "additive")]
    if bad:
        raise UnsupportedKindError(f"agents {bad} do not have matroid-rank valuations")


def is_non_redundant(inst: Instance, alloc: Allocation) -> bool:
    _require_matroid(inst)
    return all(u == len(b) for u, b in zip(utility_vector(inst, alloc), alloc.bundles))


def reduce_non_redundant(inst: Instance, alloc: Allocation) -> Allocation:
    """Drop redundant goods one at a time until none is left.

    Scans agents in index order and goods in canonical order, removing the
    first good whose removal keeps its owner's value, then rescans.
    """
    _require_matroid(inst)
    check_allocation(inst, alloc)
    pos = {g: i for i, g in enumerate(inst.goods)}
    bundles = list(alloc.bundles)
    for k, agent in enumerate(inst.agents):
        v = agent.valuation
        bundle = bundles[k]
        target = v._value(bundle)
        changed = True
        while changed and len(bundle) > target:
            changed = False
            for g in sorted(bundle, key=pos.__getitem__):
                if v._value(bundle - {g}) == target:
                    bundle = bundle - {g}
                    changed = True
                    break
        bundles[k] = bundle
    return Allocation(tuple(bundles))


def pareto_dominates(inst: Instance, a: Allocation, b: Allocation) -> bool:
    ua, ub = utility_vector(inst, a), utility_vector(inst, b)
    return all(x >= y for x, y in zip(ua, ub)) and ua != ub


def size_diff_sets(a: Allocation, b: Allocation) -> tuple:
    """``(L, H)``: agents whose bundle in ``a`` is smaller / larger than in ``b``."""
    if len(a) != len(b):
        raise InputError("allocations have different agent counts")
    lower = frozenset(i for i, (x, y) in enumerate(zip(a.sizes(), b.sizes()), start=1) if x < y)
    higher = frozenset(i for i, (x, y) in enumerate(zip(a.sizes(), b.sizes()), start=1) if x > y)
    return lower, higher


def restrict_agents(inst: Instance, alloc: Allocation, agents: Iterable[int]) -> tuple:
    """Keep only the agents in ``agents`` and only the goods in their bundles.

    Surviving agents are renumbered 1.. in their original relative order.
    """
    keep = sorted(set(agents))
    if not keep:
        raise InputError("agent subset must be nonempty")
    if keep[0] < 1 or keep[-1] > inst.n:
        raise InputError(f"agent subset {keep} out of range 1..{inst.n}")
    check_allocation(inst, alloc)
    held = frozenset().union(*(alloc[i] for i in keep))
    order = tuple(g for g in inst.goods if g in held)
    sub = Instance.build(
        order,
        [inst.agents[i - 1].valuation.restrict(order) for i in keep],
        [inst.agents[i - 1].weight for i in keep],
    )
    return sub, Allocation(tuple(alloc[i] for i in keep))
