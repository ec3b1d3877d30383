"""Polynomial-time computation of tie-broken welfarist allocations.

Goods are added one at a time.  For each new good ``g`` a dummy agent
temporarily holds ``{g}`` (valuing only ``g``); every real agent then
proposes either to take ``g`` directly (if it is in the agent's F-set) or to pull
it in through a shortest exchange path that ends at ``g``.  Each proposal
raises exactly that agent's utility by one, so the proposals are compared
on their projected utility vectors with the rule's own order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from .errors import PreconditionError, RuleError, UnsupportedKindError
from .exchange import ExchangeGraph, augment_bundles
from .instances import Allocation, Instance
from .valuations import MAX_VALIDATION_GOODS, BinaryAdditive, in_label_order, validate_matroid_rank
from .welfare import WelfareFunction, make_rule

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Candidate:
    agent: int
    path: tuple
    utilities: tuple

    @property
    def degenerate(self) -> bool:
        return len(self.path) == 1

    def to_json(self):
        return {"agent": self.agent, "path": list(self.path), "utilities": list(self.utilities)}


@dataclass
class Iteration:
    good: str
    reachable: int            # goods with a path to `good` in the dummy exchange graph
    candidates: list
    selected: Optional[Candidate]
    allocation: Allocation    # held allocation after this step
    utilities: tuple

    def to_json(self):
        return {
            "good": self.good,
            "reachable": self.reachable,
            "candidates": [c.to_json() for c in self.candidates],
            "selected": None if self.selected is None else self.selected.to_json(),
            "bundles": {str(i): in_label_order(b) for i, b in enumerate(self.allocation.bundles, start=1)},
            "utilities": list(self.utilities),
        }


@dataclass
class SolverTrace:
    iterations: list = field(default_factory=list)

    def __len__(self):
        return len(self.iterations)

    def __iter__(self):
        return iter(self.iterations)


def check_solvable(inst: Instance, rule: WelfareFunction):
    if not rule.is_concave:
        raise RuleError("the incremental solver needs a concave f; use the brute-force oracle instead")
    rule.check_domain(inst.m)
    for agent in inst.agents:
        v = agent.valuation
        if v.is_matroid_kind:
            continue
        if inst.m > MAX_VALIDATION_GOODS:
            log.warning("agent %d has a %s valuation on %d goods; trusting it is matroid-rank",
                        agent.index, v.kind, inst.m)
            continue
        report = validate_matroid_rank(v)
        if not report.valid:
            raise UnsupportedKindError(
                f"agent {agent.index}'s valuation violates {', '.join(report.axioms_violated())}")


def add_one_good(inst: Instance, alloc: Allocation, good: str, rule: WelfareFunction,
                 active=None) -> tuple:
    """Extend an optimal allocation of ``active - {good}`` to one of ``active``.

    ``active`` is the set of goods present so far (default: all goods of
    ``inst``); goods outside it are invisible to F-sets and the exchange
    graph.  Returns ``(allocation, Iteration)``.
    """
    if active is None:
        active = inst.goods
    active = frozenset(active)
    if good not in active:
        raise PreconditionError(f"{good!r} is not among the active goods")
    if good in alloc.allocated():
        raise PreconditionError(f"{good!r} is already allocated")

    vertices = [g for g in inst.goods if g in active]
    dummy = BinaryAdditive(inst.goods, [good])
    owners = list(zip(alloc.bundles, inst.valuations)) + [(frozenset({good}), dummy)]
    graph = ExchangeGraph(vertices, owners)
    dist, next_hop = graph.distances_to(good)

    base = tuple(len(b) for b in alloc.bundles)
    candidates = []
    for k, agent in enumerate(inst.agents):
        bundle = alloc.bundles[k]
        f_set = agent.valuation._f_set(bundle, active)
        projected = base[:k] + (base[k] + 1,) + base[k + 1:]
        if good in f_set:
            # the direct take and any path give the same vector; prefer the direct take
            candidates.append(Candidate(agent.index, (good,), projected))
            continue
        starts = [g for g in f_set if g in dist]
        if starts:
            start = min(starts, key=lambda g: (dist[g], graph.position(g)))
            candidates.append(Candidate(agent.index, graph.follow(start, next_hop), projected))

    if not candidates:
        return alloc, Iteration(good, len(dist) - 1, [], None, alloc, base)

    weights = inst.weights
    best = max(candidates, key=lambda c: rule.key(weights, c.utilities))
    bundles = list(augment_bundles(alloc.bundles, best.path))
    bundles[best.agent - 1] = bundles[best.agent - 1] | {best.path[0]}
    result = Allocation(tuple(bundles))
    return result, Iteration(good, len(dist) - 1, candidates, best, result, best.utilities)


def solve(inst: Instance, rule, validate: bool = True) -> tuple:
    """Compute an allocation chosen by the tie-broken rule.

    Returns ``(allocation, trace)``; the trace has one record per good,
    in the instance's good order.
    """
    rule = make_rule(rule)
    if validate:
        check_solvable(inst, rule)
    alloc = Allocation.empty(inst.n)
    trace = SolverTrace()
    active = set()
    for g in inst.goods:
        active.add(g)
        alloc, record = add_one_good(inst, alloc, g, rule, active)
        trace.iterations.append(record)
    return alloc, trace


def solve_utilities(inst: Instance, rule) -> tuple:
    alloc, _ = solve(inst, rule)
    return tuple(len(b) for b in alloc.bundles)
