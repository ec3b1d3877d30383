"""Hand-built instances with known answers.

Two small warm-ups (identical goods split evenly, and a two-good case
with unequal weights) and the six counterexample instances for maximum
Nash welfare beyond matroid-rank valuations.  ``EXPECTED`` holds the
numbers each counterexample must reproduce exactly.
"""
from __future__ import annotations

import functools
import itertools

from .instances import Instance
from .valuations import XOS, Additive, BinaryAdditive


def goods(m: int) -> tuple:
    return tuple(f"g{k}" for k in range(1, m + 1))


def apportionment() -> Instance:
    """Four identical goods, two equal agents: the split is 2/2."""
    g = goods(4)
    return Instance.build(g, [BinaryAdditive(g, g), BinaryAdditive(g, g)])


def two_goods_weights_1_2() -> Instance:
    g = goods(2)
    return Instance.build(g, [BinaryAdditive(g, g), BinaryAdditive(g, g)], [1, 2])


def weak_coalition_truth() -> Instance:
    """Two goods, three agents: agents 1 and 3 can jointly help agent 3 at no cost to agent 1."""
    g = goods(2)
    return Instance.build(g, [BinaryAdditive(g, g), BinaryAdditive(g, ["g1"]), BinaryAdditive(g, ["g2"])])


def weak_coalition_lie() -> Instance:
    """Agent 1 hides its interest in g2."""
    g = goods(2)
    return Instance.build(g, [BinaryAdditive(g, ["g1"]), BinaryAdditive(g, ["g1"]), BinaryAdditive(g, ["g2"])])


# -- binary XOS family (ten goods) -------------------------------------------

@functools.lru_cache(maxsize=None)
def xos_v2() -> XOS:
    """Worth |B| up to 3, and 4 only when a bundle of 4+ goods holds both g6 and g10."""
    g = goods(10)
    clauses = [dict.fromkeys((g[x], g[y], g[z]), 1) for x, y, z in itertools.combinations(range(10), 3)]
    others = [k for k in range(10) if k not in (5, 9)]
    clauses += [dict.fromkeys((g[x], g[y], "g6", "g10"), 1) for x, y in itertools.combinations(others, 2)]
    return XOS(g, clauses)


def xos_v2_formula(bundle) -> int:
    bundle = frozenset(bundle)
    if len(bundle) <= 3:
        return len(bundle)
    return 4 if {"g6", "g10"} <= bundle else 3


def xos_base() -> Instance:
    g = goods(10)
    return Instance.build(g, [BinaryAdditive(g, g[:6]), xos_v2()])


def xos_without_g10() -> Instance:
    return xos_base().restrict_goods(goods(9))


def xos_third_agent() -> Instance:
    g = goods(10)
    return Instance.build(g, [BinaryAdditive(g, g[:6]), xos_v2(), BinaryAdditive(g, ["g10"])])


def xos_lie() -> Instance:
    """Agent 1 also claims to like g10."""
    g = goods(10)
    return Instance.build(g, [BinaryAdditive(g, g[:6] + ("g10",)), xos_v2()])


# -- restricted additive family ----------------------------------------------

def _additive(rows, m) -> Instance:
    g = goods(m)
    return Instance.build(g, [Additive(g, dict(zip(g, row))) for row in rows])


def additive_resource_base() -> Instance:
    return _additive([(0, 1, 0, 3), (5, 1, 0, 3), (5, 0, 2, 0)], 4)


def additive_resource_extra() -> Instance:
    return _additive([(0, 1, 0, 3, 6), (5, 1, 0, 3, 0), (5, 0, 2, 0, 0)], 5)


def additive_population_two() -> Instance:
    return _additive([(5, 0, 2, 9), (5, 3, 0, 9)], 4)


def additive_population_three() -> Instance:
    return _additive([(5, 0, 2, 9), (5, 3, 0, 9), (5, 3, 0, 0)], 4)


def additive_truth() -> Instance:
    return _additive([(5, 2, 2), (5, 0, 2)], 3)


def additive_lie() -> Instance:
    return _additive([(5, 0, 0), (5, 0, 2)], 3)


FIXTURES = {
    "apportionment": apportionment,
    "two_goods_weights_1_2": two_goods_weights_1_2,
    "weak_coalition_truth": weak_coalition_truth,
    "weak_coalition_lie": weak_coalition_lie,
    "xos_base": xos_base,
    "xos_without_g10": xos_without_g10,
    "xos_third_agent": xos_third_agent,
    "xos_lie": xos_lie,
    "additive_resource_base": additive_resource_base,
    "additive_resource_extra": additive_resource_extra,
    "additive_population_two": additive_population_two,
    "additive_population_three": additive_population_three,
    "additive_truth": additive_truth,
    "additive_lie": additive_lie,
}

# optimal utility vectors and Nash welfare of each counterexample instance
EXPECTED = {
    "xos_base": ([(5, 4)], 20),
    "xos_without_g10": ([(6, 3)], 18),
    "xos_third_agent": ([(6, 3, 1)], 18),
    "xos_lie": ([(7, 3)], 21),
    "additive_resource_base": ([(4, 5, 2)], 40),
    "additive_resource_extra": ([(6, 4, 7)], 168),
    "additive_population_two": ([(11, 8)], 88),
    "additive_population_three": ([(7, 9, 3)], 189),
    "additive_truth": ([(4, 5)], 20),
    "additive_lie": ([(5, 2)], 10),
}
