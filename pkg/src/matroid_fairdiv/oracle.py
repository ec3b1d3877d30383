"""Exhaustive ground truth over every allocation.

An allocation is a word over ``{0, 1, ..., n}`` of length ``m`` (digit 0
leaves the good unallocated, digit ``k`` gives it to agent ``k``), taken
in mixed-radix order with the first good most significant.  Utilities for
whole blocks of words are looked up in per-agent value tables indexed by
bundle bitmask, then only the distinct utility vectors are ranked with
the rule's exact order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError
from .instances import Allocation, Instance, reduce_non_redundant
from .valuations import in_label_order
from .welfare import make_rule

DEFAULT_BUDGET = 10**8
_CHUNK = 1 << 18


def allocation_count(inst: Instance) -> int:
    return (inst.n + 1) ** inst.m


def _check_budget(inst: Instance, budget):
    count = allocation_count(inst)
    if count > budget:
        raise CapacityError(
            f"{inst.n} agents and {inst.m} goods give {count} allocations, over the budget of {budget}",
            bound=count)
    return count


def enumerate_allocations(inst: Instance, budget: int = DEFAULT_BUDGET):
    """Yield every allocation exactly once, in mixed-radix order."""
    _check_budget(inst, budget)
    for word in itertools.product(range(inst.n + 1), repeat=inst.m):
        yield allocation_from_word(inst, word)


def allocation_from_word(inst: Instance, word) -> Allocation:
    bundles = [set() for _ in range(inst.n)]
    for g, k in zip(inst.goods, word):
        if k:
            bundles[int(k) - 1].add(g)
    return Allocation(tuple(bundles))


def _word_blocks(n, m, chunk=_CHUNK):
    base = n + 1
    total = base**m
    powers = base ** np.arange(m - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield start, (codes[:, None] // powers) % base


def utility_rows(valuations, words: np.ndarray) -> np.ndarray:
    """Utility matrix (one row per word) under ``valuations``."""
    m = words.shape[1]
    bits = np.left_shift(1, np.arange(m, dtype=np.int64))
    out = np.empty((words.shape[0], len(valuations)), dtype=np.int64)
    for k, v in enumerate(valuations, start=1):
        masks = ((words == k) * bits).sum(axis=1)
        out[:, k - 1] = v.table()[masks]
    return out


def _distinct_vectors(inst: Instance):
    """Map each reachable utility vector to (allocation count, first word index)."""
    seen = {}
    for start, words in _word_blocks(inst.n, inst.m):
        rows = utility_rows(inst.valuations, words)
        uniq, first, counts = np.unique(rows, axis=0, return_index=True, return_counts=True)
        for row, i, c in zip(uniq.tolist(), first.tolist(), counts.tolist()):
            row = tuple(row)
            if row in seen:
                seen[row][0] += c
            else:
                seen[row] = [c, start + i]
    return seen


def _word_at(inst: Instance, index: int) -> tuple:
    base = inst.n + 1
    digits = []
    for _ in range(inst.m):
        index, d = divmod(index, base)
        digits.append(d)
    return tuple(reversed(digits))


@dataclass
class OracleResult:
    vector: tuple
    witness: Allocation
    optimal_count: int      # allocations attaining the optimal welfare layers
    examined: int

    def to_json(self):
        return {
            "utilities": list(self.vector),
            "bundles": {str(i): in_label_order(b) for i, b in enumerate(self.witness.bundles, start=1)},
            "optimal_allocations": self.optimal_count,
            "examined": self.examined,
        }


def brute_force_opt(inst: Instance, rule, budget: int = DEFAULT_BUDGET, reduce: bool = True) -> OracleResult:
    """Best utility vector under the rule's full order, by exhaustion.

    The witness is the first allocation (in enumeration order) attaining
    that vector, made non-redundant when every valuation admits it.
    """
    rule = make_rule(rule, inst.m)
    examined = _check_budget(inst, budget)
    seen = _distinct_vectors(inst)
    weights = inst.weights
    keyed = {u: rule.welfare_key(weights, u) for u in seen}
    best = max(seen, key=lambda u: keyed[u] + (u,))
    optimal = sum(seen[u][0] for u in seen if keyed[u] == keyed[best])
    witness = allocation_from_word(inst, _word_at(inst, seen[best][1]))
    if reduce and all(v.kind not in ("xos", "additive") for v in inst.valuations):
        witness = reduce_non_redundant(inst, witness)
    return OracleResult(best, witness, optimal, examined)


@dataclass
class MnwResult:
    vectors: list                     # all optimal utility vectors, sorted
    representatives: dict             # vector -> first optimal allocation with it
    welfare: int                      # product of positive utilities at the optimum
    support: int                      # number of agents with positive utility
    words: np.ndarray = field(repr=False)  # every optimal allocation as a word
    goods: tuple = ()

    @property
    def all_products_zero(self) -> bool:
        return self.support < (len(self.vectors[0]) if self.vectors else 0)

    def allocations(self, inst: Instance):
        for word in self.words:
            yield allocation_from_word(inst, word)

    def utilities_under(self, valuations) -> np.ndarray:
        """Utilities of every optimal allocation under other (e.g. true) valuations."""
        return utility_rows(list(valuations), self.words)

    def to_json(self):
        return {
            "nash_welfare": self.welfare,
            "positive_agents": self.support,
            "optimal_vectors": [list(u) for u in self.vectors],
            "optimal_allocations": int(self.words.shape[0]),
            "representatives": [
                {"utilities": list(u), "bundles": {str(i): in_label_order(b) for i, b in enumerate(a.bundles, start=1)}}
                for u, a in self.representatives.items()
            ],
        }


def brute_force_mnw(inst: Instance, budget: int = DEFAULT_BUDGET) -> MnwResult:
    """Every maximum Nash welfare allocation (unweighted, any valuation kind).

    Agents with positive utility are maximised in number first; the product
    over them is maximised next.  All maximisers are kept so that claims
    holding "regardless of tie-breaking" can be checked over the whole set.
    """
    _check_budget(inst, budget)
    seen = _distinct_vectors(inst)

    def layer(u):
        pos = [x for x in u if x > 0]
        prod = 1
        for x in pos:
            prod *= x
        return len(pos), prod

    best = max(layer(u) for u in seen)
    vectors = sorted(u for u in seen if layer(u) == best)
    wanted = set(vectors)

    base = 1 + max(int(v.table().max()) for v in inst.valuations) if inst.n else 1
    scale = base ** np.arange(inst.n, dtype=np.int64)
    wanted_codes = np.array([int(np.dot(u, scale)) for u in wanted], dtype=np.int64)
    picked = []
    for start, words in _word_blocks(inst.n, inst.m):
        rows = utility_rows(inst.valuations, words)
        hit = np.isin(rows @ scale, wanted_codes)
        if hit.any():
            picked.append(words[hit])
    words = np.concatenate(picked) if picked else np.zeros((0, inst.m), dtype=np.int64)
    reps = {u: allocation_from_word(inst, _word_at(inst, seen[u][1])) for u in vectors}
    return MnwResult(vectors, reps, best[1], best[0], words, inst.goods)
