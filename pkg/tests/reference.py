"""Slow, deliberately naive reference implementations used only by the tests.

Nothing here reuses the package's enumeration, ordering or validation
code: allocations come from itertools, values from the public
``Valuation.value`` call, and the rule order is a hand-written pairwise
comparison.
"""
import functools
import itertools
import math
from fractions import Fraction


def all_assignments(n, goods):
    for word in itertools.product(range(n + 1), repeat=len(goods)):
        bundles = [set() for _ in range(n)]
        for g, k in zip(goods, word):
            if k:
                bundles[k - 1].add(g)
        yield [frozenset(b) for b in bundles]


def utilities(inst, bundles):
    return tuple(a.valuation.value(b) for a, b in zip(inst.agents, bundles))


def f_value(rule, k):
    """Exact f(k) for table rules; None for -inf."""
    if rule == "mwhw":
        return sum((Fraction(1, j) for j in range(1, k + 1)), Fraction(0))
    table = rule
    return table[k]


def _weighted(rule, weights, u, agents):
    if rule == "mwnw":
        # compare sum w_i log u_i; returned as a pair (float, exact) resolved in _cmp_welfare
        return ("log", [(weights[i], u[i]) for i in agents])
    return ("lin", sum((weights[i] * f_value(rule, u[i]) for i in agents), Fraction(0)))


def _cmp_welfare(a, b):
    if a[0] == "lin":
        return (a[1] > b[1]) - (a[1] < b[1])
    fa = sum(float(w) * math.log(x) for w, x in a[1])
    fb = sum(float(w) * math.log(x) for w, x in b[1])
    if abs(fa - fb) > 1e-9:
        return 1 if fa > fb else -1
    # too close for floats: raise both sides to the common denominator
    d = math.lcm(*(Fraction(w).denominator for w, _ in a[1] + b[1]))
    pa = math.prod(x ** int(w * d) for w, x in a[1])
    pb = math.prod(x ** int(w * d) for w, x in b[1])
    return (pa > pb) - (pa < pb)


def neg_inf_at_zero(rule):
    return rule == "mwnw" or (rule != "mwhw" and rule[0] is None)


def compare(rule, weights, u, v):
    """+1 if u is preferred, -1 if v is, 0 only if u == v."""
    n = len(u)
    if neg_inf_at_zero(rule):
        fin_u, fin_v = 0 not in u, 0 not in v
        if fin_u != fin_v:
            return 1 if fin_u else -1
        if not fin_u:
            pu = [i for i in range(n) if u[i] > 0]
            pv = [i for i in range(n) if v[i] > 0]
            if len(pu) != len(pv):
                return 1 if len(pu) > len(pv) else -1
            if pu != pv:
                return 1 if pu < pv else -1
            c = _cmp_welfare(_weighted(rule, weights, u, pu), _weighted(rule, weights, v, pv))
            if c:
                return c
            return (u > v) - (u < v)
    c = _cmp_welfare(_weighted(rule, weights, u, range(n)), _weighted(rule, weights, v, range(n)))
    if c:
        return c
    return (u > v) - (u < v)


def best_vector(inst, rule):
    """Rule-optimal utility vector by exhaustive search (rule: 'mwnw', 'mwhw' or a table with None for -inf)."""
    vectors = {utilities(inst, b) for b in all_assignments(inst.n, inst.goods)}
    weights = inst.weights
    return max(vectors, key=functools.cmp_to_key(lambda a, b: compare(rule, weights, a, b)))


def mnw_vectors(inst):
    """All unweighted maximum Nash welfare vectors (most positive agents first, then product)."""
    vectors = {utilities(inst, b) for b in all_assignments(inst.n, inst.goods)}

    def score(u):
        pos = [x for x in u if x > 0]
        return len(pos), math.prod(pos)

    top = max(score(u) for u in vectors)
    return sorted(u for u in vectors if score(u) == top), top[1]


def is_matroid_rank(value, goods):
    """Axioms checked directly on every pair of nested subsets."""
    subsets = [frozenset(c) for r in range(len(goods) + 1) for c in itertools.combinations(goods, r)]
    if value(frozenset()) != 0:
        return False
    for s in subsets:
        for g in goods:
            if g in s:
                continue
            d = value(s | {g}) - value(s)
            if d not in (0, 1):
                return False
            for t in subsets:
                if s <= t and g not in t and value(t | {g}) - value(t) > d:
                    return False
    return True


def swap_edges(inst, bundles):
    """Exchange-graph edges straight from the definition."""
    edges = set()
    for bundle, agent in zip(bundles, inst.agents):
        v = agent.valuation
        for g in bundle:
            for h in inst.goods:
                if h not in bundle and v.value(bundle - {g} | {h}) == v.value(bundle):
                    edges.add((g, h))
    return edges


def bfs_distance(edges, sources, targets):
    sources, targets = set(sources), set(targets)
    if sources & targets:
        return 0
    seen, frontier, d = set(sources), set(sources), 0
    while frontier:
        d += 1
        frontier = {h for g, h in edges if g in frontier and h not in seen}
        if frontier & targets:
            return d
        seen |= frontier
    return None
