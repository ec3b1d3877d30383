"""Randomised and exhaustive checks of the monotonicity and incentive guarantees.

Every check returns an :class:`AuditVerdict`; a violation carries enough
data (instances, allocations, utilities) to replay it from JSON alone.
The counterexamples for maximum Nash welfare outside matroid-rank
valuations are replayed by :func:`run_counterexamples`.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from . import golden
from .errors import CapacityError, InputError, RuleError
from .formats import allocation_to_json, fraction_str, instance_to_json
from .instances import Allocation, Instance, as_weight
from .oracle import DEFAULT_BUDGET, brute_force_mnw, brute_force_opt
from .solver import check_solvable, solve
from .valuations import (BinaryAdditive, GraphicMatroid, PartitionMatroid, binary_additive_catalog,
                         matroid_rank_catalog, validate_restricted_additive)
from .welfare import make_rule

ENGINES = ("solver", "oracle")
SPACES = ("binary_additive_all", "matroid_all")
GSP_PROFILE_BUDGET = 50_000


@dataclass
class AuditVerdict:
    property: str
    instances_tried: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def merge(self, other: "AuditVerdict") -> "AuditVerdict":
        self.instances_tried += other.instances_tried
        self.violations.extend(other.violations)
        return self

    def to_json(self):
        return {
            "property": self.property,
            "instances_tried": self.instances_tried,
            "violations": self.violations,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    n_range: tuple = (2, 3)
    m_range: tuple = (3, 5)
    kinds: tuple = ("binary_additive", "partition_matroid", "graphic_matroid")
    weight_pool: tuple = (Fraction(1), Fraction(1, 2), Fraction(2), Fraction(3))
    rule: object = "mwnw"

    def __post_init__(self):
        for name in ("n_range", "m_range"):
            lo, hi = getattr(self, name)
            if not 0 <= lo <= hi:
                raise InputError(f"bad {name}: {(lo, hi)}")
        if self.n_range[0] < 1:
            raise InputError("instances need at least one agent")
        unknown = set(self.kinds) - {"binary_additive", "partition_matroid", "graphic_matroid"}
        if unknown or not self.kinds:
            raise InputError(f"unsupported generator kinds: {sorted(unknown) or 'none given'}")
        object.__setattr__(self, "weight_pool", tuple(as_weight(w) for w in self.weight_pool))
        if not self.weight_pool:
            raise InputError("weight pool is empty")

    def with_seed(self, seed: int) -> "GeneratorConfig":
        return replace(self, seed=seed)

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorConfig":
        kw = {}
        if "seed" in obj:
            kw["seed"] = int(obj["seed"])
        if "n" in obj:
            kw["n_range"] = tuple(int(x) for x in obj["n"])
        if "m" in obj:
            kw["m_range"] = tuple(int(x) for x in obj["m"])
        if "kinds" in obj:
            kw["kinds"] = tuple(obj["kinds"])
        if "weights" in obj:
            kw["weight_pool"] = tuple(obj["weights"])
        if "rule" in obj:
            kw["rule"] = obj["rule"]
        return cls(**kw)

    def to_json(self):
        rule = self.rule if isinstance(self.rule, (str, dict)) else make_rule(self.rule).to_spec()
        return {
            "seed": self.seed, "n": list(self.n_range), "m": list(self.m_range),
            "kinds": list(self.kinds), "weights": [fraction_str(w) for w in self.weight_pool],
            "rule": rule,
        }


# -- generation --------------------------------------------------------------

def _random_partition(rng, g):
    k = rng.randint(1, len(g)) if g else 1
    slots = [rng.randrange(k + 1) for _ in g]   # slot k leaves the good outside every part
    parts = []
    for p in range(k):
        members = [x for x, s in zip(g, slots) if s == p]
        if members:
            parts.append((members, rng.randint(0, len(members))))
    return PartitionMatroid(g, parts)


def _random_graphic(rng, g):
    nodes = [f"v{k}" for k in range(rng.randint(2, 4))]
    return GraphicMatroid(g, {x: (rng.choice(nodes), rng.choice(nodes)) for x in g})


def random_instance(cfg: GeneratorConfig) -> Instance:
    """A matroid-rank instance drawn from ``cfg``; the same seed gives the same instance."""
    rng = random.Random(cfg.seed)
    n = rng.randint(*cfg.n_range)
    m = rng.randint(*cfg.m_range)
    g = golden.goods(m)
    valuations = []
    for _ in range(n):
        kind = rng.choice(cfg.kinds)
        if kind == "binary_additive":
            valuations.append(BinaryAdditive(g, [x for x in g if rng.random() < 0.6]))
        elif kind == "partition_matroid":
            valuations.append(_random_partition(rng, g))
        else:
            valuations.append(_random_graphic(rng, g))
    weights = [rng.choice(cfg.weight_pool) for _ in range(n)]
    return Instance.build(g, valuations, weights)


def instance_stream(cfg: GeneratorConfig, count: int):
    """``count`` instances with consecutive seeds starting at ``cfg.seed``."""
    for k in range(count):
        seed = cfg.seed + k
        yield seed, random_instance(cfg.with_seed(seed))


# -- engines -----------------------------------------------------------------

def run_engine(inst: Instance, rule, engine: str = "solver", budget: int = DEFAULT_BUDGET) -> tuple:
    """``(allocation, utilities)`` chosen by the rule, via the solver or by exhaustion."""
    rule = make_rule(rule, inst.m)
    if engine == "solver":
        alloc, _ = solve(inst, rule)
        return alloc, alloc.sizes()
    if engine == "oracle":
        res = brute_force_opt(inst, rule, budget)
        return res.witness, res.vector
    raise InputError(f"unknown engine {engine!r}; choose from {ENGINES}")


def _case(label, inst, alloc, u):
    return {
        "label": label,
        "instance": instance_to_json(inst),
        "allocation": allocation_to_json(alloc, inst.goods),
        "utilities": list(u),
    }


# -- monotonicity --------------------------------------------------------------

def check_resource_monotonicity(inst: Instance, extra: str, f, engine: str = "solver") -> AuditVerdict:
    """Adding ``extra`` to the other goods must not lower anyone's utility."""
    if extra not in inst.goods:
        raise InputError(f"{extra!r} is not a good of the instance")
    base = inst.restrict_goods([g for g in inst.goods if g != extra])
    a_small, u_small = run_engine(base, f, engine)
    a_big, u_big = run_engine(inst, f, engine)
    verdict = AuditVerdict("resource_monotonicity", 1)
    losers = [i + 1 for i in range(inst.n) if u_small[i] > u_big[i]]
    if losers:
        verdict.violations.append({
            "extra_good": extra, "agents": losers, "rule": make_rule(f).to_spec(), "engine": engine,
            "cases": [_case("without_extra", base, a_small, u_small), _case("with_extra", inst, a_big, u_big)],
        })
    return verdict


def check_population_monotonicity(inst: Instance, removed_agent: int, f, engine: str = "solver") -> AuditVerdict:
    """Adding agent ``removed_agent`` must not raise any other agent's utility."""
    if inst.n < 2:
        raise InputError("population checks need at least two agents")
    small = inst.remove_agent(removed_agent)
    a_small, u_small = run_engine(small, f, engine)
    a_big, u_big = run_engine(inst, f, engine)
    survivors = [i for i in range(1, inst.n + 1) if i != removed_agent]
    gainers = [i for k, i in enumerate(survivors) if u_small[k] < u_big[i - 1]]
    verdict = AuditVerdict("population_monotonicity", 1)
    if gainers:
        verdict.violations.append({
            "removed_agent": removed_agent, "agents": gainers, "rule": make_rule(f).to_spec(), "engine": engine,
            "cases": [_case("without_agent", small, a_small, u_small), _case("with_agent", inst, a_big, u_big)],
        })
    return verdict


def check_weight_monotonicity(inst: Instance, agent: int, new_weight, f, engine: str = "solver") -> AuditVerdict:
    """Raising one agent's weight must not lower that agent's utility."""
    new_weight = as_weight(new_weight)
    old = inst.weights[agent - 1]
    if not new_weight > old:
        raise InputError(f"new weight {new_weight} does not exceed the current weight {old}")
    rule = make_rule(f)
    if engine == "solver" and not rule.is_concave:
        raise RuleError("the solver engine needs a concave f; audit non-concave rules with engine=oracle")
    weights = list(inst.weights)
    weights[agent - 1] = new_weight
    boosted = inst.with_weights(weights)
    a_old, u_old = run_engine(inst, rule, engine)
    a_new, u_new = run_engine(boosted, rule, engine)
    verdict = AuditVerdict("weight_monotonicity", 1)
    if u_new[agent - 1] < u_old[agent - 1]:
        verdict.violations.append({
            "agent": agent, "agents": [agent], "new_weight": fraction_str(new_weight),
            "rule": rule.to_spec(), "engine": engine,
            "cases": [_case("before", inst, a_old, u_old), _case("after", boosted, a_new, u_new)],
        })
    return verdict


# -- group strategyproofness ----------------------------------------------------

def misreport_catalog(ground, space: str) -> list:
    if space == "binary_additive_all":
        if len(ground) > 6:
            raise CapacityError("binary additive misreports are enumerated for at most 6 goods", bound=2 ** len(ground))
        return binary_additive_catalog(ground)
    if space == "matroid_all":
        if len(ground) > 4:
            raise CapacityError("matroid misreports are enumerated for at most 4 goods", bound=len(ground))
        return matroid_rank_catalog(ground)
    raise InputError(f"unknown misreport space {space!r}; choose from {SPACES}")


def _nonempty_subsets(n):
    for r in range(1, n + 1):
        yield from itertools.combinations(range(n), r)


def check_group_strategyproofness(inst: Instance, f, misreport_space: str = "matroid_all",
                                  budget: int = GSP_PROFILE_BUDGET) -> AuditVerdict:
    """Try every coalition and every joint misreport from the catalog.

    A violation is a report profile under which every coalition member is
    strictly better off by their true valuation.
    """
    rule = make_rule(f, inst.m)
    if inst.n > 3:
        raise CapacityError("group misreports are enumerated for at most 3 agents", bound=inst.n)
    catalog = misreport_catalog(inst.goods, misreport_space)
    profiles = sum(len(catalog) ** len(s) for s in _nonempty_subsets(inst.n))
    if profiles > budget:
        raise CapacityError(f"{profiles} misreport profiles exceed the budget of {budget}", bound=profiles)
    check_solvable(inst, rule)
    truth_alloc, _ = solve(inst, rule, validate=False)
    truth = truth_alloc.sizes()
    true_vals = inst.valuations
    verdict = AuditVerdict("group_strategyproofness", 1)
    for coalition in _nonempty_subsets(inst.n):
        for reports in itertools.product(catalog, repeat=len(coalition)):
            vals = list(true_vals)
            for i, v in zip(coalition, reports):
                vals[i] = v
            alloc, _ = solve(inst.with_valuations(vals), rule, validate=False)
            gains = [true_vals[i]._value(alloc.bundles[i]) for i in coalition]
            if all(x > truth[i] for x, i in zip(gains, coalition)):
                verdict.violations.append({
                    "coalition": [i + 1 for i in coalition], "agents": [i + 1 for i in coalition],
                    "rule": rule.to_spec(),
                    "reports": {str(i + 1): v.to_spec() for i, v in zip(coalition, reports)},
                    "true_utilities": gains,
                    "cases": [
                        _case("truthful", inst, truth_alloc, truth),
                        _case("misreported", inst.with_valuations(vals), alloc, alloc.sizes()),
                    ],
                })
    return verdict


def check_misreport(inst: Instance, reports: dict, f, engine: str = "solver") -> AuditVerdict:
    """One given joint misreport ``{agent: valuation}``; flags it if every liar strictly gains."""
    coalition = sorted(reports)
    vals = list(inst.valuations)
    for i in coalition:
        vals[i - 1] = reports[i]
    lied = inst.with_valuations(vals)
    a_truth, u_truth = run_engine(inst, f, engine)
    a_lie, u_lie = run_engine(lied, f, engine)
    gains = [inst.valuations[i - 1].value(a_lie[i]) for i in coalition]
    verdict = AuditVerdict("group_strategyproofness", 1)
    if all(x > u_truth[i - 1] for x, i in zip(gains, coalition)):
        verdict.violations.append({
            "coalition": coalition, "agents": coalition, "rule": make_rule(f).to_spec(), "engine": engine,
            "true_utilities": gains,
            "cases": [_case("truthful", inst, a_truth, u_truth), _case("misreported", lied, a_lie, u_lie)],
        })
    return verdict


def exhaustive_group_strategyproofness(n: int, ground, f, weights=None, space: str = "matroid_all",
                                       strict: bool = True) -> AuditVerdict:
    """Every truthful profile from the catalog against every coalition deviation.

    Each of the ``R**n`` report profiles is solved once; a coalition S of
    truthful profile ``p`` deviates profitably if some profile agreeing
    with ``p`` outside S makes every member of S strictly better off (with
    ``strict=False``: weakly better off, one member strictly).
    """
    ground = tuple(ground)
    rule = make_rule(f, len(ground))
    if not rule.is_concave:
        raise RuleError("the solver engine needs a concave f")
    catalog = misreport_catalog(ground, space)
    r = len(catalog)
    tables = np.stack([v.table() for v in catalog])            # (R, 2^m)
    digits = np.array(list(itertools.product(range(r), repeat=n)), dtype=np.int64).reshape(-1, n)
    masks = np.empty_like(digits)
    for row, profile in enumerate(digits):
        inst = Instance.build(ground, [catalog[k] for k in profile], weights)
        alloc, _ = solve(inst, rule, validate=False)
        masks[row] = [catalog[0].mask_of(b) for b in alloc.bundles]

    verdict = AuditVerdict("group_strategyproofness" if strict else "weak_group_strategyproofness", len(digits))
    coalitions = list(_nonempty_subsets(n))
    for p, truth in enumerate(digits):
        # utilities of every outcome measured with the truthful profile p
        u = np.stack([tables[truth[i]][masks[:, i]] for i in range(n)], axis=1)
        better, weakly = u > u[p], u >= u[p]
        for s in coalitions:
            outside = [j for j in range(n) if j not in s]
            rows = np.all(digits[:, outside] == truth[outside], axis=1) if outside else np.ones(len(digits), bool)
            cols = list(s)
            if strict:
                hit = rows & np.all(better[:, cols], axis=1)
            else:
                hit = rows & np.all(weakly[:, cols], axis=1) & np.any(better[:, cols], axis=1)
            if hit.any():
                q = int(np.flatnonzero(hit)[0])
                truth_inst = Instance.build(ground, [catalog[k] for k in truth], weights)
                lie_inst = Instance.build(ground, [catalog[k] for k in digits[q]], weights)
                verdict.violations.append({
                    "coalition": [i + 1 for i in s], "agents": [i + 1 for i in s], "rule": rule.to_spec(),
                    "true_utilities": u[q].tolist(),
                    "cases": [
                        _case("truthful", truth_inst, _mask_alloc(ground, masks[p]), u[p].tolist()),
                        _case("misreported", lie_inst, _mask_alloc(ground, masks[q]),
                              [int(tables[k][mk]) for k, mk in zip(digits[q], masks[q])]),
                    ],
                })
    return verdict


def _mask_alloc(ground, masks) -> Allocation:
    return Allocation(tuple(frozenset(g for i, g in enumerate(ground) if int(mk) >> i & 1) for mk in masks))


# -- sweeps ----------------------------------------------------------------------

def _side_rng(seed, tag):
    return random.Random(f"{seed}:{tag}")


def audit_sweep(kind: str, cfg: GeneratorConfig, count: int, engine: str = "solver",
                space: str = "matroid_all") -> AuditVerdict:
    """Run one audit on ``count`` generated instances (seeds ``cfg.seed``, ``cfg.seed + 1``, ...)."""
    rule = make_rule(cfg.rule)
    if engine not in ENGINES:
        raise InputError(f"unknown engine {engine!r}; choose from {ENGINES}")
    if engine == "solver" and not rule.is_concave:
        raise RuleError("the solver engine needs a concave f; audit non-concave rules with engine=oracle")
    names = {"resource": "resource_monotonicity", "population": "population_monotonicity",
             "weight": "weight_monotonicity", "gsp": "group_strategyproofness"}
    if kind not in names:
        raise InputError(f"unknown audit {kind!r}; choose from {sorted(names)}")
    total = AuditVerdict(names[kind])
    for seed, inst in instance_stream(cfg, count):
        side = _side_rng(seed, kind)
        if kind == "resource":
            v = check_resource_monotonicity(inst, side.choice(inst.goods), rule, engine)
        elif kind == "population":
            if inst.n < 2:
                continue
            v = check_population_monotonicity(inst, side.randint(1, inst.n), rule, engine)
        elif kind == "weight":
            agent = side.randint(1, inst.n)
            factor = side.choice((Fraction(3, 2), Fraction(2), Fraction(3)))
            v = check_weight_monotonicity(inst, agent, inst.weights[agent - 1] * factor, rule, engine)
        else:
            v = check_group_strategyproofness(inst, rule, space)
        for item in v.violations:
            item["seed"] = seed
        total.merge(v)
    return total


# -- counterexamples -------------------------------------------------------------

@dataclass
class Reproduction:
    """Outcome of replaying one counterexample: every listed check must hold."""

    proposition: str
    checks: list = field(default_factory=list)   # (description, expected, observed)
    note: Optional[str] = None

    @property
    def reproduced(self) -> bool:
        return all(exp == obs for _, exp, obs in self.checks)

    def expect(self, description, expected, observed):
        self.checks.append((description, expected, observed))

    def to_json(self):
        return {
            "proposition": self.proposition,
            "reproduced": self.reproduced,
            "checks": [
                {"check": d, "expected": _plain(e), "observed": _plain(o), "ok": e == o}
                for d, e, o in self.checks
            ],
        }


def _plain(x):
    if isinstance(x, tuple):
        return [_plain(y) for y in x]
    if isinstance(x, list):
        return [_plain(y) for y in x]
    return x


def _optimum(rep: Reproduction, name: str):
    vectors, welfare = golden.EXPECTED[name]
    res = brute_force_mnw(golden.FIXTURES[name]())
    rep.expect(f"{name}: optimal utility vectors", vectors, res.vectors)
    rep.expect(f"{name}: maximum Nash welfare", welfare, res.welfare)
    return res


def _true_range(res, inst: Instance, agent: int) -> tuple:
    """(min, max) of ``agent``'s true utility over every optimal allocation in ``res``."""
    col = res.utilities_under(inst.valuations)[:, agent - 1]
    return int(col.min()), int(col.max())


def _restricted(rep, *names):
    for name in names:
        ok, _ = validate_restricted_additive(golden.FIXTURES[name]().valuations)
        rep.expect(f"{name}: profile is restricted additive", True, ok)


def run_counterexamples() -> list:
    """Replay the six counterexamples; each holds over every optimal allocation."""
    out = []

    rep = Reproduction("xos_resource_monotonicity")
    big, small = _optimum(rep, "xos_base"), _optimum(rep, "xos_without_g10")
    with_g10, without = golden.xos_base(), golden.xos_without_g10()
    rep.expect("agent 1 utility with g10 (min, max)", (5, 5), _true_range(big, with_g10, 1))
    rep.expect("agent 1 utility without g10 (min, max)", (6, 6), _true_range(small, without, 1))
    rep.expect("adding g10 lowers agent 1 under every tie-break", True,
               _true_range(big, with_g10, 1)[1] < _true_range(small, without, 1)[0])
    out.append(rep)

    rep = Reproduction("xos_population_monotonicity")
    _optimum(rep, "xos_base")
    three = _optimum(rep, "xos_third_agent")
    two_range = _true_range(brute_force_mnw(golden.xos_base()), golden.xos_base(), 1)
    three_range = _true_range(three, golden.xos_third_agent(), 1)
    rep.expect("agent 1 utility with agent 3 (min, max)", (6, 6), three_range)
    rep.expect("adding agent 3 raises agent 1 under every tie-break", True, three_range[0] > two_range[1])
    out.append(rep)

    rep = Reproduction("xos_strategyproofness")
    truth = _optimum(rep, "xos_base")
    lie = _optimum(rep, "xos_lie")
    truth_range = _true_range(truth, golden.xos_base(), 1)
    lie_range = _true_range(lie, golden.xos_base(), 1)
    rep.expect("agent 1 true utility after lying (min, max)", (6, 6), lie_range)
    rep.expect("lying helps agent 1 under every tie-break", True, lie_range[0] > truth_range[1])
    out.append(rep)

    rep = Reproduction("additive_resource_monotonicity")
    _restricted(rep, "additive_resource_base", "additive_resource_extra")
    before = _optimum(rep, "additive_resource_base")
    after = _optimum(rep, "additive_resource_extra")
    b_range = _true_range(before, golden.additive_resource_base(), 2)
    a_range = _true_range(after, golden.additive_resource_extra(), 2)
    rep.expect("agent 2 utility before and after g5", ((5, 5), (4, 4)), (b_range, a_range))
    rep.expect("adding g5 lowers agent 2 under every tie-break", True, a_range[1] < b_range[0])
    out.append(rep)

    rep = Reproduction("additive_population_monotonicity")
    _restricted(rep, "additive_population_two", "additive_population_three")
    two = _optimum(rep, "additive_population_two")
    three = _optimum(rep, "additive_population_three")
    t_range = _true_range(two, golden.additive_population_two(), 2)
    h_range = _true_range(three, golden.additive_population_three(), 2)
    rep.expect("agent 2 utility before and after agent 3", ((8, 8), (9, 9)), (t_range, h_range))
    rep.expect("adding agent 3 raises agent 2 under every tie-break", True, h_range[0] > t_range[1])
    out.append(rep)

    rep = Reproduction("additive_strategyproofness")
    _restricted(rep, "additive_truth", "additive_lie")
    truth = _optimum(rep, "additive_truth")
    lie = _optimum(rep, "additive_lie")
    truth_range = _true_range(truth, golden.additive_truth(), 1)
    lie_range = _true_range(lie, golden.additive_truth(), 1)
    rep.expect("agent 1 true utility when truthful (min, max)", (4, 4), truth_range)
    rep.expect("agent 1 true utility after lying is at least 5", True, lie_range[0] >= 5)
    rep.expect("lying helps agent 1 under every tie-break", True, lie_range[0] > truth_range[1])
    rep.note = "g2 is worthless under the lie, so some optimal allocations also hand it to agent 1"
    out.append(rep)
    return out
