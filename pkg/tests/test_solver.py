import logging
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import reference
from conftest import CUSTOM_CONCAVE, small_instance
from matroid_fairdiv import golden
from matroid_fairdiv.errors import CapacityError, PreconditionError, RuleError, UnsupportedKindError
from matroid_fairdiv.instances import Allocation, Instance, is_non_redundant, utility_vector
from matroid_fairdiv.solver import add_one_good, solve, solve_utilities
from matroid_fairdiv.valuations import BinaryAdditive, Explicit, PartitionMatroid
from matroid_fairdiv.welfare import make_rule

ABCD = ("a", "b", "c", "d")


def alloc(*bundles):
    return Allocation(tuple(frozenset(b) for b in bundles))


def test_solve_examples():
    assert solve_utilities(golden.apportionment(), "mwnw") == (2, 2)
    assert solve_utilities(golden.two_goods_weights_1_2(), "mwnw") == (1, 1)
    assert solve_utilities(golden.two_goods_weights_1_2(), "mwhw") == (1, 1)


def test_add_one_good_prefers_the_path_that_evens_out():
    g = ("a", "b")
    inst = Instance.build(g, [BinaryAdditive(g, g), BinaryAdditive(g, ["a"])])
    out, it = add_one_good(inst, alloc({"a"}, set()), "b", make_rule("mwnw"))
    assert [(c.agent, c.path, c.utilities) for c in it.candidates] == [(1, ("b",), (2, 0)), (2, ("a", "b"), (1, 1))]
    assert out == alloc({"b"}, {"a"})


def test_add_one_good_nobody_wants():
    inst = Instance.build(("a", "b"), [BinaryAdditive(("a", "b"), ["a"])])
    out, it = add_one_good(inst, alloc({"a"}), "b", make_rule("mwnw"))
    assert out == alloc({"a"}) and it.selected is None and it.candidates == []


def test_add_one_good_lexicographic_tie():
    inst = Instance.build(ABCD, [BinaryAdditive(ABCD, ABCD), BinaryAdditive(ABCD, ABCD)])
    out, _ = add_one_good(inst, alloc({"a"}, {"b"}), "c", make_rule("mwnw"), active={"a", "b", "c"})
    assert out.sizes() == (2, 1)


def test_add_one_good_preconditions():
    inst = Instance.build(ABCD, [BinaryAdditive(ABCD, ABCD)])
    with pytest.raises(PreconditionError):
        add_one_good(inst, alloc({"a"}), "a", make_rule("mwnw"))
    with pytest.raises(PreconditionError):
        add_one_good(inst, alloc({"a"}), "c", make_rule("mwnw"), active={"a", "b"})


def test_rejections():
    with pytest.raises(RuleError):
        solve(golden.apportionment(), [0, 1, 3, 4, 6])
    with pytest.raises(UnsupportedKindError, match="submodular"):
        solve(golden.xos_base(), "mwnw")
    with pytest.raises(CapacityError):
        solve(golden.apportionment(), [0, 1, 2])


def test_explicit_matroid_is_validated_not_trusted():
    bad = Explicit.from_function(("a", "b"), lambda b: 2 * len(b))
    with pytest.raises(UnsupportedKindError, match="binary"):
        solve(Instance.build(("a", "b"), [bad]), "mwnw")


def test_large_constructive_instances_skip_validation(caplog):
    g = golden.goods(20)
    inst = Instance.build(g, [PartitionMatroid(g, [(g[:10], 3), (g[10:], 2)]), BinaryAdditive(g, g)])
    with caplog.at_level(logging.WARNING):
        assert solve_utilities(inst, "mwnw") == (5, 15)
    assert not caplog.records


def test_trace_shape():
    inst = golden.apportionment()
    a, trace = solve(inst, "mwnw")
    assert len(trace) == inst.m
    assert [it.good for it in trace] == list(inst.goods)
    assert trace.iterations[-1].allocation == a
    assert trace.iterations[-1].to_json()["utilities"] == [2, 2]


RULES = {"mwnw": "mwnw", "mwhw": "mwhw", "custom": CUSTOM_CONCAVE}
REF_RULES = {"mwnw": "mwnw", "mwhw": "mwhw", "custom": [Fraction(x) for x in CUSTOM_CONCAVE]}


@pytest.mark.parametrize("name", sorted(RULES))
@given(seed=st.integers(0, 10**6))
def test_solver_matches_naive_reference(name, seed):
    inst = small_instance(seed, m=(1, 4))
    a, trace = solve(inst, RULES[name])
    assert is_non_redundant(inst, a)
    assert utility_vector(inst, a) == reference.best_vector(inst, REF_RULES[name])


@given(seed=st.integers(0, 10**6))
def test_neg_inf_custom_table_matches_reference(seed):
    inst = small_instance(seed, m=(1, 4))
    table = [None, 0, 1, Fraction(3, 2), Fraction(7, 4)]
    assert solve_utilities(inst, table) == reference.best_vector(inst, table)


@given(seed=st.integers(0, 10**6), scale=st.sampled_from(["1/3", "2", "5/2"]))
def test_scaling_every_weight_changes_nothing(seed, scale):
    inst = small_instance(seed)
    scaled = inst.with_weights([w * Fraction(scale) for w in inst.weights])
    for rule in ("mwnw", "mwhw"):
        assert solve_utilities(inst, rule) == solve_utilities(scaled, rule)
