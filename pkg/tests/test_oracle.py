import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import reference
from conftest import small_instance
from matroid_fairdiv import golden
from matroid_fairdiv.errors import CapacityError
from matroid_fairdiv.instances import Instance, is_non_redundant, utility_vector
from matroid_fairdiv.oracle import allocation_count, brute_force_mnw, brute_force_opt, enumerate_allocations
from matroid_fairdiv.valuations import BinaryAdditive


def identical(n, m):
    g = golden.goods(m)
    return Instance.build(g, [BinaryAdditive(g, g) for _ in range(n)])


@pytest.mark.parametrize("n,m,count", [(1, 1, 2), (2, 2, 9), (3, 4, 256)])
def test_enumeration_counts(n, m, count):
    inst = identical(n, m)
    seen = [a.bundles for a in enumerate_allocations(inst)]
    assert len(seen) == count == allocation_count(inst)
    assert len(set(seen)) == count


def test_budget():
    with pytest.raises(CapacityError) as err:
        brute_force_opt(identical(5, 20), "mwnw")
    assert err.value.bound == 6**20
    with pytest.raises(CapacityError):
        list(enumerate_allocations(identical(2, 3), budget=26))


def test_opt_examples():
    assert brute_force_opt(golden.two_goods_weights_1_2(), "mwnw").vector == (1, 1)
    res = brute_force_opt(golden.apportionment(), "mwnw")
    assert res.vector == (2, 2) and res.optimal_count == 6 and res.examined == 81
    for rule in ("mwnw", "mwhw", [0, 1, 2]):
        assert brute_force_opt(identical(1, 2), rule).vector == (2,)


def test_witness_is_non_redundant():
    inst = Instance.build(("a", "b"), [BinaryAdditive(("a", "b"), ["a"])])
    res = brute_force_opt(inst, "mwhw")
    assert is_non_redundant(inst, res.witness)
    assert utility_vector(inst, res.witness) == res.vector


@given(seed=st.integers(0, 10**6), rule=st.sampled_from(["mwnw", "mwhw", "table", "nonconcave"]))
def test_opt_matches_naive_reference(seed, rule):
    inst = small_instance(seed, m=(1, 4))
    spec = {"table": [0, 2, 3, Fraction(7, 2), Fraction(15, 4)], "nonconcave": [0, 1, 3, 4, 6]}.get(rule, rule)
    res = brute_force_opt(inst, spec)
    assert res.vector == reference.best_vector(inst, spec)
    assert utility_vector(inst, res.witness) == res.vector


MNW_CASES = ["xos_base", "xos_without_g10", "xos_third_agent", "xos_lie", "additive_resource_base",
             "additive_resource_extra", "additive_population_two", "additive_population_three",
             "additive_truth", "additive_lie"]


@pytest.mark.parametrize("name", MNW_CASES)
def test_mnw_counterexample_numbers(name):
    vectors, welfare = golden.EXPECTED[name]
    res = brute_force_mnw(golden.FIXTURES[name]())
    assert res.vectors == vectors and res.welfare == welfare


@pytest.mark.parametrize("name", [n for n in MNW_CASES if n.startswith("additive")])
def test_mnw_matches_naive_reference(name):
    inst = golden.FIXTURES[name]()
    res = brute_force_mnw(inst)
    assert (res.vectors, res.welfare) == reference.mnw_vectors(inst)


def test_mnw_keeps_every_optimal_allocation():
    inst = golden.xos_base()
    res = brute_force_mnw(inst)
    allocs = list(res.allocations(inst))
    assert len(allocs) == 7
    assert {utility_vector(inst, a) for a in allocs} == {(5, 4)}
    assert res.utilities_under(inst.valuations).tolist() == [[5, 4]] * 7


def test_mnw_positive_support_when_all_products_vanish():
    g = ("a",)
    inst = Instance.build(g, [BinaryAdditive(g, g), BinaryAdditive(g, g)])
    res = brute_force_mnw(inst)
    assert res.all_products_zero and res.support == 1 and res.welfare == 1
    assert res.vectors == [(0, 1), (1, 0)]


@given(seed=st.integers(0, 10**6))
def test_mnw_matches_reference_on_random_instances(seed):
    inst = small_instance(seed, n=(1, 3), m=(0, 4))
    res = brute_force_mnw(inst)
    assert (res.vectors, res.welfare) == reference.mnw_vectors(inst)
    rows = res.utilities_under(inst.valuations)
    assert {tuple(r) for r in rows.tolist()} == set(res.vectors)
    total = sum(1 for b in reference.all_assignments(inst.n, inst.goods)
                if reference.utilities(inst, b) in set(res.vectors))
    assert rows.shape[0] == total


def test_words_cover_chunks():
    # 3^12 words spans several enumeration blocks
    inst = identical(2, 12)
    res = brute_force_opt(inst, "mwnw")
    assert res.vector == (6, 6)
    assert res.optimal_count == sum(1 for _ in itertools.combinations(range(12), 6))
