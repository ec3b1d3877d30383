import random

import pytest
from hypothesis import given, strategies as st

import reference
from conftest import small_instance
from matroid_fairdiv.errors import InputError, PreconditionError
from matroid_fairdiv.exchange import ExchangeGraph, augment, build, transfer
from matroid_fairdiv.instances import Allocation, Instance, is_non_redundant, reduce_non_redundant, utility_vector
from matroid_fairdiv.oracle import allocation_from_word
from matroid_fairdiv.valuations import BinaryAdditive

G = ("a", "b", "c")


def alloc(*bundles):
    return Allocation(tuple(frozenset(b) for b in bundles))


def test_build_examples():
    inst = Instance.build(G, [BinaryAdditive(G, ["a", "b"])])
    assert build(inst, Allocation.empty(1)).edges() == []
    g = build(inst, alloc({"a"}))
    assert g.has_edge("a", "b") and not g.has_edge("b", "a")
    assert g.to_json() == {"edges": [["a", "b"]]}


def test_build_rejects_redundant():
    inst = Instance.build(G, [BinaryAdditive(G, ["a"])])
    with pytest.raises(PreconditionError):
        build(inst, alloc({"a", "b"}))


def test_shortest_path_examples():
    inst = Instance.build(G, [BinaryAdditive(G, ["a", "b"])])
    g = build(inst, alloc({"a"}))
    assert g.shortest_path({"a"}, {"a", "c"}) == ("a",)
    assert g.shortest_path({"a"}, {"b"}) == ("a", "b")
    assert g.shortest_path({"a"}, {"c"}) is None


def test_augment_examples():
    a = alloc({"g1"}, {"g2"})
    assert augment(a, ("g1",)) == a
    assert augment(alloc({"g1"}), ("g1", "g2")) == alloc({"g2"})
    assert augment(a, ("g1", "g2", "g3")) == alloc({"g2"}, {"g3"})


def test_augment_onto_an_owned_good_is_rejected():
    with pytest.raises(InputError):
        augment(alloc({"g1"}, {"g2"}), ("g1", "g2"))


def test_transfer_examples():
    both = Instance.build(G, [BinaryAdditive(G, ["a"]), BinaryAdditive(G, ["a"])])
    assert transfer(both, alloc({"a"}, set()), 2, 1) == alloc(set(), {"a"})
    mixed = Instance.build(G, [BinaryAdditive(G, ["a", "b"]), BinaryAdditive(G, ["a"])])
    out = transfer(mixed, alloc({"a"}, set()), 2, 1)
    assert out == alloc(set(), {"a"}) and utility_vector(mixed, out) == (0, 1)
    nothing = Instance.build(G, [BinaryAdditive(G, ["a"]), BinaryAdditive(G, [])])
    assert transfer(nothing, alloc({"a"}, set()), 2, 1) is None
    with pytest.raises(PreconditionError):
        transfer(both, alloc({"a"}, set()), 1, 1)


def test_transfer_through_a_chain():
    # agent 2 wants a, held by agent 1, who can make do with c, held by agent 3
    inst = Instance.build(G, [BinaryAdditive(G, ["a", "c"]), BinaryAdditive(G, ["a"]), BinaryAdditive(G, G)])
    out = transfer(inst, alloc({"a"}, set(), {"c"}), 2, 3)
    assert out == alloc({"c"}, {"a"}, set())


def _random_non_redundant(seed):
    inst = small_instance(seed)
    rng = random.Random(seed)
    a = allocation_from_word(inst, [rng.randint(0, inst.n) for _ in inst.goods])
    return inst, reduce_non_redundant(inst, a), rng


@given(st.integers(0, 10**6))
def test_graph_matches_definition(seed):
    inst, a, _ = _random_non_redundant(seed)
    g = build(inst, a)
    assert set(g.edges()) == reference.swap_edges(inst, a.bundles)


@given(st.integers(0, 10**6))
def test_shortest_path_is_shortest(seed):
    inst, a, rng = _random_non_redundant(seed)
    g = build(inst, a)
    edges = reference.swap_edges(inst, a.bundles)
    src = {x for x in inst.goods if rng.random() < 0.4}
    tgt = {x for x in inst.goods if rng.random() < 0.4}
    path = g.shortest_path(src, tgt)
    d = reference.bfs_distance(edges, src, tgt)
    if d is None:
        assert path is None
    else:
        assert len(path) - 1 == d
        assert path[0] in src and path[-1] in tgt
        assert all((x, y) in edges for x, y in zip(path, path[1:]))


@given(st.integers(0, 10**6))
def test_backward_distances_match_forward_search(seed):
    inst, a, rng = _random_non_redundant(seed)
    g = ExchangeGraph(inst.goods, zip(a.bundles, inst.valuations))
    target = rng.choice(inst.goods)
    dist, hop = g.distances_to(target)
    for x in inst.goods:
        p = g.shortest_path({x}, {target})
        assert (p is None) == (x not in dist)
        if p is not None:
            assert len(p) - 1 == dist[x]
            path = g.follow(x, hop)
            assert path[-1] == target and len(path) == len(p)


@given(st.integers(0, 10**6))
def test_transfer_post_conditions(seed):
    inst, a, rng = _random_non_redundant(seed)
    gainer, loser = rng.sample(range(1, inst.n + 1), 2)
    before = utility_vector(inst, a)
    out = transfer(inst, a, gainer, loser)
    if out is None:
        return
    after = utility_vector(inst, out)
    delta = [y - x for x, y in zip(before, after)]
    assert delta[gainer - 1] == 1 and delta[loser - 1] == -1
    assert all(d == 0 for i, d in enumerate(delta, start=1) if i not in (gainer, loser))
    assert is_non_redundant(inst, out)
