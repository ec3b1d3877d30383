import itertools
from fractions import Fraction

import pytest

import reference
from matroid_fairdiv.errors import CapacityError, InputError, RuleError
from matroid_fairdiv.instances import Instance
from matroid_fairdiv.valuations import BinaryAdditive
from matroid_fairdiv.welfare import (FiniteRational, LogProduct, NegInfinity, Preference, compare_outcomes,
                                     evaluate, harmonic, make_rule)


def instance(weights, m=6):
    g = tuple(f"g{k}" for k in range(1, m + 1))
    return Instance.build(g, [BinaryAdditive(g, g) for _ in weights], weights)


def test_make_rule_examples():
    nw = make_rule("mwnw", 3)
    assert nw.f0_is_neg_inf and nw.f(0) is None
    hw = make_rule("mwhw", 3)
    assert [hw.f(k) for k in range(4)] == [0, 1, Fraction(3, 2), Fraction(11, 6)]
    with pytest.raises(RuleError):
        make_rule([0, 1, 1])
    with pytest.raises(CapacityError):
        make_rule([0, 1, 2], m=3)
    with pytest.raises(RuleError):
        make_rule("nope")
    with pytest.raises(RuleError):
        make_rule([0, 1.5, 2])
    with pytest.raises(RuleError):
        make_rule([0, "-inf", 2])


def test_rule_specs():
    r = make_rule({"rule": "custom", "f": ["-inf", "0", "1/2"]})
    assert r.f0_is_neg_inf and r.f(2) == Fraction(1, 2)
    assert make_rule(r.to_spec()).table == r.table
    assert make_rule({"rule": "mwhw"}).kind == "mwhw"


def test_concavity_flag():
    assert make_rule([0, 2, 3, "7/2"]).is_concave
    assert not make_rule([0, 1, 3, 4, 6, 7]).is_concave
    assert make_rule([None, 0, 1, 2]).is_concave      # only finite triples count
    assert make_rule("mwnw").is_concave and make_rule("mwhw").is_concave


def test_harmonic():
    assert harmonic(0) == 0 and harmonic(4) == Fraction(25, 12)


def test_evaluate_examples():
    assert evaluate(instance([1, 1]), (1, 1), make_rule("mwhw")) == FiniteRational(Fraction(2))
    assert isinstance(evaluate(instance([1, 2]), (0, 2), make_rule("mwnw")), NegInfinity)
    a = evaluate(instance([1, 1, 1]), (4, 5, 2), make_rule("mwnw"))
    b = evaluate(instance([1, 1, 1]), (6, 5, 2), make_rule("mwnw"))
    assert isinstance(a, LogProduct) and a.product == 40 and b.product == 60 and a < b
    with pytest.raises(InputError):
        evaluate(instance([1, 1], m=2), (3, 0), make_rule("mwhw"))


def test_weighted_log_product_clears_denominators():
    v = evaluate(instance(["1/2", "3/2"]), (4, 2), make_rule("mwnw"))
    assert v.pairs == ((1, 4), (3, 2)) and v.product == 32


def test_welfare_values_order():
    assert NegInfinity() < FiniteRational(Fraction(-10))
    assert NegInfinity() == NegInfinity()
    with pytest.raises(TypeError):
        FiniteRational(Fraction(1)) < LogProduct(((1, 2),))


def test_compare_examples():
    w12 = instance([1, 2], m=2)
    assert compare_outcomes(w12, make_rule("mwnw"), (1, 1), (0, 2)) is Preference.FIRST
    assert compare_outcomes(w12, make_rule("mwhw"), (1, 1), (0, 2)) is Preference.FIRST
    eq = instance([1, 1], m=1)
    assert compare_outcomes(eq, make_rule("mwnw"), (1, 0), (0, 1)) is Preference.FIRST
    assert compare_outcomes(eq, make_rule("mwnw"), (0, 1), (1, 0)) is Preference.SECOND
    assert compare_outcomes(eq, make_rule("mwnw"), (0, 1), (0, 1)) is Preference.EQUAL


def test_positive_support_layer():
    inst = instance([1, 1, 1])
    nw = make_rule("mwnw")
    # more positive agents first, then the smaller index set, then welfare on it
    assert compare_outcomes(inst, nw, (1, 1, 0), (5, 0, 0)) is Preference.FIRST
    assert compare_outcomes(inst, nw, (1, 0, 1), (0, 5, 5)) is Preference.FIRST
    assert compare_outcomes(inst, nw, (1, 2, 0), (2, 1, 0)) is Preference.SECOND


RULES = ["mwnw", "mwhw", [0, 2, 3, Fraction(7, 2), Fraction(15, 4)], [None, 0, 1, 3, 4], [0, 1, 3, 4, 6]]


@pytest.mark.parametrize("rule", RULES, ids=str)
@pytest.mark.parametrize("weights", [[1, 1, 1], [1, Fraction(1, 2), 3], [2, 2, 1]], ids=str)
def test_order_matches_reference_exhaustively(rule, weights):
    inst = instance(weights, m=4)
    r = make_rule(rule)
    vectors = list(itertools.product(range(5), repeat=3))
    keys = {u: r.key(inst.weights, u) for u in vectors}
    for u, v in itertools.combinations(vectors, 2):
        ours = (keys[u] > keys[v]) - (keys[u] < keys[v])
        assert ours == reference.compare(rule, inst.weights, u, v), (u, v)
        assert ours != 0


def test_order_is_total_and_transitive():
    inst = instance([1, 2, Fraction(1, 3)], m=4)
    r = make_rule("mwnw")
    vectors = sorted(itertools.product(range(4), repeat=3), key=lambda u: r.key(inst.weights, u))
    for a, b, c in zip(vectors, vectors[1:], vectors[2:]):
        assert compare_outcomes(inst, r, a, b) is Preference.SECOND
        assert compare_outcomes(inst, r, a, c) is Preference.SECOND


def test_weight_scaling_leaves_order_unchanged():
    r = make_rule("mwnw")
    u, v = (2, 3, 1), (3, 1, 2)
    for scale in (Fraction(1, 3), 2, 7):
        a = instance([1, 2, 3])
        b = instance([scale, 2 * scale, 3 * scale])
        assert compare_outcomes(a, r, u, v) is compare_outcomes(b, r, u, v)
