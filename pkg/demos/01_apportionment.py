"""
Identical goods and apportionment
=================================

When every agent values every good, a matroid-rank instance is just an
apportionment problem: only the number of goods each agent receives matters.
This walk-through shows how the weights shift the split under the two
built-in rules.
"""
# %%
from fractions import Fraction

from matroid_fairdiv import golden
from matroid_fairdiv.instances import Instance
from matroid_fairdiv.solver import solve, solve_utilities
from matroid_fairdiv.valuations import BinaryAdditive

# %%
# Two equal agents and four identical goods split evenly.
inst = golden.apportionment()
alloc, trace = solve(inst, "mwnw")
print("bundles:", [sorted(b) for b in alloc.bundles])
for it in trace:
    print(f"  after {it.good}: utilities {it.utilities}")

# %%
# Now give agent 2 twice the weight and vary the number of goods.
goods = golden.goods(9)
for m in range(1, 10):
    g = goods[:m]
    inst = Instance.build(g, [BinaryAdditive(g, g)] * 2, [1, 2])
    print(m, "mwnw", solve_utilities(inst, "mwnw"), "mwhw", solve_utilities(inst, "mwhw"))

# %%
# Harmonic welfare behaves like a divisor method with offsets 1, 2, 3, ...
# while Nash welfare follows the weighted geometric mean. Fractional weights work the same way.
g = golden.goods(6)
inst = Instance.build(g, [BinaryAdditive(g, g)] * 3, [Fraction(1, 2), 1, Fraction(3, 2)])
print("three agents, weights 1/2, 1, 3/2:", solve_utilities(inst, "mwnw"))
