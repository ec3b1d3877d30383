"""
Watching the greedy solver
==========================

The solver adds one good at a time. Each step it looks for short exchange
paths that end at the new good and keeps the one whose outcome is best for
the welfare rule. Here we print every candidate so the choices are visible.
"""
# %%
from matroid_fairdiv import exchange
from matroid_fairdiv.instances import Instance
from matroid_fairdiv.solver import solve
from matroid_fairdiv.valuations import BinaryAdditive, PartitionMatroid

goods = ("a", "b", "c", "d", "e")
inst = Instance.build(goods, [
    PartitionMatroid(goods, [(("a", "b", "c"), 1), (("d", "e"), 2)]),  # one of a/b/c, both of d/e
    BinaryAdditive(goods, ["a", "b"]),
    BinaryAdditive(goods, ["a", "c", "e"]),
], weights=[2, 1, 1])

# %%
alloc, trace = solve(inst, "mwnw")
for it in trace:
    print(f"good {it.good}")
    for c in it.candidates:
        mark = "*" if c is it.selected else " "
        print(f"  {mark} agent {c.agent} path {'->'.join(c.path)} utilities {c.utilities}")

print("final:", {i + 1: sorted(b) for i, b in enumerate(alloc.bundles)})

# %%
# The exchange graph of the final allocation: an edge g -> h means the owner
# of g can swap g for h without losing value.
graph = exchange.build(inst, alloc)
print(sorted(graph.edges()))

# %%
# A transfer moves one unit of value from agent 1 to agent 2 along a path.
moved = exchange.transfer(inst, alloc, 2, 1)
print("after transfer(2 <- 1):", {i + 1: sorted(b) for i, b in enumerate(moved.bundles)})
