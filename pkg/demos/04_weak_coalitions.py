"""
Strong versus weak coalitions
=============================

Under matroid-rank valuations no group of agents can misreport so that every
member strictly gains. The weaker notion, where nobody loses and somebody
gains, is not guaranteed. An exhaustive sweep over three agents and two goods
turns up the smallest such case.
"""
# %%
from matroid_fairdiv import golden
from matroid_fairdiv.audits import exhaustive_group_strategyproofness
from matroid_fairdiv.solver import solve_utilities

truth, lie = golden.weak_coalition_truth(), golden.weak_coalition_lie()
print("truthful outcome:", solve_utilities(truth, "mwnw"))
print("agent 1 hides g2:", solve_utilities(lie, "mwnw"))
# agent 1 still gets one good it likes; agent 3 goes from 0 to 1

# %%
goods = golden.goods(2)
strict = exhaustive_group_strategyproofness(3, goods, "mwnw", None, "binary_additive_all")
weak = exhaustive_group_strategyproofness(3, goods, "mwnw", None, "binary_additive_all", strict=False)
print(f"strict: {strict.instances_tried} profiles, {len(strict.violations)} violations")
print(f"weak:   {weak.instances_tried} profiles, {len(weak.violations)} violations")
print("first weak violation coalition:", weak.violations[0]["coalition"])
