"""
Where the guarantees stop
=========================

Leave matroid-rank valuations and the monotonicity and truthfulness
properties of Nash welfare fail. This script rebuilds two small families of
examples, one with binary XOS valuations and one with restricted additive
valuations, and checks every Nash-optimal allocation by exhaustive search.
"""
# %%
from matroid_fairdiv import golden
from matroid_fairdiv.audits import run_counterexamples
from matroid_fairdiv.oracle import brute_force_mnw
from matroid_fairdiv.valuations import validate_matroid_rank

# %%
# The second XOS agent is not submodular; the validator names a witness.
report = validate_matroid_rank(golden.xos_base().valuations[1])
print(report.violations[0].to_json())

# %%
for name in ("xos_base", "xos_without_g10", "xos_third_agent", "xos_lie"):
    res = brute_force_mnw(golden.FIXTURES[name]())
    print(f"{name:18s} optimal utilities {res.vectors}  Nash welfare {res.welfare}")

# %%
# Under the lie, agent 1 reports more than it values. Its true utility under
# every optimal allocation of the misreported instance:
res = brute_force_mnw(golden.xos_lie())
print("true utilities:", sorted({tuple(r) for r in res.utilities_under(golden.xos_base().valuations).tolist()}))

# %%
for name in ("additive_resource_base", "additive_resource_extra",
             "additive_population_two", "additive_population_three",
             "additive_truth", "additive_lie"):
    res = brute_force_mnw(golden.FIXTURES[name]())
    print(f"{name:26s} optimal utilities {res.vectors}  Nash welfare {res.welfare}")

# %%
for r in run_counterexamples():
    print(f"{r.proposition:32s} reproduced={r.reproduced}")
