"""Weighted welfarist allocation of indivisible goods under matroid-rank valuations.

>>> from matroid_fairdiv import golden, solve
>>> alloc, _ = solve(golden.apportionment(), "mwnw")
>>> alloc.sizes()
(2, 2)
"""
__version__ = "0.1.0"

from .errors import CapacityError, FairDivError, InputError, PreconditionError, RuleError, UnsupportedKindError
from .valuations import (XOS, Additive, BinaryAdditive, Explicit, GraphicMatroid, PartitionMatroid, Valuation,
                         binary_additive_catalog, from_spec, matroid_rank_catalog, validate_matroid_rank,
                         validate_restricted_additive)
from .instances import Allocation, Instance, is_non_redundant, reduce_non_redundant, utility_vector
from .welfare import Preference, WelfareFunction, compare_outcomes, evaluate, make_rule
from .exchange import ExchangeGraph, augment, transfer
from .solver import add_one_good, solve, solve_utilities
from .oracle import brute_force_mnw, brute_force_opt, enumerate_allocations
from .formats import allocation_to_json, instance_from_json, instance_to_json, load_instance, parse_rule
from .audits import (AuditVerdict, GeneratorConfig, check_group_strategyproofness, check_population_monotonicity,
                     check_resource_monotonicity, check_weight_monotonicity, random_instance, run_counterexamples)
from . import golden

__all__ = [name for name in dir() if not name.startswith("_")]
