"""Right-shifted down-sets: the shift/down order, enumeration and optimal sets."""

from ..distdist import distance_sum
from .bruteforce import distance_sum_optimal, exhaustive_best, subcube_strictly_optimal
from .generators import GeneratorSet, expand_generators, minimal_generators, precedes
from .genideal import MAX_TARGET, SizeGated, candidate_count, count_rsds, enumerate_rsds
from .optimal import OptimalityProfile, TableRow, optimal_sets, optimal_table
from .poset import BudgetExceeded, ShiftPoset, is_rsds, principal_downset

__all__ = [
    "BudgetExceeded",
    "GeneratorSet",
    "MAX_TARGET",
    "OptimalityProfile",
    "ShiftPoset",
    "SizeGated",
    "TableRow",
    "candidate_count",
    "count_rsds",
    "distance_sum",
    "distance_sum_optimal",
    "enumerate_rsds",
    "exhaustive_best",
    "expand_generators",
    "is_rsds",
    "minimal_generators",
    "optimal_sets",
    "optimal_table",
    "precedes",
    "principal_downset",
    "subcube_strictly_optimal",
]
