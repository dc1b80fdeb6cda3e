"""Super-stable matchings for student-project allocation with ties."""

from .cloning import clone_to_hrt, is_hrt
from .generator import GeneratorConfig, generate
from .instance import (
    Instance,
    InstanceError,
    ParseError,
    format_instance,
    parse_instance,
    projected_preference_list,
    rank_of,
    read_instance,
    write_instance,
)
from .ipmodel import build_model, export_lp, feasible_matchings_by_enumeration
from .oracle import all_super_stable, all_weakly_stable, enumerate_matchings
from .solver import SolveOutcome, SolverPolicy, solve, solve_traced
from .stability import (
    BlockingPair,
    MatchingError,
    find_blocking_pairs,
    is_matching,
    is_super_stable,
    is_weakly_stable,
)

__all__ = [
    "BlockingPair",
    "GeneratorConfig",
    "Instance",
    "InstanceError",
    "MatchingError",
    "ParseError",
    "SolveOutcome",
    "SolverPolicy",
    "all_super_stable",
    "all_weakly_stable",
    "build_model",
    "clone_to_hrt",
    "enumerate_matchings",
    "export_lp",
    "feasible_matchings_by_enumeration",
    "find_blocking_pairs",
    "format_instance",
    "generate",
    "is_hrt",
    "is_matching",
    "is_super_stable",
    "is_weakly_stable",
    "parse_instance",
    "projected_preference_list",
    "rank_of",
    "read_instance",
    "solve",
    "solve_traced",
    "write_instance",
]
