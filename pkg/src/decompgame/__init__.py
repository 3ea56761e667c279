"""Coalition-game decomposition of requirement sets.

The package models a design problem as an attribute primitive (functional
requirements, quality scenarios, and the relations between them), scores
coalitions of requirements with a utility built from pairwise relevance
and tradeoff effects, and searches for decompositions whose parts are
cohesive and admit no utility-improving merge.
"""

from decompgame.model import (
    AttributePrimitive,
    Constraint,
    DomainError,
    GameModel,
    GameParams,
    Kind,
    Requirement,
    TradeoffMatrix,
    dependency_set,
    derived_from,
    derived_set,
    general_scenario,
    constraints_of,
    validate,
    validate_decomposition,
)
from decompgame.relevance import are_relevant, jaccard, relevance_index
from decompgame.utility import (
    GameContext,
    build_context,
    coalition_utility,
    coalitional_relevance,
    default_tradeoff_matrix,
    effect_factor,
    pair_interaction,
)
from decompgame.solver import (
    CapExceededError,
    SolveReport,
    VerifyResult,
    cohesive_decomposition,
    is_cohesive,
    is_expansion_free,
    is_k_cohesive,
    max_k_cohesive,
    solve_exact,
    solve_k,
    verify_solution,
)

__version__ = "0.1.0"

__all__ = [
    "AttributePrimitive",
    "CapExceededError",
    "Constraint",
    "DomainError",
    "GameContext",
    "GameModel",
    "GameParams",
    "Kind",
    "Requirement",
    "SolveReport",
    "TradeoffMatrix",
    "VerifyResult",
    "are_relevant",
    "build_context",
    "coalition_utility",
    "coalitional_relevance",
    "cohesive_decomposition",
    "constraints_of",
    "default_tradeoff_matrix",
    "dependency_set",
    "derived_from",
    "derived_set",
    "effect_factor",
    "general_scenario",
    "is_cohesive",
    "is_expansion_free",
    "is_k_cohesive",
    "jaccard",
    "max_k_cohesive",
    "pair_interaction",
    "relevance_index",
    "solve_exact",
    "solve_k",
    "validate",
    "validate_decomposition",
    "verify_solution",
]
