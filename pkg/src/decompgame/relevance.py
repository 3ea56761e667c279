"""Pairwise relevance between requirements.

Two requirements are relevant when their structural footprints overlap:
shared deriving scenarios, overlapping dependency sets, shared
constraints, a common general scenario, or a derivation link across the
functional/scenario divide. The relevance index turns that into a
number: a weighted sum of Jaccard similarities for relevant pairs, a
fixed negative value for irrelevant ones.
"""

from __future__ import annotations

from decompgame.model import (
    AttributePrimitive,
    DomainError,
    GameParams,
    Kind,
    constraints_of,
    dependency_set,
    derived_from,
    derived_set,
    general_scenario,
)


def jaccard(a: frozenset[str] | set[str], b: frozenset[str] | set[str]) -> float:
    """Set similarity |a & b| / |a | b|; two empty sets score 0."""
    if not a and not b:
        return 0.0
    inter = len(a & b)
    if inter == 0:
        return 0.0
    return inter / len(a | b)


def _kinds(primitive: AttributePrimitive, a: str, b: str) -> tuple[Kind, Kind]:
    try:
        ka = primitive.by_id[a].kind
        kb = primitive.by_id[b].kind
    except KeyError as exc:
        raise DomainError(f"unknown requirement {exc.args[0]!r}") from None
    return ka, kb


def are_relevant(
    primitive: AttributePrimitive, a: str, b: str, dep_mode: str = "comparable"
) -> bool:
    """Structural relevance predicate for a pair of distinct requirements."""
    if a == b:
        raise DomainError("relevance is defined on pairs of distinct requirements")
    ka, kb = _kinds(primitive, a, b)
    if ka is Kind.FUNCTIONAL and kb is Kind.FUNCTIONAL:
        return bool(
            derived_from(primitive, a) & derived_from(primitive, b)
            or dependency_set(primitive, a, dep_mode) & dependency_set(primitive, b, dep_mode)
            or constraints_of(primitive, a) & constraints_of(primitive, b)
        )
    if ka is Kind.SCENARIO and kb is Kind.SCENARIO:
        return bool(
            general_scenario(primitive, a) & general_scenario(primitive, b)
            or derived_set(primitive, a) & derived_set(primitive, b)
            or constraints_of(primitive, a) & constraints_of(primitive, b)
        )
    # Mixed pair: orient as (functional, scenario).
    f, s = (a, b) if ka is Kind.FUNCTIONAL else (b, a)
    return bool(
        dependency_set(primitive, f, dep_mode) & derived_set(primitive, s)
        or constraints_of(primitive, f) & constraints_of(primitive, s)
    )


def relevance_index(
    primitive: AttributePrimitive,
    params: GameParams,
    a: str,
    b: str,
    dep_mode: str = "comparable",
) -> float:
    """Signed relevance of an unordered pair.

    Pairs pinned in the primitive's raw relevance table short-circuit the
    structural computation entirely. Otherwise relevant pairs score a
    weighted Jaccard sum and irrelevant pairs score the lambda parameter.
    """
    if a == b:
        raise DomainError("relevance is defined on pairs of distinct requirements")
    key = (a, b) if a <= b else (b, a)
    raw = primitive.raw_relevance.get(key)
    if raw is not None:
        return raw
    if not are_relevant(primitive, a, b, dep_mode):
        return params.lam
    ka, kb = _kinds(primitive, a, b)
    cj = params.gamma * jaccard(constraints_of(primitive, a), constraints_of(primitive, b))
    if ka is Kind.FUNCTIONAL and kb is Kind.FUNCTIONAL:
        return (
            params.alpha * jaccard(derived_from(primitive, a), derived_from(primitive, b))
            + params.beta
            * jaccard(
                dependency_set(primitive, a, dep_mode), dependency_set(primitive, b, dep_mode)
            )
            + cj
        )
    if ka is Kind.SCENARIO and kb is Kind.SCENARIO:
        return (
            params.beta * jaccard(derived_set(primitive, a), derived_set(primitive, b)) + cj
        )
    f, s = (a, b) if ka is Kind.FUNCTIONAL else (b, a)
    return (
        params.beta * jaccard(dependency_set(primitive, f, dep_mode), derived_set(primitive, s))
        + cj
    )
