"""Coalition utility: coalitional relevance, effect factors, interactions.

The value of a coalition is the sum of pairwise interactions inside it.
A pair involving a functional requirement interacts by its relevance
index alone, independent of the rest of the coalition. A pair of
scenarios interacts through effect factors: each scenario's coalitional
relevance, signed by the tradeoff entry between their general-scenario
labels.

All coalition sums go through ``math.fsum`` over a canonical term list,
so a utility is the correctly rounded value of the exact rational sum.
Coalitions whose utilities are equal as exact rationals therefore
compare equal as floats, which the solvers rely on for stable
tie-breaking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from decompgame.model import (
    AttributePrimitive,
    DomainError,
    GameModel,
    GameParams,
    Kind,
    TradeoffMatrix,
    validate,
)
from decompgame.relevance import relevance_index

_DEFAULT_LABELS = (
    "Performance",
    "Modifiability",
    "Security",
    "Availability",
    "Testability",
    "Usability",
)

_DEFAULT_ROWS = (
    (0, -1, 0, 0, 0, -1),
    (-1, 0, 0, 1, 1, 0),
    (-1, 0, 0, 1, -1, -1),
    (0, 0, 0, 0, 0, 0),
    (0, 1, 1, 1, 0, 1),
    (-1, 0, 0, 0, -1, 0),
)


def default_tradeoff_matrix() -> TradeoffMatrix:
    """The stock 6x6 tradeoff matrix over common quality attributes.

    Row label acts on column label; e.g. promoting Security degrades
    Performance (-1) while promoting Testability helps Modifiability
    (+1). Availability affects nothing.
    """
    return TradeoffMatrix(labels=_DEFAULT_LABELS, rows=_DEFAULT_ROWS)


@dataclass
class GameContext:
    """Precomputed pairwise data for one game: the unit solvers work on.

    sigma rows hold the full symmetric relevance matrix (diagonal 0).
    For scenario rows, tradeoff_sign holds the tradeoff entry from that
    scenario's label towards every other requirement's label (0 against
    functional requirements); functional rows store None. Utilities are
    memoized per member bitmask.
    """

    primitive: AttributePrimitive
    params: GameParams
    dep_mode: str
    ids: tuple[str, ...]
    index: dict[str, int]
    sigma: tuple[tuple[float, ...], ...]
    tradeoff_sign: tuple[tuple[int, ...] | None, ...]
    _functional_pair_sigma: tuple[tuple[float, ...], ...] = field(repr=False)
    _has_functional: bool = field(repr=False)
    _has_signed_pairs: bool = field(repr=False)
    _memo: dict[int, float] = field(default_factory=dict, repr=False)

    def sigma_of(self, a: str, b: str) -> float:
        return self.sigma[self._require(a)][self._require(b)]

    def _require(self, rid: str) -> int:
        try:
            return self.index[rid]
        except KeyError:
            raise DomainError(f"unknown requirement {rid!r}") from None

    def indices_of(self, coalition: Iterable[str]) -> tuple[int, ...]:
        return tuple(sorted({self._require(r) for r in coalition}))


def build_context(
    model: GameModel | AttributePrimitive,
    params: GameParams | None = None,
    dep_mode: str = "comparable",
) -> GameContext:
    """Validate the model and precompute every pairwise quantity."""
    if isinstance(model, GameModel):
        primitive = model.primitive
        params = params if params is not None else model.params
    else:
        primitive = model
    if params is None:
        raise ValueError("params are required when the model does not carry any")
    issues = validate(primitive)
    if issues:
        raise DomainError(
            "model fails validation: " + "; ".join(issues[:5])
            + (f" (+{len(issues) - 5} more)" if len(issues) > 5 else "")
        )

    ids = tuple(sorted(primitive.by_id))
    index = {rid: i for i, rid in enumerate(ids)}
    n = len(ids)
    kinds = tuple(primitive.by_id[rid].kind for rid in ids)
    labels = tuple(primitive.by_id[rid].general_scenario for rid in ids)

    sigma_rows: list[tuple[float, ...]] = []
    for i, a in enumerate(ids):
        row = [0.0] * n
        for j, b in enumerate(ids):
            if i != j:
                row[j] = relevance_index(primitive, params, a, b, dep_mode)
        sigma_rows.append(tuple(row))

    # Pair term used by the utility kernel: sigma when the pair touches a
    # functional requirement, 0 for scenario pairs (those go through
    # effect factors instead).
    fpair_rows: list[tuple[float, ...]] = []
    for i in range(n):
        row = [0.0] * n
        for j in range(n):
            if i != j and (kinds[i] is Kind.FUNCTIONAL or kinds[j] is Kind.FUNCTIONAL):
                row[j] = sigma_rows[i][j]
        fpair_rows.append(tuple(row))

    matrix = primitive.tradeoff
    sign_rows: list[tuple[int, ...] | None] = []
    has_signed = False
    for i in range(n):
        if kinds[i] is not Kind.SCENARIO:
            sign_rows.append(None)
            continue
        row = [0] * n
        for j in range(n):
            if i != j and kinds[j] is Kind.SCENARIO:
                row[j] = matrix.entry(labels[i], labels[j])
                if row[j]:
                    has_signed = True
        sign_rows.append(tuple(row))

    return GameContext(
        primitive=primitive,
        params=params,
        dep_mode=dep_mode,
        ids=ids,
        index=index,
        sigma=tuple(sigma_rows),
        tradeoff_sign=tuple(sign_rows),
        _functional_pair_sigma=tuple(fpair_rows),
        _has_functional=any(k is Kind.FUNCTIONAL for k in kinds),
        _has_signed_pairs=has_signed,
    )


def _utility_of_indices(ctx: GameContext, idx: Sequence[int]) -> float:
    """Canonical evaluation of the coalition with the given member indices.

    Terms: sigma for every pair touching a functional requirement, plus,
    for every ordered scenario pair with a nonzero tradeoff sign, the
    source scenario's coalitional relevance (negated in absolute value
    for a -1 entry). One fsum over all terms keeps the result exact up
    to a single rounding.
    """
    if len(idx) < 2:
        return 0.0
    mask = 0
    for i in idx:
        mask |= 1 << i
    memo = ctx._memo
    cached = memo.get(mask)
    if cached is not None:
        return cached

    terms: list[float] = []
    if ctx._has_functional:
        fpair = ctx._functional_pair_sigma
        for p, a in enumerate(idx):
            row = fpair[a]
            for b in idx[p + 1 :]:
                t = row[b]
                if t:
                    terms.append(t)
    if ctx._has_signed_pairs:
        signs = ctx.tradeoff_sign
        sigma = ctx.sigma
        for a in idx:
            srow = signs[a]
            if srow is None:
                continue
            pos = neg = 0
            for b in idx:
                s = srow[b]
                if s:
                    if s > 0:
                        pos += 1
                    else:
                        neg += 1
            if pos or neg:
                # Diagonal sigma is 0, so summing over all members
                # including a itself equals the sum over the others.
                arow = sigma[a]
                rho = math.fsum([arow[b] for b in idx])
                if pos:
                    terms.extend([rho] * pos)
                if neg:
                    terms.extend([-abs(rho)] * neg)
    value = math.fsum(terms)
    memo[mask] = value
    return value


def coalition_utility(ctx: GameContext, coalition: Iterable[str]) -> float:
    """Sum of pairwise interactions; 0 for empty and singleton coalitions."""
    return _utility_of_indices(ctx, ctx.indices_of(coalition))


def coalitional_relevance(ctx: GameContext, rid: str, coalition: Iterable[str]) -> float:
    """Total relevance from ``rid`` to the rest of its coalition."""
    members = set(coalition)
    if rid not in members:
        raise DomainError(f"{rid!r} is not a member of the coalition")
    i = ctx._require(rid)
    row = ctx.sigma[i]
    return math.fsum([row[ctx._require(b)] for b in members if b != rid])


def effect_factor(ctx: GameContext, r1: str, r2: str, coalition: Iterable[str]) -> float:
    """Effect of scenario ``r1`` towards scenario ``r2`` inside a coalition.

    The tradeoff entry from r1's label to r2's label decides whether
    r1's coalitional relevance counts as-is (+1), not at all (0), or as
    a penalty of its magnitude (-1).
    """
    members = set(coalition)
    for r in (r1, r2):
        if ctx.primitive.by_id.get(r) is None:
            raise DomainError(f"unknown requirement {r!r}")
        if ctx.primitive.by_id[r].kind is not Kind.SCENARIO:
            raise DomainError(f"effect factors are defined between scenarios, not {r!r}")
        if r not in members:
            raise DomainError(f"{r!r} is not a member of the coalition")
    if r1 == r2:
        raise DomainError("effect factors are defined between distinct scenarios")
    sign_row = ctx.tradeoff_sign[ctx._require(r1)]
    assert sign_row is not None
    sign = sign_row[ctx._require(r2)]
    if sign == 0:
        return 0.0
    rho = coalitional_relevance(ctx, r1, members)
    return rho if sign > 0 else -abs(rho)


def pair_interaction(ctx: GameContext, r1: str, r2: str, coalition: Iterable[str]) -> float:
    """Interaction between two coalition members.

    Relevance alone when either requirement is functional (independent
    of the coalition); the two directed effect factors summed when both
    are scenarios.
    """
    if r1 == r2:
        raise DomainError("interaction is defined between distinct requirements")
    members = set(coalition)
    i, j = ctx._require(r1), ctx._require(r2)
    if r1 not in members or r2 not in members:
        raise DomainError("both requirements must belong to the coalition")
    by_id = ctx.primitive.by_id
    if by_id[r1].kind is Kind.FUNCTIONAL or by_id[r2].kind is Kind.FUNCTIONAL:
        return ctx.sigma[i][j]
    return effect_factor(ctx, r1, r2, members) + effect_factor(ctx, r2, r1, members)
