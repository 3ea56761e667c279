"""Solvers and verifiers for the decomposition game.

Two routes to a solution: exact peeling (enumerate every subset of the
remaining pool, extract a minimal coalition of maximal utility, repeat)
and the bounded variant (enumerate only subsets of size at most k, peel
greedily, then merge pairs while a union strictly beats both parts).
Both are deterministic: subsets are scanned in ascending size and
lexicographic member order, and a running best is replaced only on a
strict utility improvement, which makes the winner minimal and
lexicographically least among maximal-utility subsets.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from decompgame.model import DomainError, validate_decomposition
from decompgame.utility import GameContext, _utility_of_indices

EXACT_CAP = 20


class CapExceededError(RuntimeError):
    """Brute-force enumeration refused: the instance exceeds the cap."""


@dataclass(frozen=True)
class SolveStats:
    subsets_enumerated: int
    merges_performed: int
    utility_trajectory: tuple[float, ...]
    wall_time_s: float


@dataclass(frozen=True)
class SolveReport:
    """A computed decomposition with per-coalition utilities.

    Coalitions are ordered by utility descending (ties by member list)
    so reports read like a payoff table.
    """

    coalitions: tuple[frozenset[str], ...]
    utilities: tuple[float, ...]
    mode: str
    k: int | None
    stats: SolveStats


@dataclass(frozen=True)
class VerifyResult:
    passed: bool
    mode: str
    k: int | None
    structural_issues: tuple[str, ...]
    cohesion_failures: tuple[tuple[int, frozenset[str]], ...]
    expansion_witness: tuple[int, int] | None
    utilities: tuple[float, ...]


def _ids_of(ctx: GameContext, idx: Iterable[int]) -> frozenset[str]:
    return frozenset(ctx.ids[i] for i in idx)


def _sorted_report(
    ctx: GameContext,
    coalitions: Sequence[tuple[int, ...]],
    mode: str,
    k: int | None,
    stats: SolveStats,
) -> SolveReport:
    scored = [
        (_utility_of_indices(ctx, idx), tuple(ctx.ids[i] for i in idx)) for idx in coalitions
    ]
    scored.sort(key=lambda uc: (-uc[0], uc[1]))
    return SolveReport(
        coalitions=tuple(frozenset(members) for _, members in scored),
        utilities=tuple(u for u, _ in scored),
        mode=mode,
        k=k,
        stats=stats,
    )


def _best_subset(
    ctx: GameContext, pool: Sequence[int], max_size: int
) -> tuple[tuple[int, ...], float, int]:
    """Minimal, lexicographically least subset of maximal utility.

    Scans sizes ascending and combinations in lexicographic order over
    the sorted pool, replacing the incumbent only on a strictly greater
    utility. Equal-utility subsets therefore lose to the earliest
    (smallest, lexicographically first) one, which is exactly the
    tie-break the peeling construction needs.
    """
    best_idx: tuple[int, ...] | None = None
    best_u = -math.inf
    enumerated = 0
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(pool, size):
            enumerated += 1
            u = _utility_of_indices(ctx, combo)
            if u > best_u:
                best_u = u
                best_idx = combo
    if best_idx is None:
        raise DomainError("cannot select a coalition from an empty pool")
    return best_idx, best_u, enumerated


def is_cohesive(
    ctx: GameContext, coalition: Iterable[str], cap: int = EXACT_CAP
) -> tuple[bool, frozenset[str] | None]:
    """Whether every proper non-empty subset has strictly lower utility.

    On failure the witness is a maximal-utility violating subset
    (smallest, lexicographically least among equals). Refuses above the
    brute-force cap.
    """
    idx = ctx.indices_of(coalition)
    if len(idx) > cap:
        raise CapExceededError(
            f"cohesion check enumerates all subsets and refuses above {cap} members"
            f" (coalition has {len(idx)})"
        )
    u = _utility_of_indices(ctx, idx)
    witness: tuple[int, ...] | None = None
    witness_u = -math.inf
    for size in range(1, len(idx)):
        for combo in itertools.combinations(idx, size):
            cu = _utility_of_indices(ctx, combo)
            if cu >= u and cu > witness_u:
                witness = combo
                witness_u = cu
    if witness is None:
        return True, None
    return False, _ids_of(ctx, witness)


def is_k_cohesive(
    ctx: GameContext, coalition: Iterable[str], k: int
) -> tuple[bool, frozenset[str] | None]:
    """Cohesion checked only against proper subsets of size at most k."""
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    idx = ctx.indices_of(coalition)
    u = _utility_of_indices(ctx, idx)
    witness: tuple[int, ...] | None = None
    witness_u = -math.inf
    for size in range(1, min(k, len(idx) - 1) + 1):
        for combo in itertools.combinations(idx, size):
            cu = _utility_of_indices(ctx, combo)
            if cu >= u and cu > witness_u:
                witness = combo
                witness_u = cu
    if witness is None:
        return True, None
    return False, _ids_of(ctx, witness)


def is_expansion_free(
    ctx: GameContext, coalitions: Sequence[Iterable[str]]
) -> tuple[bool, tuple[int, int] | None]:
    """No pair of coalitions merges into a union beating both parts."""
    idxs = [ctx.indices_of(c) for c in coalitions]
    utils = [_utility_of_indices(ctx, idx) for idx in idxs]
    for i in range(len(idxs)):
        for j in range(i + 1, len(idxs)):
            union = tuple(sorted(set(idxs[i]) | set(idxs[j])))
            if _utility_of_indices(ctx, union) > max(utils[i], utils[j]):
                return False, (i, j)
    return True, None


def verify_solution(
    ctx: GameContext,
    coalitions: Sequence[Iterable[str]],
    k: int | None = None,
    cap: int = EXACT_CAP,
) -> VerifyResult:
    """Full check: valid decomposition, cohesion (exact or k), expansion-freedom."""
    coals = [frozenset(c) for c in coalitions]
    issues = validate_decomposition(ctx.primitive, coals)
    cohesion_failures: list[tuple[int, frozenset[str]]] = []
    expansion_witness: tuple[int, int] | None = None
    utilities: tuple[float, ...] = ()
    if not issues:
        utilities = tuple(_utility_of_indices(ctx, ctx.indices_of(c)) for c in coals)
        for i, coal in enumerate(coals):
            if k is None:
                ok, witness = is_cohesive(ctx, coal, cap=cap)
            else:
                ok, witness = is_k_cohesive(ctx, coal, k)
            if not ok:
                assert witness is not None
                cohesion_failures.append((i, witness))
        _, expansion_witness = is_expansion_free(ctx, coals)
    passed = not issues and not cohesion_failures and expansion_witness is None
    return VerifyResult(
        passed=passed,
        mode="exact" if k is None else "k-cohesive",
        k=k,
        structural_issues=tuple(issues),
        cohesion_failures=tuple(cohesion_failures),
        expansion_witness=expansion_witness,
        utilities=utilities,
    )


def solve_exact(ctx: GameContext, cap: int = EXACT_CAP) -> SolveReport:
    """Peel minimal maximal-utility coalitions until the pool is empty.

    The strict-replacement scan makes each peeled coalition cohesive
    (any equally good proper subset would have been kept instead) and
    the whole result expansion-free (a union beating an earlier
    coalition would have been peeled then).
    """
    n = len(ctx.ids)
    if n > cap:
        raise CapExceededError(
            f"exact solving enumerates all subsets and refuses above {cap} requirements"
            f" (model has {n})"
        )
    start = time.perf_counter()
    pool = list(range(n))
    peeled: list[tuple[int, ...]] = []
    enumerated = 0
    while pool:
        best, _, count = _best_subset(ctx, pool, len(pool))
        enumerated += count
        peeled.append(best)
        chosen = set(best)
        pool = [i for i in pool if i not in chosen]
    utilities_sum = math.fsum(_utility_of_indices(ctx, idx) for idx in peeled)
    stats = SolveStats(
        subsets_enumerated=enumerated,
        merges_performed=0,
        utility_trajectory=(utilities_sum,),
        wall_time_s=time.perf_counter() - start,
    )
    return _sorted_report(ctx, peeled, "exact", None, stats)


def max_k_cohesive(ctx: GameContext, pool: Iterable[str], k: int) -> frozenset[str]:
    """Best coalition of size at most k within a pool of requirements.

    Maximal utility, ties broken towards smaller then lexicographically
    earlier coalitions; the minimality tie-break makes the winner
    k-cohesive by construction.
    """
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    pool_idx = ctx.indices_of(pool)
    if not pool_idx:
        raise DomainError("cannot select a coalition from an empty pool")
    best, _, _ = _best_subset(ctx, pool_idx, min(k, len(pool_idx)))
    return _ids_of(ctx, best)


def _peel_k(ctx: GameContext, k: int) -> tuple[list[tuple[int, ...]], int]:
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    pool = list(range(len(ctx.ids)))
    out: list[tuple[int, ...]] = []
    enumerated = 0
    while pool:
        best, _, count = _best_subset(ctx, pool, min(k, len(pool)))
        enumerated += count
        out.append(best)
        chosen = set(best)
        pool = [i for i in pool if i not in chosen]
    return out, enumerated


def cohesive_decomposition(ctx: GameContext, k: int) -> list[frozenset[str]]:
    """Greedy peeling with subsets bounded by k, until the pool is empty."""
    peeled, _ = _peel_k(ctx, k)
    return [_ids_of(ctx, idx) for idx in peeled]


def solve_k(ctx: GameContext, k: int) -> SolveReport:
    """Bounded solving: greedy peel, then merge unions that beat both parts.

    The scan over coalition pairs is in list order and restarts after
    every merge (the merged coalition keeps the earlier slot), so runs
    are reproducible. Each merge strictly raises the maximum utility
    along the chain, keeping every coalition k-cohesive; the fixpoint is
    expansion-free by definition.
    """
    start = time.perf_counter()
    peeled, enumerated = _peel_k(ctx, k)
    coals = [list(idx) for idx in peeled]
    utils = [_utility_of_indices(ctx, tuple(c)) for c in coals]
    trajectory = [math.fsum(utils)]
    merges = 0
    merged = True
    while merged:
        merged = False
        for i in range(len(coals)):
            for j in range(i + 1, len(coals)):
                union = tuple(sorted(set(coals[i]) | set(coals[j])))
                u = _utility_of_indices(ctx, union)
                if u > utils[i] and u > utils[j]:
                    coals[i] = list(union)
                    utils[i] = u
                    del coals[j], utils[j]
                    merges += 1
                    trajectory.append(math.fsum(utils))
                    merged = True
                    break
            if merged:
                break
    stats = SolveStats(
        subsets_enumerated=enumerated,
        merges_performed=merges,
        utility_trajectory=tuple(trajectory),
        wall_time_s=time.perf_counter() - start,
    )
    return _sorted_report(ctx, [tuple(c) for c in coals], "k-cohesive", k, stats)
