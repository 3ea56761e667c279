"""Core data model: requirements, attribute primitives, game parameters.

An attribute primitive bundles the functional requirements and quality
scenarios of one design problem together with the relations that drive
the coalition game: constraints, a dependency order on functional
requirements, a derivation relation from scenarios to functional
requirements, general-scenario labels, and a tradeoff matrix between
those labels.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

PARAM_SUM_TOL = 1e-9

DEP_MODES = ("comparable", "upward")


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class Kind(enum.Enum):
    FUNCTIONAL = "functional"
    SCENARIO = "scenario"


@dataclass(frozen=True)
class Requirement:
    """A single requirement; scenarios carry a general-scenario label."""

    id: str
    kind: Kind
    description: str = ""
    general_scenario: str | None = None


@dataclass(frozen=True)
class Constraint:
    id: str
    members: frozenset[str]


@dataclass(frozen=True)
class TradeoffMatrix:
    """Directed tradeoff between general scenarios: entries in {-1, 0, +1}.

    ``entry(a, b)`` is the effect promoting scenarios labeled ``a`` has on
    scenarios labeled ``b``. The matrix is not required to be symmetric;
    the diagonal is fixed at 0 (a general scenario does not trade off
    against itself).
    """

    labels: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def entry(self, a: str, b: str) -> int:
        try:
            return self.rows[self._index[a]][self._index[b]]
        except KeyError as exc:
            raise DomainError(f"unknown general scenario label {exc.args[0]!r}") from None


@dataclass(frozen=True)
class GameParams:
    """Relevance weights and solver level.

    alpha, beta, gamma weight the derived-set, dependency-set and
    constraint-set overlap; they must be positive and sum to 1.
    lam is the (negative) relevance assigned to structurally unrelated
    pairs. k is the default cohesion level for the bounded solver.
    """

    alpha: float
    beta: float
    gamma: float
    lam: float
    k: int = 3

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")
        if abs((self.alpha + self.beta + self.gamma) - 1.0) > PARAM_SUM_TOL:
            raise ValueError(
                f"alpha+beta+gamma must equal 1 within {PARAM_SUM_TOL}, "
                f"got {self.alpha + self.beta + self.gamma!r}"
            )
        if not (math.isfinite(self.lam) and self.lam < 0):
            raise ValueError(f"lam must be a negative finite number, got {self.lam!r}")
        if not (isinstance(self.k, int) and self.k >= 1):
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class AttributePrimitive:
    """One design problem: requirements plus the relations between them.

    depends holds ordered pairs (a, b) meaning "a depends on b"; the
    relation is taken reflexive-transitively when dependency sets are
    computed, and cycles are tolerated. derives holds (scenario,
    functional) pairs. raw_relevance optionally pins the relevance index
    of specific unordered pairs, bypassing the structural computation.
    """

    name: str
    requirements: tuple[Requirement, ...]
    constraints: tuple[Constraint, ...] = ()
    depends: frozenset[tuple[str, str]] = frozenset()
    derives: frozenset[tuple[str, str]] = frozenset()
    tradeoff: TradeoffMatrix = TradeoffMatrix((), ())
    raw_relevance: Mapping[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        # Canonical storage order makes equality and serialization stable.
        object.__setattr__(
            self, "requirements", tuple(sorted(self.requirements, key=lambda r: r.id))
        )
        object.__setattr__(
            self, "constraints", tuple(sorted(self.constraints, key=lambda c: c.id))
        )
        object.__setattr__(self, "depends", frozenset(self.depends))
        object.__setattr__(self, "derives", frozenset(self.derives))
        object.__setattr__(
            self,
            "raw_relevance",
            {_pair_key(a, b): float(v) for (a, b), v in dict(self.raw_relevance).items()},
        )

    @cached_property
    def by_id(self) -> dict[str, Requirement]:
        return {r.id: r for r in self.requirements}

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.requirements)

    @cached_property
    def functional_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.requirements if r.kind is Kind.FUNCTIONAL)

    @cached_property
    def scenario_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.requirements if r.kind is Kind.SCENARIO)

    @cached_property
    def _constraint_sets(self) -> dict[str, frozenset[str]]:
        return {c.id: c.members for c in self.constraints}

    @cached_property
    def _constraints_by_req(self) -> dict[str, frozenset[str]]:
        acc: dict[str, set[str]] = {rid: set() for rid in self.ids}
        for c in self.constraints:
            for m in c.members:
                if m in acc:
                    acc[m].add(c.id)
        return {rid: frozenset(s) for rid, s in acc.items()}

    @cached_property
    def _derived(self) -> dict[str, frozenset[str]]:
        acc: dict[str, set[str]] = {rid: set() for rid in self.scenario_ids}
        for s, f in self.derives:
            if s in acc:
                acc[s].add(f)
        return {rid: frozenset(v) for rid, v in acc.items()}

    @cached_property
    def _derived_inv(self) -> dict[str, frozenset[str]]:
        acc: dict[str, set[str]] = {rid: set() for rid in self.functional_ids}
        for s, f in self.derives:
            if f in acc:
                acc[f].add(s)
        return {rid: frozenset(v) for rid, v in acc.items()}

    @cached_property
    def _up_closure(self) -> dict[str, frozenset[str]]:
        """Reflexive-transitive closure along depends edges (a -> b)."""
        succ: dict[str, list[str]] = {rid: [] for rid in self.functional_ids}
        for a, b in self.depends:
            if a in succ and b in succ:
                succ[a].append(b)
        out: dict[str, frozenset[str]] = {}
        for rid in self.functional_ids:
            seen = {rid}
            stack = [rid]
            while stack:
                cur = stack.pop()
                for nxt in succ[cur]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            out[rid] = frozenset(seen)
        return out

    @cached_property
    def _down_closure(self) -> dict[str, frozenset[str]]:
        acc: dict[str, set[str]] = {rid: set() for rid in self.functional_ids}
        for rid, ups in self._up_closure.items():
            for u in ups:
                acc[u].add(rid)
        return {rid: frozenset(v) for rid, v in acc.items()}

    @cached_property
    def _scenario_classes(self) -> dict[str, frozenset[str]]:
        by_label: dict[str, set[str]] = {}
        for r in self.requirements:
            if r.kind is Kind.SCENARIO and r.general_scenario is not None:
                by_label.setdefault(r.general_scenario, set()).add(r.id)
        return {
            rid: frozenset(by_label[r.general_scenario])
            for rid, r in self.by_id.items()
            if r.kind is Kind.SCENARIO and r.general_scenario is not None
        }


@dataclass(frozen=True)
class GameModel:
    """An attribute primitive paired with the game parameters to play it.

    params may be None for models that only describe structure; operations
    that need weights require them explicitly.
    """

    primitive: AttributePrimitive
    params: GameParams | None = None


def _require(primitive: AttributePrimitive, rid: str) -> Requirement:
    try:
        return primitive.by_id[rid]
    except KeyError:
        raise DomainError(f"unknown requirement {rid!r}") from None


def dependency_set(
    primitive: AttributePrimitive, rid: str, mode: str = "comparable"
) -> frozenset[str]:
    """Functional requirements ordered relative to ``rid`` by dependency.

    mode "upward" returns everything ``rid`` (reflexive-transitively)
    depends on. mode "comparable" additionally includes everything that
    depends on ``rid``, i.e. all requirements comparable to it in the
    dependency order; this is the default the relevance index uses.
    """
    r = _require(primitive, rid)
    if r.kind is not Kind.FUNCTIONAL:
        raise DomainError(f"dependency_set is defined on functional requirements, not {rid!r}")
    if mode == "comparable":
        return primitive._up_closure[rid] | primitive._down_closure[rid]
    if mode == "upward":
        return primitive._up_closure[rid]
    raise ValueError(f"unknown dependency mode {mode!r}; expected one of {DEP_MODES}")


def general_scenario(primitive: AttributePrimitive, rid: str) -> frozenset[str]:
    """All scenarios sharing ``rid``'s general-scenario label (including it)."""
    r = _require(primitive, rid)
    if r.kind is not Kind.SCENARIO:
        raise DomainError(f"general_scenario is defined on scenarios, not {rid!r}")
    return primitive._scenario_classes.get(rid, frozenset({rid}))


def constraints_of(primitive: AttributePrimitive, rid: str) -> frozenset[str]:
    _require(primitive, rid)
    return primitive._constraints_by_req[rid]


def derived_set(primitive: AttributePrimitive, rid: str) -> frozenset[str]:
    """Functional requirements derived from scenario ``rid``."""
    r = _require(primitive, rid)
    if r.kind is not Kind.SCENARIO:
        raise DomainError(f"derived_set is defined on scenarios, not {rid!r}")
    return primitive._derived[rid]


def derived_from(primitive: AttributePrimitive, rid: str) -> frozenset[str]:
    """Scenarios from which functional requirement ``rid`` is derived."""
    r = _require(primitive, rid)
    if r.kind is not Kind.FUNCTIONAL:
        raise DomainError(f"derived_from is defined on functional requirements, not {rid!r}")
    return primitive._derived_inv[rid]


def validate(primitive: AttributePrimitive) -> list[str]:
    """Collect structural violations; an empty list means the model is sound."""
    issues: list[str] = []
    seen: set[str] = set()
    for r in primitive.requirements:
        if not r.id:
            issues.append("requirement with empty id")
            continue
        if r.id in seen:
            issues.append(f"duplicate requirement id {r.id!r}")
        seen.add(r.id)
        if r.kind is Kind.SCENARIO:
            if r.general_scenario is None:
                issues.append(f"scenario {r.id!r} has no general-scenario label")
            elif r.general_scenario not in primitive.tradeoff.labels:
                issues.append(
                    f"scenario {r.id!r} labeled {r.general_scenario!r},"
                    " which the tradeoff matrix does not know"
                )
        elif r.general_scenario is not None:
            issues.append(f"functional requirement {r.id!r} carries a general-scenario label")

    known = set(primitive.by_id)
    functional = set(primitive.functional_ids)
    scenarios = set(primitive.scenario_ids)

    for a, b in sorted(primitive.depends):
        for end in (a, b):
            if end not in known:
                issues.append(f"depends pair ({a!r}, {b!r}) references unknown {end!r}")
            elif end not in functional:
                issues.append(f"depends pair ({a!r}, {b!r}) references non-functional {end!r}")

    for s, f in sorted(primitive.derives):
        if s not in known:
            issues.append(f"derives pair ({s!r}, {f!r}) references unknown {s!r}")
        elif s not in scenarios:
            issues.append(f"derives pair ({s!r}, {f!r}): {s!r} is not a scenario")
        if f not in known:
            issues.append(f"derives pair ({s!r}, {f!r}) references unknown {f!r}")
        elif f not in functional:
            issues.append(f"derives pair ({s!r}, {f!r}): {f!r} is not functional")

    cseen: set[str] = set()
    for c in primitive.constraints:
        if c.id in cseen:
            issues.append(f"duplicate constraint id {c.id!r}")
        cseen.add(c.id)
        if not c.members:
            issues.append(f"constraint {c.id!r} has no members")
        for m in sorted(c.members):
            if m not in known:
                issues.append(f"constraint {c.id!r} references unknown requirement {m!r}")

    t = primitive.tradeoff
    if len(set(t.labels)) != len(t.labels):
        issues.append("tradeoff matrix has duplicate labels")
    if len(t.rows) != len(t.labels):
        issues.append(
            f"tradeoff matrix has {len(t.rows)} rows for {len(t.labels)} labels"
        )
    else:
        for i, row in enumerate(t.rows):
            if len(row) != len(t.labels):
                issues.append(f"tradeoff row {i} has length {len(row)}")
                continue
            for j, v in enumerate(row):
                if v not in (-1, 0, 1):
                    issues.append(f"tradeoff entry [{i}][{j}] is {v!r}, not in -1/0/+1")
                elif i == j and v != 0:
                    issues.append(f"tradeoff diagonal [{i}][{i}] must be 0, got {v!r}")

    for (a, b), v in sorted(primitive.raw_relevance.items()):
        if a == b:
            issues.append(f"raw relevance pins a pair of {a!r} with itself")
        for end in (a, b):
            if end not in known:
                issues.append(f"raw relevance pair ({a!r}, {b!r}) references unknown {end!r}")
        if not math.isfinite(v):
            issues.append(f"raw relevance for ({a!r}, {b!r}) is not finite")

    return issues


def validate_decomposition(
    primitive: AttributePrimitive, coalitions: Iterable[frozenset[str]]
) -> list[str]:
    """Check that coalitions are non-empty, disjoint, and partition R."""
    issues: list[str] = []
    union: set[str] = set()
    for i, coal in enumerate(coalitions):
        if not coal:
            issues.append(f"coalition {i} is empty")
        overlap = union & coal
        if overlap:
            issues.append(
                f"coalition {i} overlaps earlier coalitions on {sorted(overlap)}"
            )
        unknown = coal - set(primitive.by_id)
        if unknown:
            issues.append(f"coalition {i} references unknown requirements {sorted(unknown)}")
        union |= coal
    missing = set(primitive.by_id) - union
    if missing:
        issues.append(f"decomposition does not cover {sorted(missing)}")
    return issues
