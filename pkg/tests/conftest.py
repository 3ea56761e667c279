"""Shared fixtures, the random model generator, and hypothesis strategies."""

from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from decompgame import corpus
from decompgame.model import (
    AttributePrimitive,
    Constraint,
    GameParams,
    Kind,
    Requirement,
    validate,
)
from decompgame.utility import default_tradeoff_matrix

DEFAULT_PARAMS = GameParams(alpha=0.4, beta=0.3, gamma=0.3, lam=-0.5, k=3)


def random_primitive(
    rng: random.Random,
    max_requirements: int = 10,
    allow_raw: bool = True,
) -> AttributePrimitive:
    """A random, always-valid attribute primitive.

    Shape varies: requirement split, dependency density, derives edges,
    constraints, and (optionally) a few pinned relevance values. Only the
    default tradeoff matrix is used, so scenario labels always resolve.
    """
    tradeoff = default_tradeoff_matrix()
    total = rng.randint(1, max_requirements)
    n_scenarios = rng.randint(0, total)
    functionals = [
        Requirement(id=f"f{i}", kind=Kind.FUNCTIONAL) for i in range(total - n_scenarios)
    ]
    scenarios = [
        Requirement(
            id=f"s{i}", kind=Kind.SCENARIO, general_scenario=rng.choice(tradeoff.labels)
        )
        for i in range(n_scenarios)
    ]
    fids = [r.id for r in functionals]
    sids = [r.id for r in scenarios]
    ids = fids + sids

    depends = set()
    dep_p = rng.uniform(0.0, 0.5)
    for i, a in enumerate(fids):
        for b in fids[i + 1 :]:
            if rng.random() < dep_p:
                depends.add((a, b) if rng.random() < 0.5 else (b, a))

    derives = set()
    for s in sids:
        for f in fids:
            if rng.random() < 0.35:
                derives.add((s, f))

    constraints = []
    for ci in range(rng.randint(0, 3)):
        size = rng.randint(1, min(4, len(ids)))
        members = frozenset(rng.sample(ids, size))
        constraints.append(Constraint(id=f"c{ci}", members=members))

    raw: dict[tuple[str, str], float] = {}
    if allow_raw and len(ids) >= 2 and rng.random() < 0.25:
        for _ in range(rng.randint(1, 2)):
            a, b = rng.sample(ids, 2)
            raw[(a, b)] = round(rng.uniform(-1.0, 1.0), 3)

    primitive = AttributePrimitive(
        name="random",
        requirements=tuple(functionals + scenarios),
        constraints=tuple(constraints),
        depends=frozenset(depends),
        derives=frozenset(derives),
        tradeoff=tradeoff,
        raw_relevance=raw,
    )
    issues = validate(primitive)
    assert not issues, issues
    return primitive


@st.composite
def primitives(draw, max_requirements: int = 8) -> AttributePrimitive:
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    size = draw(st.integers(min_value=1, max_value=max_requirements))
    return random_primitive(random.Random(seed), max_requirements=size)


@st.composite
def game_params(draw) -> GameParams:
    # alpha, beta, gamma must each stay strictly positive and sum to 1
    alpha = draw(st.floats(min_value=0.05, max_value=0.8, allow_nan=False))
    beta = draw(st.floats(min_value=0.05, max_value=1.0 - alpha - 0.1, allow_nan=False))
    gamma = 1.0 - alpha - beta
    lam = draw(st.floats(min_value=-10.0, max_value=-0.01, allow_nan=False))
    k = draw(st.integers(min_value=1, max_value=5))
    return GameParams(alpha=alpha, beta=beta, gamma=gamma, lam=lam, k=k)


@pytest.fixture
def running_example():
    return corpus.running_example()


@pytest.fixture
def dilemma():
    return corpus.dilemma_fixture()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows: list[tuple[str, str]] = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in rep.nodeid and rep.when == "call":
                name = rep.nodeid.split("::")[-1]
                rows.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if rows:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(rows):
            terminalreporter.write_line(f"{status}  {name}")
