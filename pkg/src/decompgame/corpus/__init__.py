"""Bundled models: small worked fixtures and the cafeteria case study.

Each model is available programmatically (builder functions below) and
as a JSON file under ``data/``; the files are the normative examples of
the model file format and are regenerated by scripts/regen_corpus_files.py.
"""

from __future__ import annotations

from pathlib import Path

from decompgame.model import (
    AttributePrimitive,
    Constraint,
    GameModel,
    GameParams,
    Kind,
    Requirement,
)
from decompgame.reduction import two_solutions_fixture
from decompgame.utility import default_tradeoff_matrix
from decompgame.corpus._cos import cos_model

DATA_DIR = Path(__file__).parent / "data"


def running_example() -> GameModel:
    """Three functions and three scenarios with every relation kind in play.

    The scenario pair q1/q2 shares a general scenario and derives the
    function pair f1/f2; q3 sits apart with f3 and shares only a
    constraint with q1. Known values: sigma(f1,f2)=0.9, sigma(q1,q3)=0.05,
    six 0.4 pairs, everything else at lambda.
    """
    requirements = (
        Requirement(id="f1", kind=Kind.FUNCTIONAL),
        Requirement(id="f2", kind=Kind.FUNCTIONAL),
        Requirement(id="f3", kind=Kind.FUNCTIONAL),
        Requirement(id="q1", kind=Kind.SCENARIO, general_scenario="Testability"),
        Requirement(id="q2", kind=Kind.SCENARIO, general_scenario="Testability"),
        Requirement(id="q3", kind=Kind.SCENARIO, general_scenario="Security"),
    )
    constraints = (
        Constraint(id="c1", members=frozenset({"q1", "q3"})),
        Constraint(id="c2", members=frozenset({"q1"})),
    )
    primitive = AttributePrimitive(
        name="running-example",
        requirements=requirements,
        constraints=constraints,
        depends=frozenset({("f1", "f2")}),
        derives=frozenset(
            {("q1", "f1"), ("q1", "f2"), ("q2", "f1"), ("q2", "f2"), ("q3", "f3")}
        ),
        tradeoff=default_tradeoff_matrix(),
    )
    return GameModel(
        primitive=primitive,
        params=GameParams(alpha=0.5, beta=0.4, gamma=0.1, lam=-0.5, k=4),
    )


def dilemma_fixture() -> GameModel:
    """Four requirements where the greedy choice is between two coalitions.

    Pinned relevances make {d1,d2,d3} worth 0.3 while {d1,d2,d4} is worth
    0.4 only because d4's security scenario punishes the coalition through
    its tradeoff on d1's performance scenario; {d2,d4} alone is worth 0.5.
    """
    requirements = (
        Requirement(id="d1", kind=Kind.SCENARIO, general_scenario="Performance"),
        Requirement(id="d2", kind=Kind.FUNCTIONAL),
        Requirement(id="d3", kind=Kind.FUNCTIONAL),
        Requirement(id="d4", kind=Kind.SCENARIO, general_scenario="Security"),
    )
    primitive = AttributePrimitive(
        name="dilemma",
        requirements=requirements,
        tradeoff=default_tradeoff_matrix(),
        raw_relevance={
            ("d1", "d2"): 0.1,
            ("d1", "d3"): 0.1,
            ("d2", "d3"): 0.1,
            ("d2", "d4"): 0.5,
        },
        # (d1,d4) and (d3,d4) are deliberately left to the structural
        # computation, which finds them irrelevant: sigma = lambda.
    )
    return GameModel(
        primitive=primitive,
        params=GameParams(alpha=0.4, beta=0.3, gamma=0.3, lam=-0.7, k=2),
    )


_BUILDERS = {
    "running-example": running_example,
    "dilemma": dilemma_fixture,
    "two-solutions": two_solutions_fixture,
    "cos": cos_model,
}


def names() -> tuple[str, ...]:
    return tuple(sorted(_BUILDERS))


def get(name: str) -> GameModel:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(
            f"unknown corpus model {name!r}; available: {', '.join(names())}"
        ) from None


def data_path(name: str) -> Path:
    if name not in _BUILDERS:
        raise KeyError(f"unknown corpus model {name!r}; available: {', '.join(names())}")
    return DATA_DIR / f"{name}.json"


__all__ = [
    "DATA_DIR",
    "cos_model",
    "data_path",
    "dilemma_fixture",
    "get",
    "names",
    "running_example",
    "two_solutions_fixture",
]
