"""Oracle generators built on graph cliques.

`clique_to_game` embeds an undirected graph into a game whose cohesive
coalitions correspond exactly to cliques: each graph node becomes a row
of n scenarios (a meta-node), each graph edge is realized by one
distinguished scenario pair with a mutually positive tradeoff, and
scenarios of non-adjacent rows repel each other both through a pinned
negative relevance and a mutually negative tradeoff. A clique's
meta-coalition then scores l*(l-1)*gamma/2 for clique size l, which an
independent clique finder can predict, giving the solvers an exactly
checkable oracle.

`two_solutions_fixture` is a small functional-only game with two
distinct verifiable solutions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from decompgame.model import (
    AttributePrimitive,
    Constraint,
    DomainError,
    GameModel,
    GameParams,
    Kind,
    Requirement,
    TradeoffMatrix,
)


@dataclass(frozen=True)
class Graph:
    """Undirected graph on nodes 1..n; edges stored as (low, high) pairs."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"graph needs at least one node, got n={self.n}")
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise DomainError(f"self-loop on node {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise DomainError(f"edge ({u}, {v}) leaves the node range 1..{self.n}")
            normalized.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(normalized))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse "u v" lines into a Graph; blank lines and #-comments allowed.

    Node count defaults to the largest endpoint; pass n to include
    isolated trailing nodes.
    """
    edges: set[tuple[int, int]] = set()
    seen_max = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DomainError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise DomainError(f"line {lineno}: endpoints must be integers, got {raw!r}") from None
        edges.add((u, v))
        seen_max = max(seen_max, u, v)
    if n is None:
        n = seen_max if seen_max else 1
    return Graph(n=n, edges=frozenset(edges))


def _scenario_id(i: int, j: int) -> str:
    return f"a{i}_{j}"


def clique_to_game(h: Graph, gamma: float, lam: float, k: int = 3) -> GameModel:
    """Embed a graph into a game whose cohesive coalitions are its cliques.

    Requires 0 < gamma < 1 and lam < -gamma, which makes any coalition
    mixing non-adjacent rows strictly improvable by shrinking. The
    distinguished edge pairs are assigned deterministically: edges are
    taken in sorted order and each endpoint uses its next free scenario
    slot, so no scenario serves two edges.
    """
    if not 0 < gamma < 1:
        raise DomainError(f"gamma must lie strictly between 0 and 1, got {gamma!r}")
    if not lam < -gamma:
        raise DomainError(f"lam must be below -gamma ({-gamma!r}), got {lam!r}")
    n = h.n

    requirements = []
    labels = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            rid = _scenario_id(i, j)
            requirements.append(
                Requirement(
                    id=rid,
                    kind=Kind.SCENARIO,
                    description=f"slot {j} of meta-node {i}",
                    general_scenario=f"g_{rid}",
                )
            )
            labels.append((i, j))

    # One distinguished scenario pair per graph edge, one slot per use.
    next_slot = {i: 1 for i in range(1, n + 1)}
    edge_pairs: set[frozenset[tuple[int, int]]] = set()
    for u, v in sorted(h.edges):
        su, sv = next_slot[u], next_slot[v]
        next_slot[u] += 1
        next_slot[v] += 1
        edge_pairs.add(frozenset(((u, su), (v, sv))))

    def sign(a: tuple[int, int], b: tuple[int, int]) -> int:
        if a[0] == b[0]:
            return 0
        if frozenset((a, b)) in edge_pairs:
            return 1
        if not h.adjacent(a[0], b[0]):
            return -1
        return 0

    label_names = tuple(f"g_{_scenario_id(i, j)}" for i, j in labels)
    rows = tuple(
        tuple(sign(a, b) if a != b else 0 for b in labels) for a in labels
    )

    constraints = []
    for i in range(1, n + 1):
        for j, j2 in itertools.combinations(range(1, n + 1), 2):
            constraints.append(
                Constraint(
                    id=f"c{i}_{j}_{j2}",
                    members=frozenset({_scenario_id(i, j), _scenario_id(i, j2)}),
                )
            )

    # Pin every pairwise relevance: row-mates share constraints at a
    # fixed rate, scenarios of adjacent rows are neutral, scenarios of
    # non-adjacent rows repel at lam.
    raw: dict[tuple[str, str], float] = {}
    within = gamma / (2 * (n - 1)) if n > 1 else 0.0
    for a, b in itertools.combinations(labels, 2):
        key = (_scenario_id(*a), _scenario_id(*b))
        if a[0] == b[0]:
            raw[key] = within
        elif h.adjacent(a[0], b[0]):
            raw[key] = 0.0
        else:
            raw[key] = lam

    primitive = AttributePrimitive(
        name=f"clique-game-n{n}-m{len(h.edges)}",
        requirements=tuple(requirements),
        constraints=tuple(constraints),
        tradeoff=TradeoffMatrix(labels=label_names, rows=rows),
        raw_relevance=raw,
    )
    alpha = (1.0 - gamma) / 2
    params = GameParams(alpha=alpha, beta=alpha, gamma=gamma, lam=lam, k=k)
    return GameModel(primitive=primitive, params=params)


def meta_clique_coalition(
    model: GameModel | AttributePrimitive, node_set: set[int] | frozenset[int]
) -> frozenset[str]:
    """All scenarios of the given graph nodes' rows."""
    primitive = model.primitive if isinstance(model, GameModel) else model
    known = set(primitive.by_id)
    out: set[str] = set()
    n = int(len(primitive.requirements) ** 0.5 + 0.5)
    for i in node_set:
        row = {_scenario_id(i, j) for j in range(1, n + 1)}
        if not row <= known:
            raise DomainError(f"node {i} is outside the game's node range")
        out |= row
    return frozenset(out)


def max_clique(h: Graph) -> frozenset[int]:
    """Largest clique by exhaustive enumeration; lexicographically least among ties."""
    for size in range(h.n, 0, -1):
        for combo in itertools.combinations(range(1, h.n + 1), size):
            if all(h.adjacent(u, v) for u, v in itertools.combinations(combo, 2)):
                return frozenset(combo)
    raise DomainError("graph has no nodes")


def clique_partition(h: Graph) -> list[frozenset[int]]:
    """Greedy partition of the nodes: repeatedly remove a maximum clique."""
    remaining = set(range(1, h.n + 1))
    out: list[frozenset[int]] = []
    while remaining:
        sub_edges = frozenset(
            (u, v) for u, v in h.edges if u in remaining and v in remaining
        )
        nodes = sorted(remaining)
        best: tuple[int, ...] | None = None
        for size in range(len(nodes), 0, -1):
            for combo in itertools.combinations(nodes, size):
                if all((min(u, v), max(u, v)) in sub_edges for u, v in itertools.combinations(combo, 2)):
                    best = combo
                    break
            if best:
                break
        assert best is not None
        out.append(frozenset(best))
        remaining -= set(best)
    return out


def two_solutions_fixture() -> GameModel:
    """Six functional requirements whose game has two distinct solutions.

    Pairwise utilities are pinned directly: 0.1 inside {d1..d4} and
    inside {d4,d5,d6}, -0.1 between {d1,d2,d3} and {d5,d6}. Both the
    3+3 split and the 4+2 split verify as solutions.
    """
    ids = [f"d{i}" for i in range(1, 7)]
    requirements = tuple(
        Requirement(id=rid, kind=Kind.FUNCTIONAL, description=f"player {rid}")
        for rid in ids
    )
    raw: dict[tuple[str, str], float] = {}
    group_a = {1, 2, 3, 4}
    group_b = {4, 5, 6}
    for i, j in itertools.combinations(range(1, 7), 2):
        if {i, j} <= group_a or {i, j} <= group_b:
            raw[(f"d{i}", f"d{j}")] = 0.1
        else:
            raw[(f"d{i}", f"d{j}")] = -0.1
    primitive = AttributePrimitive(
        name="two-solutions",
        requirements=requirements,
        tradeoff=TradeoffMatrix((), ()),
        raw_relevance=raw,
    )
    return GameModel(
        primitive=primitive,
        params=GameParams(alpha=0.5, beta=0.4, gamma=0.1, lam=-0.1, k=3),
    )


def two_solutions_decompositions() -> tuple[
    tuple[frozenset[str], ...], tuple[frozenset[str], ...]
]:
    """The two distinct solutions the fixture is named for."""
    split_33 = (
        frozenset({"d1", "d2", "d3"}),
        frozenset({"d4", "d5", "d6"}),
    )
    split_42 = (
        frozenset({"d1", "d2", "d3", "d4"}),
        frozenset({"d5", "d6"}),
    )
    return split_33, split_42
