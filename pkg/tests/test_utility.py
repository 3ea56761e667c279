"""Coalition utility kernel: relevance terms plus signed effect factors."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings

from conftest import DEFAULT_PARAMS, game_params, primitives
from decompgame.corpus import dilemma_fixture
from decompgame.model import DomainError, GameModel, GameParams, Kind
from decompgame.utility import (
    build_context,
    coalition_utility,
    coalitional_relevance,
    default_tradeoff_matrix,
    effect_factor,
    pair_interaction,
)


class TestDefaultTradeoffMatrix:
    def test_labels(self):
        t = default_tradeoff_matrix()
        assert t.labels == (
            "Performance",
            "Modifiability",
            "Security",
            "Availability",
            "Testability",
            "Usability",
        )

    def test_row_contents(self):
        t = default_tradeoff_matrix()
        rows = {label: row for label, row in zip(t.labels, t.rows)}
        assert rows["Performance"] == (0, -1, 0, 0, 0, -1)
        assert rows["Modifiability"] == (-1, 0, 0, 1, 1, 0)
        assert rows["Security"] == (-1, 0, 0, 1, -1, -1)
        assert rows["Availability"] == (0, 0, 0, 0, 0, 0)
        assert rows["Testability"] == (0, 1, 1, 1, 0, 1)
        assert rows["Usability"] == (-1, 0, 0, 0, -1, 0)


class TestBuildContext:
    def test_from_game_model(self, running_example):
        ctx = build_context(running_example)
        assert ctx.ids == ("f1", "f2", "f3", "q1", "q2", "q3")
        assert ctx.params is running_example.params

    def test_params_override(self, running_example):
        override = GameParams(alpha=0.4, beta=0.3, gamma=0.3, lam=-1.0, k=2)
        ctx = build_context(running_example, params=override)
        assert ctx.params is override

    def test_from_bare_primitive_requires_params(self, running_example):
        with pytest.raises(ValueError):
            build_context(running_example.primitive)
        ctx = build_context(running_example.primitive, DEFAULT_PARAMS)
        assert ctx.params is DEFAULT_PARAMS

    def test_model_without_params_requires_them(self, running_example):
        bare = GameModel(primitive=running_example.primitive, params=None)
        with pytest.raises(ValueError):
            build_context(bare)

    def test_invalid_model_is_rejected(self, running_example):
        p = running_example.primitive
        broken = type(p)(
            name=p.name,
            requirements=p.requirements,
            constraints=p.constraints,
            depends=frozenset({("f1", "ghost")}),
            derives=p.derives,
            tradeoff=p.tradeoff,
            raw_relevance={},
        )
        with pytest.raises(DomainError):
            build_context(broken, DEFAULT_PARAMS)

    def test_sigma_table_is_symmetric(self, running_example):
        ctx = build_context(running_example)
        n = len(ctx.ids)
        for i in range(n):
            assert ctx.sigma[i][i] == 0.0
            for j in range(n):
                assert ctx.sigma[i][j] == ctx.sigma[j][i]

    def test_sigma_of_by_name(self, running_example):
        ctx = build_context(running_example)
        assert ctx.sigma_of("f1", "f2") == pytest.approx(0.9)
        with pytest.raises(DomainError):
            ctx.sigma_of("f1", "ghost")


class TestCoalitionUtility:
    def test_empty_and_singletons(self, running_example):
        ctx = build_context(running_example)
        assert coalition_utility(ctx, []) == 0.0
        for rid in ctx.ids:
            assert coalition_utility(ctx, [rid]) == 0.0

    def test_running_example_values(self, running_example):
        ctx = build_context(running_example)
        assert coalition_utility(ctx, {"q1", "q2", "f1", "f2"}) == 2.5
        assert coalition_utility(ctx, {"q3", "f3"}) == 0.4
        assert coalition_utility(ctx, {"q1", "q3", "f3"}) == -1.0
        assert coalition_utility(ctx, ctx.ids) == pytest.approx(-1.25)

    def test_unknown_member(self, running_example):
        ctx = build_context(running_example)
        with pytest.raises(DomainError):
            coalition_utility(ctx, {"f1", "ghost"})

    def test_duplicate_iteration_is_set_semantics(self, running_example):
        ctx = build_context(running_example)
        assert coalition_utility(ctx, ["f1", "f2", "f1"]) == coalition_utility(
            ctx, {"f1", "f2"}
        )

    @given(primitives(), game_params())
    @settings(max_examples=50)
    def test_order_invariance_and_finiteness(self, primitive, params):
        ctx = build_context(primitive, params)
        members = list(ctx.ids)
        forward = coalition_utility(ctx, members)
        backward = coalition_utility(ctx, list(reversed(members)))
        assert forward == backward
        assert math.isfinite(forward)


class TestCoalitionalRelevance:
    def test_alone_scores_zero(self, running_example):
        ctx = build_context(running_example)
        assert coalitional_relevance(ctx, "q3", {"q3"}) == 0.0

    def test_pair_values(self, running_example):
        ctx = build_context(running_example)
        assert coalitional_relevance(ctx, "q3", {"q3", "f3"}) == pytest.approx(0.4)
        assert coalitional_relevance(ctx, "f3", {"q3", "f3"}) == pytest.approx(0.4)

    def test_sums_the_whole_row(self, running_example):
        ctx = build_context(running_example)
        got = coalitional_relevance(ctx, "q1", ctx.ids)
        expected = math.fsum(
            ctx.sigma_of("q1", other) for other in ctx.ids if other != "q1"
        )
        assert got == expected

    def test_membership_required(self, running_example):
        ctx = build_context(running_example)
        with pytest.raises(DomainError):
            coalitional_relevance(ctx, "q3", {"f1", "f2"})


class TestEffectFactor:
    def test_positive_sign_passes_relevance_through(self, running_example):
        ctx = build_context(running_example)
        coalition = set(ctx.ids)
        rho = coalitional_relevance(ctx, "q1", coalition)
        # Testability promotes Security in the default matrix
        assert effect_factor(ctx, "q1", "q3", coalition) == rho

    def test_negative_sign_penalizes_by_magnitude(self, running_example):
        ctx = build_context(running_example)
        coalition = set(ctx.ids)
        rho = coalitional_relevance(ctx, "q3", coalition)
        assert effect_factor(ctx, "q3", "q1", coalition) == -abs(rho)

    def test_zero_sign_is_inert(self, running_example):
        ctx = build_context(running_example)
        coalition = set(ctx.ids)
        # same general scenario for q1 and q2, diagonal entry is 0
        assert effect_factor(ctx, "q1", "q2", coalition) == 0.0

    def test_scenario_only_and_membership_rules(self, running_example):
        ctx = build_context(running_example)
        with pytest.raises(DomainError):
            effect_factor(ctx, "f1", "q1", set(ctx.ids))
        with pytest.raises(DomainError):
            effect_factor(ctx, "q1", "q3", {"q1", "f1"})
        with pytest.raises(DomainError):
            effect_factor(ctx, "q1", "q1", set(ctx.ids))


class TestPairInteraction:
    def test_functional_pair_is_plain_relevance(self, running_example):
        ctx = build_context(running_example)
        assert pair_interaction(ctx, "f1", "f2", {"f1", "f2"}) == pytest.approx(0.9)

    def test_mixed_pair_is_plain_relevance(self, running_example):
        ctx = build_context(running_example)
        assert pair_interaction(ctx, "q3", "f3", {"q3", "f3"}) == pytest.approx(0.4)

    def test_scenario_pair_sums_both_directions(self, running_example):
        ctx = build_context(running_example)
        coalition = set(ctx.ids)
        expected = effect_factor(ctx, "q1", "q3", coalition) + effect_factor(
            ctx, "q3", "q1", coalition
        )
        assert pair_interaction(ctx, "q1", "q3", coalition) == expected

    def test_symmetric_in_argument_order(self, running_example):
        ctx = build_context(running_example)
        coalition = set(ctx.ids)
        for a in ctx.ids:
            for b in ctx.ids:
                if a != b:
                    assert pair_interaction(ctx, a, b, coalition) == pair_interaction(
                        ctx, b, a, coalition
                    )

    def test_membership_enforced(self, running_example):
        ctx = build_context(running_example)
        with pytest.raises(DomainError):
            pair_interaction(ctx, "f1", "f2", {"f1"})


class TestDilemmaValues:
    def test_pinned_pair_values(self):
        ctx = build_context(dilemma_fixture())
        assert coalition_utility(ctx, {"d2", "d4"}) == 0.5
        assert coalition_utility(ctx, {"d1", "d2"}) == pytest.approx(0.1)

    def test_triple_values(self):
        ctx = build_context(dilemma_fixture())
        assert coalition_utility(ctx, {"d1", "d2", "d3"}) == math.fsum([0.1, 0.1, 0.1])
        assert coalition_utility(ctx, {"d1", "d2", "d4"}) == 0.4

    def test_memoization_is_stable(self):
        ctx = build_context(dilemma_fixture())
        first = coalition_utility(ctx, {"d1", "d2", "d3"})
        second = coalition_utility(ctx, {"d1", "d2", "d3"})
        assert first == second
        # a different coalition with shared members stays independent
        assert coalition_utility(ctx, {"d1", "d2"}) == pytest.approx(0.1)
