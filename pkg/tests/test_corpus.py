"""Bundled corpus: builders, shipped data files, and their agreement."""

from __future__ import annotations

import pytest

from decompgame import corpus
from decompgame.io import load_model, save_model
from decompgame.model import Kind, validate
from decompgame.solver import solve_exact, verify_solution
from decompgame.utility import build_context


class TestRegistry:
    def test_names(self):
        assert corpus.names() == ("cos", "dilemma", "running-example", "two-solutions")

    def test_get_unknown_lists_available(self):
        with pytest.raises(KeyError) as err:
            corpus.get("nope")
        assert "running-example" in str(err.value)

    def test_data_files_exist_and_match_builders(self):
        for name in corpus.names():
            built = corpus.get(name)
            shipped = load_model(corpus.data_path(name))
            assert shipped == built, name

    def test_every_model_validates(self):
        for name in corpus.names():
            assert validate(corpus.get(name).primitive) == [], name

    def test_round_trip_every_model(self):
        for name in corpus.names():
            model = corpus.get(name)
            assert load_model(save_model(model)) == model, name


class TestRunningExample:
    def test_shape(self, running_example):
        p = running_example.primitive
        assert p.functional_ids == ("f1", "f2", "f3")
        assert p.scenario_ids == ("q1", "q2", "q3")
        assert p.by_id["q1"].general_scenario == "Testability"
        assert p.by_id["q2"].general_scenario == "Testability"
        assert p.by_id["q3"].general_scenario == "Security"
        assert p.depends == {("f1", "f2")}
        assert p.derives == {
            ("q1", "f1"),
            ("q1", "f2"),
            ("q2", "f1"),
            ("q2", "f2"),
            ("q3", "f3"),
        }
        assert {c.id: c.members for c in p.constraints} == {
            "c1": {"q1", "q3"},
            "c2": {"q1"},
        }

    def test_params(self, running_example):
        params = running_example.params
        assert (params.alpha, params.beta, params.gamma) == (0.5, 0.4, 0.1)
        assert params.lam == -0.5
        assert params.k == 4

    def test_solves_to_the_expected_split(self, running_example):
        ctx = build_context(running_example)
        report = solve_exact(ctx)
        assert report.coalitions == (
            frozenset({"f1", "f2", "q1", "q2"}),
            frozenset({"f3", "q3"}),
        )


class TestDilemma:
    def test_shape(self, dilemma):
        p = dilemma.primitive
        assert p.ids == ("d1", "d2", "d3", "d4")
        assert p.by_id["d1"].kind is Kind.SCENARIO
        assert p.by_id["d1"].general_scenario == "Performance"
        assert p.by_id["d2"].kind is Kind.FUNCTIONAL
        assert p.by_id["d3"].kind is Kind.FUNCTIONAL
        assert p.by_id["d4"].kind is Kind.SCENARIO
        assert p.by_id["d4"].general_scenario == "Security"

    def test_pinned_relevance(self, dilemma):
        assert dilemma.primitive.raw_relevance == {
            ("d1", "d2"): 0.1,
            ("d1", "d3"): 0.1,
            ("d2", "d3"): 0.1,
            ("d2", "d4"): 0.5,
        }

    def test_params(self, dilemma):
        params = dilemma.params
        assert (params.alpha, params.beta, params.gamma) == (0.4, 0.3, 0.3)
        assert params.lam == -0.7
        assert params.k == 2

    def test_unpinned_pairs_fall_back_to_lambda(self, dilemma):
        ctx = build_context(dilemma)
        assert ctx.sigma_of("d1", "d4") == -0.7
        assert ctx.sigma_of("d3", "d4") == -0.7


class TestTwoSolutions:
    def test_listed_and_verifiable(self):
        model = corpus.get("two-solutions")
        assert len(model.primitive.requirements) == 6
        ctx = build_context(model)
        report = solve_exact(ctx)
        assert verify_solution(ctx, report.coalitions).passed


class TestCos:
    def test_scale(self):
        p = corpus.get("cos").primitive
        assert len(p.functional_ids) == 49
        assert len(p.scenario_ids) == 11
        assert len(p.constraints) == 7
        assert len(p.depends) == 39
        assert len(p.derives) == 4

    def test_tree_edges_follow_dotted_ids(self):
        p = corpus.get("cos").primitive
        assert ("Order.Place.Register", "Order.Place") in p.depends
        assert ("Order.Deliver.Times", "Order.Deliver") in p.depends
        # dotless ids never point at themselves
        assert all(a != b for a, b in p.depends)

    def test_cross_dependencies_present(self):
        p = corpus.get("cos").primitive
        assert ("Order.Pay.Deduct", "SI2.1") in p.depends
        assert ("Order.Retrieve", "Order.Place") in p.depends

    def test_scenario_labels(self):
        p = corpus.get("cos").primitive
        labels = {rid: p.by_id[rid].general_scenario for rid in p.scenario_ids}
        assert labels["USE1"] == "Usability"
        assert labels["PER1"] == "Performance"
        assert labels["SEC1"] == "Security"
        assert labels["AVL1"] == "Availability"
        assert labels["ROB1"] == "Availability"
        assert labels["SAF1"] == "Usability"

    def test_constraint_membership(self):
        p = corpus.get("cos").primitive
        members = {c.id: c.members for c in p.constraints}
        assert members["BR-33"] == {"SEC1", "Order.Pay.Deduct"}
        assert members["CO-3"] == {"UI2", "UI3", "PER2"}

    def test_params(self):
        params = corpus.get("cos").params
        assert (params.alpha, params.beta, params.gamma) == (0.4, 0.3, 0.3)
        assert params.lam == -1.3
        assert params.k == 3
