"""End-to-end tests for the command line interface.

Every test drives ``main(argv)`` in process and asserts on exit codes
and captured output, so the suite stays free of subprocess overhead.
Exit code contract: 0 success, 1 negative verdict, 2 input error.
"""

from __future__ import annotations

import json

import pytest

from decompgame.cli import main
from decompgame.io import load_model, save_model
from decompgame import corpus


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- validate ----------------------------------------------------------------


def test_validate_ok_on_corpus_model(capsys):
    code, out, err = run_cli(capsys, "validate", "corpus:running-example")
    assert code == 0
    assert out.startswith("ok: running-example: 6 requirements, 2 constraints")
    assert err == ""


def test_validate_reports_violations_with_exit_1(capsys, tmp_path):
    doc = {
        "name": "broken",
        "functional": ["f1"],
        "scenario": [],
        "constraints": [{"id": "c1", "members": ["f1", "ghost"]}],
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, out, err = run_cli(capsys, "validate", str(path))
    assert code == 1
    assert "violation:" in out
    assert "ghost" in out


def test_validate_missing_file_is_an_input_error(capsys, tmp_path):
    code, out, err = run_cli(capsys, "validate", str(tmp_path / "nope.json"))
    assert code == 2
    assert err.startswith("error:")


def test_validate_unknown_corpus_name_is_an_input_error(capsys):
    code, out, err = run_cli(capsys, "validate", "corpus:wat")
    assert code == 2
    assert "wat" in err


# -- relevance ---------------------------------------------------------------


def test_relevance_prints_all_pairs_by_default(capsys):
    code, out, err = run_cli(capsys, "relevance", "corpus:dilemma")
    assert code == 0
    lines = out.strip().splitlines()
    # 4 requirements -> C(4,2) unordered pairs
    assert len(lines) == 6
    for line in lines:
        a, b, value = line.split("\t")
        assert a < b
        float(value)


def test_relevance_pairs_flag_restricts_output(capsys):
    code, out, err = run_cli(capsys, "relevance", "corpus:dilemma",
                             "--pairs", "d2,d4", "d1,d3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "d2\td4\t0.5"
    assert lines[1] == "d1\td3\t0.1"


def test_relevance_malformed_pair_spec_is_an_input_error(capsys):
    code, out, err = run_cli(capsys, "relevance", "corpus:dilemma",
                             "--pairs", "d2d4")
    assert code == 2
    assert err.startswith("error:")


def test_relevance_unknown_requirement_is_an_input_error(capsys):
    code, out, err = run_cli(capsys, "relevance", "corpus:dilemma",
                             "--pairs", "d2,zz")
    assert code == 2
    assert "zz" in err


# -- solve -------------------------------------------------------------------


def test_solve_prints_payoff_table(capsys):
    code, out, err = run_cli(capsys, "solve", "corpus:running-example", "--k", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["#", "payoff", "size", "members"]
    assert "f1, f2, q1, q2" in out
    assert "f3, q3" in out
    # payoffs are ordered, largest first
    assert out.index("2.5") < out.index("0.4")


def test_solve_stats_block_is_opt_in(capsys):
    code, plain, _ = run_cli(capsys, "solve", "corpus:dilemma")
    assert code == 0
    assert "mode:" not in plain

    code, out, _ = run_cli(capsys, "solve", "corpus:dilemma", "--stats")
    assert code == 0
    assert "mode: k-cohesive (k=2)" in out
    assert "subsets enumerated:" in out
    assert "merges performed:" in out
    assert "utility trajectory:" in out
    assert "wall time:" in out


def test_solve_out_writes_report_without_stats(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, _, _ = run_cli(capsys, "solve", "corpus:running-example",
                         "--exact", "--out", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text(encoding="utf-8"))
    assert doc["coalitions"] == [["f1", "f2", "q1", "q2"], ["f3", "q3"]]
    assert doc["utilities"] == [2.5, 0.4]
    assert "stats" not in doc


def test_solve_out_with_stats_includes_them(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, _, _ = run_cli(capsys, "solve", "corpus:dilemma",
                         "--stats", "--out", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text(encoding="utf-8"))
    assert "stats" in doc
    assert doc["stats"]["merges_performed"] >= 0


def test_solve_exact_refuses_models_over_the_cap(capsys):
    code, out, err = run_cli(capsys, "solve", "corpus:running-example",
                             "--exact", "--cap", "3")
    assert code == 2
    assert err.startswith("refused:")


def test_solve_model_without_params_is_an_input_error(capsys, tmp_path):
    model = corpus.get("dilemma")
    doc = json.loads(save_model(model))
    del doc["params"]
    path = tmp_path / "bare.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, out, err = run_cli(capsys, "solve", str(path))
    assert code == 2
    assert "parameters" in err


# -- verify ------------------------------------------------------------------


def write_decomposition(tmp_path, coalitions, name="decomp.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"coalitions": coalitions}), encoding="utf-8")
    return str(path)


def test_verify_accepts_the_known_solution(capsys, tmp_path):
    path = write_decomposition(
        tmp_path, [["f1", "f2", "q1", "q2"], ["f3", "q3"]])
    code, out, err = run_cli(capsys, "verify", "corpus:running-example", path)
    assert code == 0
    assert out.startswith("ok: decomposition is a solution; utilities 2.5 0.4")


def test_verify_k_flag_changes_the_label(capsys, tmp_path):
    path = write_decomposition(tmp_path, [["d1", "d3"], ["d2", "d4"]])
    code, out, err = run_cli(capsys, "verify", "corpus:dilemma", path, "--k", "2")
    assert code == 0
    assert "is a 2-cohesive solution" in out


def test_verify_reports_expansion_failures(capsys, tmp_path):
    path = write_decomposition(
        tmp_path, [["d1"], ["d2"], ["d3"], ["d4"]])
    code, out, err = run_cli(capsys, "verify", "corpus:dilemma", path)
    assert code == 1
    assert "expansion: merging coalitions" in out
    assert out.rstrip().endswith("failed: decomposition is not a solution")


def test_verify_reports_cohesion_failures(capsys, tmp_path):
    path = write_decomposition(tmp_path, [["d1", "d2", "d4"], ["d3"]])
    code, out, err = run_cli(capsys, "verify", "corpus:dilemma", path)
    assert code == 1
    assert "cohesion: coalition 0 loses to its subset ['d2', 'd4']" in out


def test_verify_reports_structural_failures(capsys, tmp_path):
    path = write_decomposition(tmp_path, [["d1", "d2"], ["d3"]])
    code, out, err = run_cli(capsys, "verify", "corpus:dilemma", path)
    assert code == 1
    assert "structure:" in out


# -- export-dot --------------------------------------------------------------


def test_export_dot_stdout_is_deterministic(capsys):
    code1, first, _ = run_cli(capsys, "export-dot", "corpus:running-example")
    code2, second, _ = run_cli(capsys, "export-dot", "corpus:running-example")
    assert code1 == code2 == 0
    assert first == second
    assert first.startswith("graph")
    assert '"q1" -- "q2"' not in first


def test_export_dot_decomposition_adds_clusters(capsys, tmp_path):
    decomp = write_decomposition(
        tmp_path, [["f1", "f2", "q1", "q2"], ["f3", "q3"]])
    out_path = tmp_path / "graph.dot"
    code, out, _ = run_cli(capsys, "export-dot", "corpus:running-example",
                           "--decomposition", decomp, "--out", str(out_path))
    assert code == 0
    assert out == ""
    text = out_path.read_text(encoding="utf-8")
    assert "subgraph cluster_0" in text
    assert 'label="coalition 1";' in text


# -- gen-clique --------------------------------------------------------------


def test_gen_clique_emits_a_loadable_model(capsys, tmp_path):
    edges = tmp_path / "path.edges"
    edges.write_text("1 2\n2 3\n", encoding="utf-8")
    out_path = tmp_path / "clique.json"
    code, out, err = run_cli(capsys, "gen-clique", str(edges),
                             "--gamma", "0.3", "--lambda", "-0.7",
                             "--out", str(out_path))
    assert code == 0
    model = load_model(out_path)
    assert model.params is not None
    assert model.params.gamma == 0.3
    assert model.params.lam == -0.7
    assert len(model.primitive.requirements) == 9


def test_gen_clique_nodes_flag_overrides_the_node_count(capsys, tmp_path):
    edges = tmp_path / "one.edges"
    edges.write_text("1 2\n", encoding="utf-8")
    code, out, err = run_cli(capsys, "gen-clique", str(edges),
                             "--gamma", "0.3", "--lambda", "-0.7",
                             "--nodes", "3")
    assert code == 0
    model = load_model(out)
    assert len(model.primitive.requirements) == 9
    assert any(r.id == "a3_1" for r in model.primitive.requirements)


def test_gen_clique_rejects_bad_gamma(capsys, tmp_path):
    edges = tmp_path / "one.edges"
    edges.write_text("1 2\n", encoding="utf-8")
    code, out, err = run_cli(capsys, "gen-clique", str(edges),
                             "--gamma", "1.5", "--lambda", "-2.0")
    assert code == 2
    assert err.startswith("error:")


def test_gen_clique_rejects_malformed_edge_lines(capsys, tmp_path):
    edges = tmp_path / "bad.edges"
    edges.write_text("1 2 3\n", encoding="utf-8")
    code, out, err = run_cli(capsys, "gen-clique", str(edges),
                             "--gamma", "0.3", "--lambda", "-0.7")
    assert code == 2


# -- corpus ------------------------------------------------------------------


def test_corpus_without_name_lists_models(capsys):
    code, out, err = run_cli(capsys, "corpus")
    assert code == 0
    assert out.splitlines() == list(corpus.names())


def test_corpus_with_name_prints_the_model_document(capsys):
    code, out, err = run_cli(capsys, "corpus", "running-example")
    assert code == 0
    doc = json.loads(out)
    assert doc["name"] == "running-example"
    assert doc["params"]["lambda"] == -0.5


def test_corpus_unknown_name_lists_the_alternatives(capsys):
    code, out, err = run_cli(capsys, "corpus", "nonesuch")
    assert code == 2
    assert "running-example" in err


# -- parser-level behavior ---------------------------------------------------


def test_no_subcommand_is_a_usage_error(capsys):
    assert main([]) == 2


def test_unknown_subcommand_is_a_usage_error(capsys):
    assert main(["frobnicate"]) == 2


def test_seed_flag_is_accepted_and_ignored(capsys):
    code, out, err = run_cli(capsys, "--seed", "7", "corpus")
    assert code == 0
