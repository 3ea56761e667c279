"""Command line interface.

Exit codes: 0 success, 1 negative verdict (verification or validation
failed), 2 input error (unreadable files, bad parameters, refused caps).
Machine output is byte-deterministic; anything timing-dependent is
printed only behind --stats.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from decompgame import corpus
from decompgame.io import (
    ModelValidationError,
    export_dot,
    format_report_table,
    load_decomposition,
    load_model,
    save_model,
    save_report,
)
from decompgame.model import DomainError, GameModel, GameParams, validate
from decompgame.reduction import clique_to_game, parse_edge_list
from decompgame.solver import (
    CapExceededError,
    EXACT_CAP,
    solve_exact,
    solve_k,
    verify_solution,
)
from decompgame.utility import build_context


def _resolve_model(ref: str) -> GameModel:
    """A model reference is either ``corpus:<name>`` or a file path."""
    if ref.startswith("corpus:"):
        return corpus.get(ref.split(":", 1)[1])
    return load_model(Path(ref))


def _context_for(model: GameModel, k_override: int | None):
    params = model.params
    if params is None:
        raise DomainError(
            "model carries no game parameters; add a params block to the file"
        )
    if k_override is not None:
        params = GameParams(
            alpha=params.alpha,
            beta=params.beta,
            gamma=params.gamma,
            lam=params.lam,
            k=k_override,
        )
    return build_context(GameModel(model.primitive, params))


def _cmd_validate(args: argparse.Namespace) -> int:
    # An unsound model is this command's negative verdict (exit 1), not
    # an input error; only unparseable documents rate exit 2.
    try:
        model = _resolve_model(args.model)
    except ModelValidationError as exc:
        for issue in exc.issues:
            print(f"violation: {issue}")
        return 1
    issues = validate(model.primitive)
    if issues:
        for issue in issues:
            print(f"violation: {issue}")
        return 1
    n = len(model.primitive.requirements)
    print(f"ok: {model.primitive.name}: {n} requirements, "
          f"{len(model.primitive.constraints)} constraints")
    return 0


def _cmd_relevance(args: argparse.Namespace) -> int:
    model = _resolve_model(args.model)
    ctx = _context_for(model, None)
    if args.pairs:
        wanted = []
        for spec in args.pairs:
            a, _, b = spec.partition(",")
            if not b:
                raise DomainError(f"--pairs wants 'a,b', got {spec!r}")
            wanted.append((a, b))
    else:
        ids = ctx.ids
        wanted = [(a, b) for i, a in enumerate(ids) for b in ids[i + 1 :]]
    for a, b in wanted:
        print(f"{a}\t{b}\t{ctx.sigma_of(a, b)!r}")
    return 0


def _solve_report(args: argparse.Namespace):
    model = _resolve_model(args.model)
    ctx = _context_for(model, args.k)
    if args.exact:
        return ctx, solve_exact(ctx, cap=args.cap)
    return ctx, solve_k(ctx, ctx.params.k)


def _cmd_solve(args: argparse.Namespace) -> int:
    _, report = _solve_report(args)
    sys.stdout.write(format_report_table(report))
    if args.stats:
        s = report.stats
        print(f"mode: {report.mode}" + (f" (k={report.k})" if report.k else ""))
        print(f"subsets enumerated: {s.subsets_enumerated}")
        print(f"merges performed: {s.merges_performed}")
        print(f"utility trajectory: {[round(u, 6) for u in s.utility_trajectory]}")
        print(f"wall time: {s.wall_time_s:.3f}s")
    if args.out:
        Path(args.out).write_text(
            save_report(report, include_stats=args.stats), encoding="utf-8"
        )
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    model = _resolve_model(args.model)
    ctx = _context_for(model, None)
    coalitions = load_decomposition(Path(args.decomposition))
    result = verify_solution(ctx, coalitions, k=args.k)
    for issue in result.structural_issues:
        print(f"structure: {issue}")
    for idx, witness in result.cohesion_failures:
        print(f"cohesion: coalition {idx} loses to its subset {sorted(witness)}")
    if result.expansion_witness is not None:
        i, j = result.expansion_witness
        print(f"expansion: merging coalitions {i} and {j} beats both")
    label = "solution" if result.k is None else f"{result.k}-cohesive solution"
    if result.passed:
        print(f"ok: decomposition is a {label}; utilities "
              + " ".join(repr(u) for u in result.utilities))
        return 0
    print(f"failed: decomposition is not a {label}")
    return 1


def _cmd_export_dot(args: argparse.Namespace) -> int:
    model = _resolve_model(args.model)
    ctx = _context_for(model, None)
    decomposition = None
    if args.decomposition:
        decomposition = load_decomposition(Path(args.decomposition))
    text = export_dot(ctx, decomposition)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_gen_clique(args: argparse.Namespace) -> int:
    graph = parse_edge_list(Path(args.edgelist).read_text(encoding="utf-8"), n=args.nodes)
    game = clique_to_game(graph, gamma=args.gamma, lam=args.lam)
    text = save_model(game)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_corpus(args: argparse.Namespace) -> int:
    if not args.name:
        for name in corpus.names():
            print(name)
        return 0
    model = corpus.get(args.name)
    sys.stdout.write(save_model(model))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decompgame",
        description="Decompose requirement sets by coalition-game solving.",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help="reserved; every algorithm here is deterministic, the flag is ignored",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file's structural soundness")
    p.add_argument("model")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("relevance", help="print pairwise relevance indices")
    p.add_argument("model")
    p.add_argument("--pairs", nargs="*", metavar="A,B",
                   help="restrict to specific pairs (default: all)")
    p.set_defaults(func=_cmd_relevance)

    p = sub.add_parser("solve", help="compute a decomposition")
    p.add_argument("model")
    p.add_argument("--k", type=int, default=None,
                   help="cohesion level (default: the model's k)")
    p.add_argument("--exact", action="store_true",
                   help="full cohesion via exhaustive peeling (small models only)")
    p.add_argument("--cap", type=int, default=EXACT_CAP,
                   help=f"exact-mode size refusal threshold (default {EXACT_CAP})")
    p.add_argument("--out", help="also write the report as JSON")
    p.add_argument("--stats", action="store_true",
                   help="include run statistics (timing output is not deterministic)")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check a decomposition against a model")
    p.add_argument("model")
    p.add_argument("decomposition")
    p.add_argument("--k", type=int, default=None,
                   help="verify k-cohesion only (default: full cohesion)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("export-dot", help="write the interaction graph as DOT")
    p.add_argument("model")
    p.add_argument("--decomposition", help="cluster nodes by this decomposition file")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_export_dot)

    p = sub.add_parser("gen-clique", help="build a clique-oracle model from an edge list")
    p.add_argument("edgelist", help="text file, one 'u v' edge per line")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--nodes", type=int, default=None,
                   help="node count (default: largest endpoint)")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen_clique)

    p = sub.add_parser("corpus", help="print a bundled model (no name: list them)")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=_cmd_corpus)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
