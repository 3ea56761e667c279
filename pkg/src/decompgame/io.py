"""Serialization: the JSON model format, decompositions, reports, DOT export.

The model format is a single JSON document; the corpus files under
``decompgame/corpus/data`` are the normative examples. All writers emit
deterministic field and element ordering so identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from decompgame.model import (
    AttributePrimitive,
    Constraint,
    GameModel,
    GameParams,
    Kind,
    Requirement,
    TradeoffMatrix,
    validate,
)
from decompgame.solver import SolveReport
from decompgame.utility import GameContext, pair_interaction


class ModelFormatError(ValueError):
    """The document does not conform to the model file format."""


class ModelValidationError(ModelFormatError):
    """The document parsed but the model it describes is unsound."""

    def __init__(self, issues: Sequence[str]):
        self.issues = tuple(issues)
        super().__init__(
            "model failed validation:\n" + "\n".join(f"  - {s}" for s in issues)
        )


def _read_source(source: str | os.PathLike[str]) -> str:
    """Accept either JSON text or a path to a JSON file."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        return source
    return Path(source).read_text(encoding="utf-8")


def _expect(data: Mapping[str, Any], key: str, typ: type, where: str) -> Any:
    if key not in data:
        raise ModelFormatError(f"{where}: missing required field {key!r}")
    value = data[key]
    if typ is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ModelFormatError(f"{where}: field {key!r} must be a number")
        return float(value)
    if not isinstance(value, typ):
        raise ModelFormatError(f"{where}: field {key!r} must be {typ.__name__}")
    return value


def _string_pairs(items: Any, where: str) -> frozenset[tuple[str, str]]:
    if not isinstance(items, list):
        raise ModelFormatError(f"{where}: must be a list of [a, b] pairs")
    out = set()
    for i, pair in enumerate(items):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(p, str) for p in pair)
        ):
            raise ModelFormatError(f"{where}[{i}]: expected a pair of ids")
        out.add((pair[0], pair[1]))
    return frozenset(out)


def model_from_dict(data: Mapping[str, Any]) -> GameModel:
    """Build and validate a model from parsed JSON."""
    if not isinstance(data, Mapping):
        raise ModelFormatError("model document must be a JSON object")
    name = _expect(data, "name", str, "model")

    requirements: list[Requirement] = []
    for i, entry in enumerate(data.get("functional", [])):
        if isinstance(entry, str):
            entry = {"id": entry}
        if not isinstance(entry, Mapping):
            raise ModelFormatError(f"functional[{i}]: expected an object or id string")
        requirements.append(
            Requirement(
                id=_expect(entry, "id", str, f"functional[{i}]"),
                kind=Kind.FUNCTIONAL,
                description=entry.get("description", ""),
            )
        )
    for i, entry in enumerate(data.get("scenarios", [])):
        if not isinstance(entry, Mapping):
            raise ModelFormatError(f"scenarios[{i}]: expected an object")
        requirements.append(
            Requirement(
                id=_expect(entry, "id", str, f"scenarios[{i}]"),
                kind=Kind.SCENARIO,
                description=entry.get("description", ""),
                general_scenario=_expect(entry, "general_scenario", str, f"scenarios[{i}]"),
            )
        )

    constraints = []
    for i, entry in enumerate(data.get("constraints", [])):
        if not isinstance(entry, Mapping):
            raise ModelFormatError(f"constraints[{i}]: expected an object")
        members = _expect(entry, "members", list, f"constraints[{i}]")
        if not all(isinstance(m, str) for m in members):
            raise ModelFormatError(f"constraints[{i}]: members must be id strings")
        constraints.append(
            Constraint(
                id=_expect(entry, "id", str, f"constraints[{i}]"),
                members=frozenset(members),
            )
        )

    tradeoff = TradeoffMatrix((), ())
    if "tradeoff" in data:
        tdata = data["tradeoff"]
        if not isinstance(tdata, Mapping):
            raise ModelFormatError("tradeoff: expected an object with labels and rows")
        labels = _expect(tdata, "labels", list, "tradeoff")
        rows = _expect(tdata, "rows", list, "tradeoff")
        if not all(isinstance(lab, str) for lab in labels):
            raise ModelFormatError("tradeoff: labels must be strings")
        clean_rows = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in row
            ):
                raise ModelFormatError(f"tradeoff.rows[{i}]: expected a list of integers")
            clean_rows.append(tuple(row))
        tradeoff = TradeoffMatrix(labels=tuple(labels), rows=tuple(clean_rows))

    raw: dict[tuple[str, str], float] = {}
    for i, entry in enumerate(data.get("raw_relevance", [])):
        if not isinstance(entry, Mapping):
            raise ModelFormatError(f"raw_relevance[{i}]: expected an object")
        a = _expect(entry, "a", str, f"raw_relevance[{i}]")
        b = _expect(entry, "b", str, f"raw_relevance[{i}]")
        raw[(a, b)] = _expect(entry, "sigma", float, f"raw_relevance[{i}]")

    primitive = AttributePrimitive(
        name=name,
        requirements=tuple(requirements),
        constraints=tuple(constraints),
        depends=_string_pairs(data.get("depends", []), "depends"),
        derives=_string_pairs(data.get("derives", []), "derives"),
        tradeoff=tradeoff,
        raw_relevance=raw,
    )
    issues = validate(primitive)
    if issues:
        raise ModelValidationError(issues)

    params = None
    if "params" in data and data["params"] is not None:
        pdata = data["params"]
        if not isinstance(pdata, Mapping):
            raise ModelFormatError("params: expected an object")
        try:
            params = GameParams(
                alpha=_expect(pdata, "alpha", float, "params"),
                beta=_expect(pdata, "beta", float, "params"),
                gamma=_expect(pdata, "gamma", float, "params"),
                lam=_expect(pdata, "lambda", float, "params"),
                k=int(pdata.get("k", 3)),
            )
        except ValueError as exc:
            raise ModelFormatError(f"params: {exc}") from None
    return GameModel(primitive=primitive, params=params)


def load_model(source: str | os.PathLike[str]) -> GameModel:
    """Load a model from JSON text (leading '{') or from a file path."""
    text = _read_source(source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from None
    return model_from_dict(data)


def model_to_dict(model: GameModel | AttributePrimitive) -> dict[str, Any]:
    """Dump a model to the JSON document structure, deterministically ordered."""
    if isinstance(model, AttributePrimitive):
        primitive, params = model, None
    else:
        primitive, params = model.primitive, model.params

    functional = []
    scenarios = []
    for r in primitive.requirements:
        entry: dict[str, Any] = {"id": r.id}
        if r.kind is Kind.SCENARIO:
            entry["general_scenario"] = r.general_scenario
        if r.description:
            entry["description"] = r.description
        (functional if r.kind is Kind.FUNCTIONAL else scenarios).append(entry)

    doc: dict[str, Any] = {
        "name": primitive.name,
        "functional": functional,
        "scenarios": scenarios,
        "constraints": [
            {"id": c.id, "members": sorted(c.members)} for c in primitive.constraints
        ],
        "depends": [list(p) for p in sorted(primitive.depends)],
        "derives": [list(p) for p in sorted(primitive.derives)],
        "tradeoff": {
            "labels": list(primitive.tradeoff.labels),
            "rows": [list(row) for row in primitive.tradeoff.rows],
        },
        "raw_relevance": [
            {"a": a, "b": b, "sigma": v}
            for (a, b), v in sorted(primitive.raw_relevance.items())
        ],
    }
    if params is not None:
        doc["params"] = {
            "alpha": params.alpha,
            "beta": params.beta,
            "gamma": params.gamma,
            "lambda": params.lam,
            "k": params.k,
        }
    return doc


def save_model(model: GameModel | AttributePrimitive) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def save_decomposition(
    coalitions: Sequence[frozenset[str]], utilities: Sequence[float] | None = None
) -> str:
    doc: dict[str, Any] = {"coalitions": [sorted(c) for c in coalitions]}
    if utilities is not None:
        doc["utilities"] = list(utilities)
    return json.dumps(doc, indent=2) + "\n"


def load_decomposition(source: str | os.PathLike[str]) -> list[frozenset[str]]:
    text = _read_source(source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not valid JSON: {exc}") from None
    if not isinstance(data, Mapping):
        raise ModelFormatError("decomposition document must be a JSON object")
    coalitions = _expect(data, "coalitions", list, "decomposition")
    out = []
    for i, coal in enumerate(coalitions):
        if not isinstance(coal, list) or not all(isinstance(m, str) for m in coal):
            raise ModelFormatError(f"coalitions[{i}]: expected a list of id strings")
        out.append(frozenset(coal))
    return out


def report_to_dict(report: SolveReport, include_stats: bool = False) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "mode": report.mode,
        "k": report.k,
        "coalitions": [sorted(c) for c in report.coalitions],
        "utilities": list(report.utilities),
    }
    if include_stats and report.stats is not None:
        doc["stats"] = {
            "subsets_enumerated": report.stats.subsets_enumerated,
            "merges_performed": report.stats.merges_performed,
            "utility_trajectory": list(report.stats.utility_trajectory),
            "wall_time_s": report.stats.wall_time_s,
        }
    return doc


def save_report(report: SolveReport, include_stats: bool = False) -> str:
    return json.dumps(report_to_dict(report, include_stats=include_stats), indent=2) + "\n"


def format_report_table(report: SolveReport) -> str:
    """Human-readable report: one row per coalition, ordered by payoff."""
    rows = []
    for i, (coal, u) in enumerate(zip(report.coalitions, report.utilities), start=1):
        rows.append((str(i), f"{u:.6g}", str(len(coal)), ", ".join(sorted(coal))))
    headers = ("#", "payoff", "size", "members")
    widths = [
        max(len(headers[c]), *(len(r[c]) for r in rows)) if rows else len(headers[c])
        for c in range(4)
    ]
    def fmt(cells: tuple[str, str, str, str]) -> str:
        return "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(cells)).rstrip()
    lines = [fmt(headers), fmt(tuple("-" * w for w in widths))]
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines) + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    ctx: GameContext, decomposition: Sequence[frozenset[str]] | None = None
) -> str:
    """Render the full interaction graph as Graphviz DOT.

    Every requirement is a node (functional: box, scenario: ellipse). An
    edge connects each pair whose interaction across the whole requirement
    set is nonzero: blue for positive, red for negative. If a decomposition
    is given, its coalitions become cluster subgraphs.
    """
    everyone = ctx.ids
    kinds = {rid: ctx.primitive.by_id[rid].kind for rid in everyone}

    def node_line(rid: str) -> str:
        shape = "box" if kinds[rid] is Kind.FUNCTIONAL else "ellipse"
        return f"{_dot_quote(rid)} [shape={shape}];"

    lines = ["graph interactions {", "  node [fontsize=11];"]
    if decomposition:
        placed: set[str] = set()
        for i, coal in enumerate(decomposition):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="coalition {i + 1}";')
            for rid in sorted(coal):
                lines.append("    " + node_line(rid))
                placed.add(rid)
            lines.append("  }")
        for rid in everyone:
            if rid not in placed:
                lines.append("  " + node_line(rid))
    else:
        for rid in everyone:
            lines.append("  " + node_line(rid))

    for i, a in enumerate(everyone):
        for b in everyone[i + 1 :]:
            value = pair_interaction(ctx, a, b, everyone)
            if value == 0:
                continue
            color = "blue" if value > 0 else "red"
            lines.append(
                f"  {_dot_quote(a)} -- {_dot_quote(b)} "
                f'[color={color}, label="{value:.6g}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
