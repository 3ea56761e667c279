"""Session service: decompose, accept children, terminate, export.

A session wraps one design problem in a tree of nodes. Each node holds
an attribute primitive plus parameters; decomposing a node stores a
report, accepting coalitions turns them into child nodes (restricted
primitives, possibly extended by edits), and terminating freezes a node
as a leaf of the final architecture. The tree is persisted to one JSON
document per session on every mutation (write-to-temp then rename).

Mutating calls on a session are serialized by a per-session lock.
Reads and what-if calls take no lock: the on-disk document is replaced
atomically, so they always observe a consistent snapshot.
"""

from __future__ import annotations

import os
import json
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Literal, Mapping

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field

from decompgame import corpus
from decompgame.io import (
    ModelFormatError,
    export_dot,
    model_from_dict,
    model_to_dict,
    report_to_dict,
)
from decompgame.model import (
    AttributePrimitive,
    Constraint,
    DomainError,
    GameModel,
    GameParams,
    Kind,
    Requirement,
    validate,
)
from decompgame.solver import CapExceededError, EXACT_CAP, solve_exact, solve_k
from decompgame.utility import build_context, pair_interaction

DEFAULT_BUDGET_S = 10.0


@dataclass(frozen=True)
class Edits:
    """Additions applied while deriving a child primitive from a coalition."""

    add_requirements: tuple[Requirement, ...] = ()
    add_constraints: tuple[Constraint, ...] = ()
    add_depends: frozenset[tuple[str, str]] = frozenset()
    add_derives: frozenset[tuple[str, str]] = frozenset()


def restrict_primitive(
    parent: AttributePrimitive,
    coalition: Iterable[str],
    edits: Edits | None = None,
    name: str | None = None,
) -> tuple[AttributePrimitive, list[str]]:
    """Derive the sub-primitive a coalition induces, consistent with the parent.

    Keeps the coalition's requirements plus any added ones; keeps relation
    pairs with both endpoints inside; intersects constraints and drops the
    ones that become empty. A relation pair with exactly one endpoint
    inside is dropped and reported in the warnings list rather than
    pulling the outside requirement in.
    """
    edits = edits or Edits()
    wanted = set(coalition)
    if not wanted:
        raise DomainError("cannot restrict to an empty coalition")
    unknown = wanted - set(parent.by_id)
    if unknown:
        raise DomainError(f"coalition is not a subset of the parent: {sorted(unknown)}")

    requirements = [r for r in parent.requirements if r.id in wanted]
    requirements.extend(edits.add_requirements)
    inside = {r.id for r in requirements}

    warnings: list[str] = []
    depends = set(edits.add_depends)
    for a, b in sorted(parent.depends):
        if a in inside and b in inside:
            depends.add((a, b))
        elif (a in inside) != (b in inside):
            gone = b if a in inside else a
            warnings.append(f"dropped depends ({a}, {b}): {gone} is outside this element")
    derives = set(edits.add_derives)
    for s, f in sorted(parent.derives):
        if s in inside and f in inside:
            derives.add((s, f))
        elif (s in inside) != (f in inside):
            gone = f if s in inside else s
            warnings.append(f"dropped derives ({s}, {f}): {gone} is outside this element")

    constraints = []
    for c in parent.constraints:
        members = c.members & inside
        if members:
            constraints.append(Constraint(id=c.id, members=members))
    constraints.extend(edits.add_constraints)

    raw = {
        pair: v
        for pair, v in parent.raw_relevance.items()
        if pair[0] in inside and pair[1] in inside
    }

    child = AttributePrimitive(
        name=name if name is not None else f"{parent.name}/sub",
        requirements=tuple(requirements),
        constraints=tuple(constraints),
        depends=frozenset(depends),
        derives=frozenset(derives),
        tradeoff=parent.tradeoff,
        raw_relevance=raw,
    )
    issues = validate(child)
    if issues:
        raise DomainError(
            "restriction produced an invalid model: " + "; ".join(issues[:5])
        )
    return child, warnings


# -- request bodies ----------------------------------------------------------


class ParamsBody(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    alpha: float
    beta: float
    gamma: float
    lam: float = Field(alias="lambda")
    k: int = 3

    def to_params(self) -> GameParams:
        try:
            return GameParams(
                alpha=self.alpha, beta=self.beta, gamma=self.gamma, lam=self.lam, k=self.k
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None


class CreateSessionBody(BaseModel):
    model: dict[str, Any] | None = None
    corpus: str | None = None


class DecomposeBody(BaseModel):
    mode: Literal["k", "exact"] = "k"
    k: int | None = None
    cap: int = EXACT_CAP


class WhatIfBody(DecomposeBody):
    params: ParamsBody | None = None


class RequirementSpec(BaseModel):
    id: str
    kind: Literal["functional", "scenario"]
    description: str = ""
    general_scenario: str | None = None

    def to_requirement(self) -> Requirement:
        return Requirement(
            id=self.id,
            kind=Kind(self.kind),
            description=self.description,
            general_scenario=self.general_scenario,
        )


class ConstraintSpec(BaseModel):
    id: str
    members: list[str]


class AcceptCoalition(BaseModel):
    index: int
    add_requirements: list[RequirementSpec] = []
    add_constraints: list[ConstraintSpec] = []
    add_depends: list[tuple[str, str]] = []
    add_derives: list[tuple[str, str]] = []

    def to_edits(self) -> Edits:
        return Edits(
            add_requirements=tuple(r.to_requirement() for r in self.add_requirements),
            add_constraints=tuple(
                Constraint(id=c.id, members=frozenset(c.members))
                for c in self.add_constraints
            ),
            add_depends=frozenset(self.add_depends),
            add_derives=frozenset(self.add_derives),
        )


class AcceptBody(BaseModel):
    coalitions: list[AcceptCoalition]


# -- persistence -------------------------------------------------------------


class SessionStore:
    """One JSON document per session; atomic replace on save."""

    def __init__(self, root: Path):
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()

    def lock(self, sid: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(sid, threading.Lock())

    def path(self, sid: str) -> Path:
        return self.root / f"{sid}.json"

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))

    def load(self, sid: str) -> dict[str, Any]:
        path = self.path(sid)
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"unknown session {sid!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def save(self, sid: str, doc: dict[str, Any]) -> None:
        _audit_tree(doc)
        path = self.path(sid)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        os.replace(tmp, path)


def _audit_tree(doc: Mapping[str, Any]) -> None:
    """Structural invariant: nodes form a tree rooted at doc['root']."""
    nodes = doc["nodes"]
    root = doc["root"]
    assert root in nodes, "root missing from node table"
    seen_child: set[str] = set()
    for nid, node in nodes.items():
        for child in node["children"]:
            assert child in nodes, f"node {nid} references missing child {child}"
            assert child != root, "root cannot be a child"
            assert child not in seen_child, f"node {child} has two parents"
            seen_child.add(child)
    reached: set[str] = set()
    stack = [root]
    while stack:
        cur = stack.pop()
        assert cur not in reached, f"cycle through node {cur}"
        reached.add(cur)
        stack.extend(nodes[cur]["children"])
    assert reached == set(nodes), f"unreachable nodes: {sorted(set(nodes) - reached)}"


def _params_doc(params: GameParams) -> dict[str, Any]:
    return {
        "alpha": params.alpha,
        "beta": params.beta,
        "gamma": params.gamma,
        "lambda": params.lam,
        "k": params.k,
    }


def _params_from_doc(doc: Mapping[str, Any]) -> GameParams:
    return GameParams(
        alpha=doc["alpha"],
        beta=doc["beta"],
        gamma=doc["gamma"],
        lam=doc["lambda"],
        k=doc.get("k", 3),
    )


def _node_of(doc: dict[str, Any], nid: str) -> dict[str, Any]:
    try:
        return doc["nodes"][nid]
    except KeyError:
        raise HTTPException(status_code=404, detail=f"unknown node {nid!r}") from None


def _primitive_of(node: Mapping[str, Any]) -> AttributePrimitive:
    return model_from_dict(node["primitive"]).primitive


def _require_params(node: Mapping[str, Any]) -> GameParams:
    if node["params"] is None:
        raise HTTPException(
            status_code=422,
            detail="node has no game parameters; set them via the params endpoint",
        )
    return _params_from_doc(node["params"])


def _new_node(primitive: AttributePrimitive, params: GameParams | None) -> dict[str, Any]:
    return {
        "primitive": model_to_dict(primitive),
        "params": _params_doc(params) if params is not None else None,
        "status": "open",
        "children": [],
        "last_report": None,
        "accepted_indices": [],
        "warnings": [],
    }


def _solve_report_doc(
    primitive: AttributePrimitive, params: GameParams, body: DecomposeBody
) -> dict[str, Any]:
    ctx = build_context(GameModel(primitive, params))
    try:
        if body.mode == "exact":
            report = solve_exact(ctx, cap=body.cap)
        else:
            report = solve_k(ctx, body.k if body.k is not None else params.k)
    except CapExceededError as exc:
        raise HTTPException(status_code=422, detail=f"refused: {exc}") from None
    # stats stay out of service payloads: wall time would make otherwise
    # identical reports compare unequal
    return report_to_dict(report)


# -- application -------------------------------------------------------------


def create_app(
    sessions_dir: str | os.PathLike[str],
    decompose_budget: float = DEFAULT_BUDGET_S,
) -> FastAPI:
    store = SessionStore(Path(sessions_dir))
    jobs: dict[str, dict[str, Any]] = {}
    app = FastAPI(title="decompgame service", version="1")
    app.state.store = store
    app.state.jobs = jobs

    @app.get("/v1/corpus")
    def corpus_names() -> dict[str, Any]:
        return {"names": list(corpus.names())}

    @app.get("/v1/corpus/{name}")
    def corpus_model(name: str) -> dict[str, Any]:
        try:
            return model_to_dict(corpus.get(name))
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=exc.args[0]) from None

    @app.get("/v1/sessions")
    def list_sessions() -> dict[str, Any]:
        return {"sessions": store.list_ids()}

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: CreateSessionBody) -> dict[str, Any]:
        if (body.model is None) == (body.corpus is None):
            raise HTTPException(
                status_code=422, detail="provide exactly one of 'model' or 'corpus'"
            )
        try:
            model = (
                corpus.get(body.corpus)
                if body.corpus is not None
                else model_from_dict(body.model)
            )
        except (ModelFormatError, KeyError) as exc:
            raise HTTPException(status_code=422, detail=str(exc.args[0])) from None
        sid = uuid.uuid4().hex[:12]
        doc = {
            "session_id": sid,
            "root": "0",
            "next_node": 1,
            "nodes": {"0": _new_node(model.primitive, model.params)},
        }
        with store.lock(sid):
            store.save(sid, doc)
        return {"session_id": sid, "root": "0"}

    @app.get("/v1/sessions/{sid}/tree")
    def get_tree(sid: str) -> dict[str, Any]:
        doc = store.load(sid)
        nodes = {
            nid: {
                "id": nid,
                "name": node["primitive"]["name"],
                "status": node["status"],
                "children": node["children"],
                "params": node["params"],
                "requirement_ids": sorted(
                    e["id"]
                    for part in ("functional", "scenarios")
                    for e in node["primitive"][part]
                ),
                "primitive": node["primitive"],
                "last_report": node["last_report"],
                "accepted_indices": node["accepted_indices"],
                "warnings": node["warnings"],
            }
            for nid, node in doc["nodes"].items()
        }
        return {"session_id": doc["session_id"], "root": doc["root"], "nodes": nodes}

    @app.put("/v1/sessions/{sid}/nodes/{nid}/params")
    def set_params(sid: str, nid: str, body: ParamsBody) -> dict[str, Any]:
        params = body.to_params()
        with store.lock(sid):
            doc = store.load(sid)
            node = _node_of(doc, nid)
            if node["status"] == "terminated":
                raise HTTPException(status_code=409, detail="node is terminated")
            if node["children"]:
                raise HTTPException(
                    status_code=409, detail="node already has accepted children"
                )
            node["params"] = _params_doc(params)
            # Any stored report was computed under the old parameters.
            node["last_report"] = None
            node["accepted_indices"] = []
            node["status"] = "open"
            store.save(sid, doc)
        return {"ok": True, "params": node["params"]}

    @app.post("/v1/sessions/{sid}/nodes/{nid}/decompose")
    def decompose(sid: str, nid: str, body: DecomposeBody):
        lock = store.lock(sid)
        with lock:
            doc = store.load(sid)
            node = _node_of(doc, nid)
            if node["status"] == "terminated":
                raise HTTPException(status_code=409, detail="node is terminated")
            if node["children"]:
                raise HTTPException(
                    status_code=409, detail="node already has accepted children"
                )
            params = _require_params(node)
            primitive = _primitive_of(node)

        job: dict[str, Any] = {"state": "running", "session": sid, "node": nid}

        def run() -> None:
            try:
                rep_doc = _solve_report_doc(primitive, params, body)
            except HTTPException as exc:
                job["state"] = "error"
                job["code"] = exc.status_code
                job["error"] = exc.detail
                return
            except Exception as exc:  # surfaced via the job, not a crashed thread
                job["state"] = "error"
                job["code"] = 500
                job["error"] = str(exc)
                return
            with lock:
                fresh = store.load(sid)
                fnode = fresh["nodes"].get(nid)
                if fnode is None or fnode["status"] == "terminated" or fnode["children"]:
                    job["state"] = "error"
                    job["code"] = 409
                    job["error"] = "node changed while decomposing"
                    return
                fnode["last_report"] = rep_doc
                fnode["status"] = "decomposed"
                store.save(sid, fresh)
            job["state"] = "done"
            job["report"] = rep_doc

        worker = threading.Thread(target=run, daemon=True)
        worker.start()
        worker.join(decompose_budget)
        if job["state"] == "done":
            return {"report": job["report"]}
        if job["state"] == "error":
            raise HTTPException(status_code=job["code"], detail=job["error"])
        job_id = uuid.uuid4().hex[:12]
        jobs[job_id] = job
        return JSONResponse(
            status_code=202,
            content={"job_id": job_id, "poll": f"/v1/sessions/{sid}/jobs/{job_id}"},
        )

    @app.get("/v1/sessions/{sid}/jobs/{jid}")
    def poll_job(sid: str, jid: str):
        job = jobs.get(jid)
        if job is None or job["session"] != sid:
            raise HTTPException(status_code=404, detail=f"unknown job {jid!r}")
        if job["state"] == "running":
            return JSONResponse(status_code=202, content={"state": "running"})
        if job["state"] == "error":
            raise HTTPException(status_code=job["code"], detail=job["error"])
        return {"state": "done", "report": job["report"]}

    @app.post("/v1/sessions/{sid}/nodes/{nid}/what-if")
    def what_if(sid: str, nid: str, body: WhatIfBody) -> dict[str, Any]:
        doc = store.load(sid)
        node = _node_of(doc, nid)
        params = body.params.to_params() if body.params is not None else _require_params(node)
        primitive = _primitive_of(node)
        return {"report": _solve_report_doc(primitive, params, body)}

    @app.post("/v1/sessions/{sid}/nodes/{nid}/accept-children")
    def accept_children(sid: str, nid: str, body: AcceptBody) -> dict[str, Any]:
        if not body.coalitions:
            raise HTTPException(status_code=422, detail="no coalitions selected")
        indices = [sel.index for sel in body.coalitions]
        if len(set(indices)) != len(indices):
            raise HTTPException(status_code=422, detail="duplicate coalition index")
        with store.lock(sid):
            doc = store.load(sid)
            node = _node_of(doc, nid)
            if node["status"] == "terminated":
                raise HTTPException(status_code=409, detail="node is terminated")
            if node["status"] != "decomposed" or node["last_report"] is None:
                raise HTTPException(
                    status_code=409, detail="node has no decomposition to accept from"
                )
            report_coalitions = node["last_report"]["coalitions"]
            parent_primitive = _primitive_of(node)
            parent_params = node["params"]
            created: list[str] = []
            warnings: dict[str, list[str]] = {}
            for sel in body.coalitions:
                if not 0 <= sel.index < len(report_coalitions):
                    raise HTTPException(
                        status_code=422,
                        detail=f"coalition index {sel.index} out of range",
                    )
                if sel.index in node["accepted_indices"]:
                    raise HTTPException(
                        status_code=409,
                        detail=f"coalition {sel.index} was already accepted",
                    )
            for sel in body.coalitions:
                child_id = str(doc["next_node"])
                try:
                    child_primitive, child_warnings = restrict_primitive(
                        parent_primitive,
                        report_coalitions[sel.index],
                        sel.to_edits(),
                        name=f"{parent_primitive.name}/{child_id}",
                    )
                except DomainError as exc:
                    raise HTTPException(status_code=422, detail=str(exc)) from None
                doc["next_node"] += 1
                child = _new_node(child_primitive, None)
                child["params"] = parent_params
                child["warnings"] = child_warnings
                doc["nodes"][child_id] = child
                node["children"].append(child_id)
                node["accepted_indices"].append(sel.index)
                created.append(child_id)
                warnings[child_id] = child_warnings
            store.save(sid, doc)
        return {"children": created, "warnings": warnings}

    @app.post("/v1/sessions/{sid}/nodes/{nid}/terminate")
    def terminate(sid: str, nid: str) -> dict[str, Any]:
        with store.lock(sid):
            doc = store.load(sid)
            node = _node_of(doc, nid)
            if node["status"] == "terminated":
                raise HTTPException(status_code=409, detail="node is already terminated")
            if node["children"]:
                raise HTTPException(
                    status_code=409, detail="node has accepted children"
                )
            node["status"] = "terminated"
            store.save(sid, doc)
        return {"ok": True, "status": "terminated"}

    @app.get("/v1/sessions/{sid}/export")
    def export_architecture(sid: str):
        doc = store.load(sid)
        nodes = doc["nodes"]
        uncovered: list[str] = []
        covered: set[str] = set()
        removed: dict[str, list[str]] = {}

        def requirement_ids(node: Mapping[str, Any]) -> set[str]:
            return {
                e["id"]
                for part in ("functional", "scenarios")
                for e in node["primitive"][part]
            }

        def walk(nid: str) -> dict[str, Any]:
            node = nodes[nid]
            own = requirement_ids(node)
            children = [walk(c) for c in node["children"]]
            if node["children"]:
                kept = set().union(
                    *(requirement_ids(nodes[c]) for c in node["children"])
                )
                dropped = sorted(own - kept)
                if dropped:
                    removed[nid] = dropped
            elif node["status"] != "terminated":
                uncovered.append(nid)
            else:
                covered.update(own)
            return {
                "id": nid,
                "name": node["primitive"]["name"],
                "status": node["status"],
                "requirements": sorted(own),
                "params": node["params"],
                "children": children,
            }

        tree = walk(doc["root"])
        if uncovered:
            root_ids = requirement_ids(nodes[doc["root"]])
            removed_union: set[str] = set()
            for ids in removed.values():
                removed_union.update(ids)
            return JSONResponse(
                status_code=409,
                content={
                    "detail": "architecture incomplete: some leaves are not terminated",
                    "unterminated_leaves": sorted(uncovered),
                    "missing_requirements": sorted(
                        root_ids - covered - removed_union
                    ),
                },
            )
        return {
            "session_id": doc["session_id"],
            "root": doc["root"],
            "architecture": tree,
            "removed_requirements": removed,
        }

    @app.get("/v1/sessions/{sid}/nodes/{nid}/interaction-graph")
    def interaction_graph(sid: str, nid: str) -> dict[str, Any]:
        doc = store.load(sid)
        node = _node_of(doc, nid)
        params = _require_params(node)
        primitive = _primitive_of(node)
        ctx = build_context(GameModel(primitive, params))
        everyone = ctx.ids
        edges = []
        for i, a in enumerate(everyone):
            for b in everyone[i + 1 :]:
                value = pair_interaction(ctx, a, b, everyone)
                if value != 0:
                    edges.append({"a": a, "b": b, "value": value})
        return {
            "nodes": [
                {
                    "id": rid,
                    "kind": primitive.by_id[rid].kind.value,
                    "general_scenario": primitive.by_id[rid].general_scenario,
                }
                for rid in everyone
            ],
            "edges": edges,
            "dot": export_dot(ctx),
        }

    return app


def app_from_env() -> FastAPI:
    """Factory for ``uvicorn --factory decompgame.service:app_from_env``."""
    return create_app(os.environ.get("DECOMPGAME_SESSIONS", "sessions"))
