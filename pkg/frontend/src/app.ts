/** Browser entry point: wires the API client to the views.

Holds no derived numeric state; every figure on screen is read back
from the service payloads after each mutation.
*/

import { ApiError, DecompClient } from "./api.js";
import {
  el,
  renderDecompositionBoard,
  renderExportView,
  renderInteractionGraph,
  renderModelView,
  renderParamPanel,
} from "./render.js";
import type { ParamsDoc, ReportDoc, TreeDoc, TreeNodeDoc } from "./types.js";

const FALLBACK_PARAMS: ParamsDoc = {
  alpha: 0.5,
  beta: 0.4,
  gamma: 0.1,
  lambda: -0.5,
  k: 3,
};

interface AppState {
  sessionId: string | null;
  tree: TreeDoc | null;
  nodeId: string;
  whatIf: ReportDoc | null;
}

function parentsOf(tree: TreeDoc): Map<string, string> {
  const parents = new Map<string, string>();
  for (const node of Object.values(tree.nodes)) {
    for (const child of node.children) parents.set(child, node.id);
  }
  return parents;
}

export function mountApp(root: HTMLElement, client: DecompClient): void {
  const state: AppState = { sessionId: null, tree: null, nodeId: "", whatIf: null };

  const status = el("p", { class: "status", "data-field": "status" });
  const picker = el("select", { "data-field": "corpus" });
  const open = el("button", { type: "button", "data-action": "open" }, "open session");
  const main = el("main", {});
  root.replaceChildren(
    el(
      "header",
      { class: "topbar" },
      el("h1", {}, "decomposition workbench"),
      picker,
      open,
      status,
    ),
    main,
  );

  const say = (text: string) => {
    status.textContent = text;
  };
  const fail = (err: unknown) => {
    if (err instanceof ApiError) say(`error ${err.status}: ${err.detail}`);
    else say(`error: ${String(err)}`);
  };

  const node = (): TreeNodeDoc | null => {
    if (!state.tree) return null;
    return state.tree.nodes[state.nodeId] ?? null;
  };

  const refresh = async (): Promise<void> => {
    if (!state.sessionId) return;
    state.tree = await client.tree(state.sessionId);
    if (!state.tree.nodes[state.nodeId]) state.nodeId = state.tree.root;
    draw();
  };

  const draw = (): void => {
    const current = node();
    if (!state.sessionId || !state.tree || !current) {
      main.replaceChildren(el("p", {}, "open a corpus model to begin"));
      return;
    }
    const tree = state.tree;
    const parents = parentsOf(tree);
    const crumbs = el("nav", { class: "crumbs" });
    const chain: TreeNodeDoc[] = [];
    for (
      let walk: TreeNodeDoc | undefined = current;
      walk;
      walk = tree.nodes[parents.get(walk.id) ?? ""]
    ) {
      chain.unshift(walk);
    }
    for (const entry of chain) {
      const link = el("button", { type: "button", class: "crumb" }, entry.name);
      link.addEventListener("click", () => {
        state.nodeId = entry.id;
        state.whatIf = null;
        draw();
      });
      crumbs.append(link);
    }

    const panel = renderParamPanel(current.params ?? FALLBACK_PARAMS, (params) => {
      void client.setParams(state.sessionId!, state.nodeId, params).then(refresh, fail);
    });

    const actions = el("div", { class: "actions" });
    const decompose = el("button", { type: "button", "data-action": "decompose" }, "decompose");
    decompose.addEventListener("click", () => {
      say("decomposing");
      void client.decompose(state.sessionId!, state.nodeId, {}).then(async () => {
        say("decomposed");
        await refresh();
      }, fail);
    });
    const whatIf = el(
      "button",
      { type: "button", "data-action": "what-if" },
      "what-if with panel params",
    );
    whatIf.addEventListener("click", () => {
      say("running what-if");
      void client
        .whatIf(state.sessionId!, state.nodeId, { params: panel.read() })
        .then((report) => {
          state.whatIf = report;
          say("what-if finished; session state untouched");
          draw();
        }, fail);
    });
    const exportBtn = el("button", { type: "button", "data-action": "export" }, "export architecture");
    exportBtn.addEventListener("click", () => {
      void client.exportArchitecture(state.sessionId!).then(
        (doc) => {
          void client.interactionGraph(state.sessionId!, tree.root).then((graph) => {
            main.append(renderExportView(doc, graph.dot));
          }, fail);
        },
        (err) => {
          if (err instanceof ApiError && err.status === 409) {
            const body = err.body as {
              unterminated_leaves?: string[];
              missing_requirements?: string[];
            } | null;
            say(
              "export refused: unterminated leaves " +
                `${JSON.stringify(body?.unterminated_leaves ?? [])}, missing requirements ` +
                `${JSON.stringify(body?.missing_requirements ?? [])}`,
            );
          } else {
            fail(err);
          }
        },
      );
    });
    actions.append(decompose, whatIf, exportBtn);

    const boards = el("div", { class: "boards" });
    if (current.last_report) {
      boards.append(
        el("h3", {}, "stored decomposition"),
        renderDecompositionBoard(current.last_report, {
          accepted: current.accepted_indices,
          onAccept: (index) => {
            void client
              .acceptChildren(state.sessionId!, state.nodeId, [{ index }])
              .then(refresh, fail);
          },
          onTerminate: (index) => {
            void client
              .acceptChildren(state.sessionId!, state.nodeId, [{ index }])
              .then(async (result) => {
                const child = result.children[0];
                if (child !== undefined) {
                  await client.terminate(state.sessionId!, child);
                }
                await refresh();
              }, fail);
          },
        }),
      );
    }
    if (state.whatIf) {
      boards.append(
        el("h3", {}, "what-if (not stored)"),
        renderDecompositionBoard(state.whatIf),
      );
    }

    const graphFigure = el("div", { class: "graph-slot" });
    if (current.params) {
      void client.interactionGraph(state.sessionId!, state.nodeId).then(
        (graph) => {
          graphFigure.replaceChildren(renderInteractionGraph(graph));
        },
        () => {
          graphFigure.replaceChildren();
        },
      );
    }

    main.replaceChildren(
      crumbs,
      el("p", { class: "node-status" }, `status: ${current.status}`),
      renderModelView(current.primitive),
      panel.root,
      actions,
      boards,
      graphFigure,
    );
  };

  open.addEventListener("click", () => {
    const name = picker.value;
    if (!name) return;
    void client.createSession({ corpus: name }).then(async (created) => {
      state.sessionId = created.session_id;
      state.nodeId = created.root;
      state.whatIf = null;
      say(`session ${created.session_id}`);
      await refresh();
    }, fail);
  });

  void client.listCorpus().then((names) => {
    picker.replaceChildren(...names.map((name) => el("option", { value: name }, name)));
  }, fail);

  draw();
}

const rootEl = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootEl) {
  mountApp(rootEl, new DecompClient({ baseUrl: "" }));
}
