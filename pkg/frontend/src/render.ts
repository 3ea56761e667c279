/** DOM builders for every view.

Numbers are rendered with String() straight from the payload, never
reformatted or recomputed; the contract tests compare each rendered
badge against its payload field by string equality.
*/

import { paramsViolations, normalizeWeights } from "./params.js";
import type {
  ExportDoc,
  ExportNodeDoc,
  GraphDoc,
  ModelDoc,
  ParamsDoc,
  ReportDoc,
} from "./types.js";

type Attrs = Record<string, string | boolean>;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === "boolean") {
      if (value) node.setAttribute(key, "");
    } else {
      node.setAttribute(key, value);
    }
  }
  node.append(...children);
  return node;
}

/** The one number-to-text path: payload values pass through untouched. */
export function fmt(value: number | null): string {
  return value === null ? "" : String(value);
}

// -- model view ---------------------------------------------------------------

export function renderModelView(model: ModelDoc): HTMLElement {
  const section = el("section", { class: "model-view" });
  section.append(el("h2", {}, model.name));

  const functional = el("ul", { class: "requirements", "data-kind": "functional" });
  for (const req of model.functional) {
    functional.append(
      el(
        "li",
        { "data-requirement": req.id },
        el("span", { class: "badge badge-f", "data-badge": "F" }, "F"),
        el("span", { class: "req-id" }, req.id),
        req.description ? ` ${req.description}` : "",
      ),
    );
  }
  section.append(el("h3", {}, "Functional"), functional);

  const groups = new Map<string, typeof model.scenarios>();
  for (const req of model.scenarios) {
    const label = req.general_scenario ?? "";
    const bucket = groups.get(label) ?? [];
    bucket.push(req);
    groups.set(label, bucket);
  }
  for (const [label, reqs] of groups) {
    const list = el("ul", {
      class: "requirements",
      "data-scenario-group": label,
    });
    for (const req of reqs) {
      list.append(
        el(
          "li",
          { "data-requirement": req.id },
          el("span", { class: "badge badge-s", "data-badge": "S" }, "S"),
          el("span", { class: "req-id" }, req.id),
          req.description ? ` ${req.description}` : "",
        ),
      );
    }
    section.append(el("h3", {}, label), list);
  }

  if (model.constraints.length) {
    const list = el("ul", { class: "constraints" });
    for (const c of model.constraints) {
      list.append(
        el("li", { "data-constraint": c.id }, `${c.id}: ${c.members.join(", ")}`),
      );
    }
    section.append(el("h3", {}, "Constraints"), list);
  }
  return section;
}

// -- parameter panel ----------------------------------------------------------

export interface ParamPanel {
  root: HTMLFormElement;
  read(): ParamsDoc;
}

export function renderParamPanel(
  initial: ParamsDoc,
  onSubmit: (params: ParamsDoc) => void,
): ParamPanel {
  const form = el("form", { class: "param-panel", "data-panel": "params" });

  const fields: Record<string, HTMLInputElement> = {};
  const rows = el("div", { class: "param-rows" });
  const spec: [keyof ParamsDoc, string][] = [
    ["alpha", "alpha"],
    ["beta", "beta"],
    ["gamma", "gamma"],
    ["lambda", "lambda"],
    ["k", "k"],
  ];
  for (const [name, label] of spec) {
    const input = el("input", {
      type: "number",
      step: "any",
      name,
      value: fmt(initial[name]),
    });
    fields[name] = input;
    rows.append(el("label", {}, `${label} `, input));
  }

  const sumOut = el("output", { "data-field": "weight-sum" });
  const violations = el("div", { class: "violations", "data-field": "violations" });
  const normalize = el(
    "button",
    { type: "button", "data-action": "normalize" },
    "normalize weights",
  );
  const submit = el(
    "button",
    { type: "submit", "data-action": "submit" },
    "apply parameters",
  );

  const read = (): ParamsDoc => ({
    alpha: Number(fields["alpha"]!.value),
    beta: Number(fields["beta"]!.value),
    gamma: Number(fields["gamma"]!.value),
    lambda: Number(fields["lambda"]!.value),
    k: Number(fields["k"]!.value),
  });

  const update = () => {
    const params = read();
    sumOut.textContent = fmt(params.alpha + params.beta + params.gamma);
    const issues = paramsViolations(params);
    violations.replaceChildren(
      ...issues.map((text) => el("p", { class: "violation" }, text)),
    );
    submit.disabled = issues.length > 0;
  };

  form.addEventListener("input", update);
  normalize.addEventListener("click", () => {
    const params = read();
    const scaled = normalizeWeights(params);
    if (scaled !== null) {
      fields["alpha"]!.value = fmt(scaled.alpha);
      fields["beta"]!.value = fmt(scaled.beta);
      fields["gamma"]!.value = fmt(scaled.gamma);
    }
    update();
  });
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const params = read();
    // the guard of last resort: an off-simplex submit never leaves the client
    if (paramsViolations(params).length > 0) return;
    onSubmit(params);
  });

  form.append(rows, sumOut, violations, normalize, submit);
  update();
  return { root: form, read };
}

// -- decomposition board --------------------------------------------------------

export interface BoardHandlers {
  onAccept?: (index: number) => void;
  onTerminate?: (index: number) => void;
  accepted?: number[];
}

export function renderDecompositionBoard(
  report: ReportDoc,
  handlers: BoardHandlers = {},
): HTMLElement {
  const accepted = new Set(handlers.accepted ?? []);
  const section = el("section", { class: "board", "data-board": "" });
  const header = el(
    "header",
    {},
    el("span", { "data-field": "mode" }, report.mode),
  );
  if (report.k !== null) {
    header.append(" k=", el("span", { "data-field": "k" }, fmt(report.k)));
  }
  section.append(header);

  const cards = el("ol", { class: "cards" });
  report.coalitions.forEach((coalition, index) => {
    const utility = report.utilities[index] ?? null;
    const members = el("ul", { class: "members" });
    for (const id of coalition) {
      members.append(el("li", { "data-member": id }, id));
    }
    const accept = el(
      "button",
      { type: "button", "data-action": "accept" },
      "accept as child",
    );
    accept.disabled = accepted.has(index);
    accept.addEventListener("click", () => handlers.onAccept?.(index));
    const terminate = el(
      "button",
      { type: "button", "data-action": "terminate" },
      "accept and terminate",
    );
    terminate.disabled = accepted.has(index);
    terminate.addEventListener("click", () => handlers.onTerminate?.(index));

    cards.append(
      el(
        "li",
        { class: "card", "data-coalition": String(index) },
        el("span", { class: "utility", "data-field": "utility" }, fmt(utility)),
        el("span", { class: "size", "data-field": "size" }, String(coalition.length)),
        members,
        accept,
        terminate,
      ),
    );
  });
  section.append(cards);
  return section;
}

// -- interaction graph ----------------------------------------------------------

const SVG_NS = "http://www.w3.org/2000/svg";

/** Circle layout; positions are cosmetic, numbers come from the payload. */
export function renderInteractionGraph(graph: GraphDoc): HTMLElement {
  const size = 420;
  const radius = size / 2 - 50;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${size} ${size}`);
  svg.setAttribute("class", "interaction-graph");

  const position = new Map<string, { x: number; y: number }>();
  graph.nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / graph.nodes.length;
    position.set(node.id, {
      x: size / 2 + radius * Math.cos(angle),
      y: size / 2 + radius * Math.sin(angle),
    });
  });

  for (const edge of graph.edges) {
    const a = position.get(edge.a);
    const b = position.get(edge.b);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("data-edge", `${edge.a}--${edge.b}`);
    line.setAttribute("class", edge.value > 0 ? "positive" : "negative");
    line.setAttribute("stroke", edge.value > 0 ? "#2563eb" : "#dc2626");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${edge.a} -- ${edge.b}: ${fmt(edge.value)}`;
    line.append(title);
    svg.append(line);
  }

  for (const node of graph.nodes) {
    const at = position.get(node.id)!;
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(at.x));
    circle.setAttribute("cy", String(at.y));
    circle.setAttribute("r", "14");
    circle.setAttribute("data-node", node.id);
    circle.setAttribute(
      "class",
      node.kind === "functional" ? "node-functional" : "node-scenario",
    );
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(at.x));
    label.setAttribute("y", String(at.y + 28));
    label.setAttribute("text-anchor", "middle");
    label.textContent = node.id;
    svg.append(circle, label);
  }

  const figure = el("figure", { class: "graph" });
  figure.append(svg);
  return figure;
}

// -- export view ------------------------------------------------------------------

function renderArchitectureNode(node: ExportNodeDoc): HTMLElement {
  const item = el(
    "li",
    { "data-element": node.id },
    el("span", { class: "element-name" }, node.name),
    ` (${node.status}) `,
    el("span", { class: "element-reqs" }, node.requirements.join(", ")),
  );
  if (node.children.length) {
    const list = el("ul", {});
    for (const child of node.children) list.append(renderArchitectureNode(child));
    item.append(list);
  }
  return item;
}

export function renderExportView(doc: ExportDoc | null, dot: string): HTMLElement {
  const section = el("section", { class: "export-view", "data-export": "" });
  if (doc) {
    const download = el(
      "a",
      {
        "data-action": "download",
        download: "architecture.json",
        href:
          "data:application/json;charset=utf-8," +
          encodeURIComponent(JSON.stringify(doc, null, 2)),
      },
      "download architecture.json",
    );
    section.append(
      el("h3", {}, "Architecture"),
      el("ul", { class: "architecture" }, renderArchitectureNode(doc.architecture)),
      download,
    );
  }
  section.append(
    el("h3", {}, "Interaction graph (DOT)"),
    el("pre", { "data-field": "dot" }, dot),
  );
  return section;
}
