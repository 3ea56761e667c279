/** Typed client for the /v1 HTTP API.

All math comes from the service; nothing is recomputed here. Mutating
calls are serialized per session (at most one in flight); reads and
what-if calls bypass the queue. A decompose that exceeds the service
budget answers 202 with a poll handle, which the client follows until
the job settles.
*/

import type {
  AcceptResult,
  AcceptSelection,
  DecomposeRequest,
  ExportDoc,
  GraphDoc,
  ModelDoc,
  ParamsDoc,
  ReportDoc,
  TreeDoc,
  WhatIfRequest,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
    readonly body?: unknown,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

const JSON_HEADERS = { "content-type": "application/json" };

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function raiseFor(resp: Response): Promise<never> {
  let detail = `${resp.status} ${resp.statusText}`;
  let body: unknown;
  try {
    body = await resp.json();
    const d = (body as { detail?: unknown }).detail;
    if (typeof d === "string") detail = d;
    else if (d !== undefined) detail = JSON.stringify(d);
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(resp.status, detail, body);
}

export interface ClientOptions {
  baseUrl?: string;
  pollIntervalMs?: number;
  fetchFn?: typeof fetch;
}

export class DecompClient {
  private readonly base: string;
  private readonly pollInterval: number;
  private readonly fetchFn: typeof fetch;
  private readonly mutationTail = new Map<string, Promise<unknown>>();

  constructor(options: ClientOptions = {}) {
    this.base = options.baseUrl ?? "";
    this.pollInterval = options.pollIntervalMs ?? 250;
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.base + path);
    if (!resp.ok) await raiseFor(resp);
    return (await resp.json()) as T;
  }

  private async postJson<T>(
    path: string,
    payload: unknown,
    method = "POST",
  ): Promise<T> {
    const resp = await this.fetchFn(this.base + path, {
      method,
      headers: JSON_HEADERS,
      body: JSON.stringify(payload),
    });
    if (!resp.ok) await raiseFor(resp);
    return (await resp.json()) as T;
  }

  /** Append to the session's mutation chain; runs after the previous one. */
  private mutate<T>(sid: string, run: () => Promise<T>): Promise<T> {
    const tail = this.mutationTail.get(sid) ?? Promise.resolve();
    const next = tail.then(run, run);
    this.mutationTail.set(
      sid,
      next.then(
        () => undefined,
        () => undefined,
      ),
    );
    return next;
  }

  listCorpus(): Promise<string[]> {
    return this.getJson<{ names: string[] }>("/v1/corpus").then((d) => d.names);
  }

  corpusModel(name: string): Promise<ModelDoc> {
    return this.getJson<ModelDoc>(`/v1/corpus/${encodeURIComponent(name)}`);
  }

  listSessions(): Promise<string[]> {
    return this.getJson<{ sessions: string[] }>("/v1/sessions").then(
      (d) => d.sessions,
    );
  }

  createSession(source: {
    corpus?: string;
    model?: ModelDoc;
  }): Promise<{ session_id: string; root: string }> {
    return this.postJson("/v1/sessions", source);
  }

  tree(sid: string): Promise<TreeDoc> {
    return this.getJson<TreeDoc>(`/v1/sessions/${sid}/tree`);
  }

  setParams(sid: string, nid: string, params: ParamsDoc): Promise<ParamsDoc> {
    return this.mutate(sid, () =>
      this.postJson<{ ok: boolean; params: ParamsDoc }>(
        `/v1/sessions/${sid}/nodes/${nid}/params`,
        params,
        "PUT",
      ).then((d) => d.params),
    );
  }

  decompose(
    sid: string,
    nid: string,
    body: DecomposeRequest = {},
  ): Promise<ReportDoc> {
    return this.mutate(sid, async () => {
      const resp = await this.fetchFn(
        `${this.base}/v1/sessions/${sid}/nodes/${nid}/decompose`,
        { method: "POST", headers: JSON_HEADERS, body: JSON.stringify(body) },
      );
      if (resp.status === 202) {
        const handle = (await resp.json()) as { poll: string };
        return this.awaitJob(handle.poll);
      }
      if (!resp.ok) await raiseFor(resp);
      const doc = (await resp.json()) as { report: ReportDoc };
      return doc.report;
    });
  }

  private async awaitJob(pollPath: string): Promise<ReportDoc> {
    for (;;) {
      await sleep(this.pollInterval);
      const resp = await this.fetchFn(this.base + pollPath);
      if (resp.status === 202) continue;
      if (!resp.ok) await raiseFor(resp);
      const doc = (await resp.json()) as { report: ReportDoc };
      return doc.report;
    }
  }

  /** Side-effect free; intentionally not serialized with mutations. */
  whatIf(
    sid: string,
    nid: string,
    body: WhatIfRequest = {},
  ): Promise<ReportDoc> {
    return this.postJson<{ report: ReportDoc }>(
      `/v1/sessions/${sid}/nodes/${nid}/what-if`,
      body,
    ).then((d) => d.report);
  }

  acceptChildren(
    sid: string,
    nid: string,
    selections: AcceptSelection[],
  ): Promise<AcceptResult> {
    return this.mutate(sid, () =>
      this.postJson<AcceptResult>(
        `/v1/sessions/${sid}/nodes/${nid}/accept-children`,
        { coalitions: selections },
      ),
    );
  }

  terminate(sid: string, nid: string): Promise<void> {
    return this.mutate(sid, () =>
      this.postJson<{ ok: boolean }>(
        `/v1/sessions/${sid}/nodes/${nid}/terminate`,
        {},
      ).then(() => undefined),
    );
  }

  exportArchitecture(sid: string): Promise<ExportDoc> {
    return this.getJson<ExportDoc>(`/v1/sessions/${sid}/export`);
  }

  interactionGraph(sid: string, nid: string): Promise<GraphDoc> {
    return this.getJson<GraphDoc>(
      `/v1/sessions/${sid}/nodes/${nid}/interaction-graph`,
    );
  }
}
