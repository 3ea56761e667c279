/** Payload types mirroring the /v1 JSON documents. */

export interface ParamsDoc {
  alpha: number;
  beta: number;
  gamma: number;
  lambda: number;
  k: number;
}

export interface RequirementDoc {
  id: string;
  description?: string;
  general_scenario?: string | null;
}

export interface ConstraintDoc {
  id: string;
  members: string[];
}

export interface TradeoffDoc {
  labels: string[];
  rows: number[][];
}

export interface ModelDoc {
  name: string;
  description?: string;
  functional: RequirementDoc[];
  scenarios: RequirementDoc[];
  constraints: ConstraintDoc[];
  depends: [string, string][];
  derives: [string, string][];
  tradeoff?: TradeoffDoc;
  raw_relevance?: unknown[];
  params?: ParamsDoc;
}

export interface ReportDoc {
  mode: string;
  k: number | null;
  coalitions: string[][];
  utilities: number[];
}

export type NodeStatus = "open" | "decomposed" | "terminated";

export interface TreeNodeDoc {
  id: string;
  name: string;
  status: NodeStatus;
  children: string[];
  params: ParamsDoc | null;
  requirement_ids: string[];
  primitive: ModelDoc;
  last_report: ReportDoc | null;
  accepted_indices: number[];
  warnings: string[];
}

export interface TreeDoc {
  session_id: string;
  root: string;
  nodes: Record<string, TreeNodeDoc>;
}

export interface GraphNodeDoc {
  id: string;
  kind: "functional" | "scenario";
  general_scenario: string | null;
}

export interface GraphEdgeDoc {
  a: string;
  b: string;
  value: number;
}

export interface GraphDoc {
  nodes: GraphNodeDoc[];
  edges: GraphEdgeDoc[];
  dot: string;
}

export interface ExportNodeDoc {
  id: string;
  name: string;
  status: NodeStatus;
  requirements: string[];
  params: ParamsDoc | null;
  children: ExportNodeDoc[];
}

export interface ExportDoc {
  session_id: string;
  root: string;
  architecture: ExportNodeDoc;
  removed_requirements: Record<string, string[]>;
}

export interface RequirementSpec {
  id: string;
  kind: "functional" | "scenario";
  description?: string;
  general_scenario?: string | null;
}

export interface AcceptSelection {
  index: number;
  add_requirements?: RequirementSpec[];
  add_constraints?: ConstraintDoc[];
  add_depends?: [string, string][];
  add_derives?: [string, string][];
}

export interface AcceptResult {
  children: string[];
  warnings: Record<string, string[]>;
}

export interface DecomposeRequest {
  mode?: "k" | "exact";
  k?: number | null;
  cap?: number;
}

export interface WhatIfRequest extends DecomposeRequest {
  params?: ParamsDoc;
}
