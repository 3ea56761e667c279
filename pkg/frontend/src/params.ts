/** Parameter-panel logic: weight validation and normalization.

The client never submits weights off the simplex; the tolerance mirrors
the service's 422 guard so anything accepted here is accepted there.
*/

import type { ParamsDoc } from "./types.js";

export const WEIGHT_SUM_TOL = 1e-9;

export interface Weights {
  alpha: number;
  beta: number;
  gamma: number;
}

export function weightViolations(w: Weights): string[] {
  const issues: string[] = [];
  for (const name of ["alpha", "beta", "gamma"] as const) {
    const value = w[name];
    if (!Number.isFinite(value) || value <= 0) {
      issues.push(`${name} must be a positive number`);
    }
  }
  if (issues.length === 0) {
    const sum = w.alpha + w.beta + w.gamma;
    if (Math.abs(sum - 1) > WEIGHT_SUM_TOL) {
      issues.push(`alpha+beta+gamma must equal 1, got ${sum}`);
    }
  }
  return issues;
}

/** Scale positive weights onto the simplex; null if that is impossible. */
export function normalizeWeights(w: Weights): Weights | null {
  if (
    !Number.isFinite(w.alpha) || w.alpha <= 0 ||
    !Number.isFinite(w.beta) || w.beta <= 0 ||
    !Number.isFinite(w.gamma) || w.gamma <= 0
  ) {
    return null;
  }
  const sum = w.alpha + w.beta + w.gamma;
  return { alpha: w.alpha / sum, beta: w.beta / sum, gamma: w.gamma / sum };
}

export function paramsViolations(p: ParamsDoc): string[] {
  const issues = weightViolations(p);
  if (!Number.isFinite(p.lambda) || p.lambda >= 0) {
    issues.push("lambda must be a negative number");
  }
  if (!Number.isInteger(p.k) || p.k < 1) {
    issues.push("k must be a positive integer");
  }
  return issues;
}
