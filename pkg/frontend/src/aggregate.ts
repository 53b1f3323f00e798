/** Aggregation of sweep records into per-scheme mean curves. */

import { SweepRecord } from "./csv";

export interface CurvePoint {
  x: number;
  mean: number;
  stderr: number;
  count: number;
}

export interface Curve {
  scenario: string;
  scheme: string;
  points: CurvePoint[];
}

export class NoDataError extends Error {}

function meanStderr(values: number[]): { mean: number; stderr: number } {
  const n = values.length;
  const mean = values.reduce((a, b) => a + b, 0) / n;
  if (n < 2) return { mean, stderr: 0 };
  const varSum = values.reduce((a, b) => a + (b - mean) ** 2, 0) / (n - 1);
  return { mean, stderr: Math.sqrt(varSum / n) };
}

export function scenariosIn(records: SweepRecord[]): string[] {
  return [...new Set(records.map((r) => r.scenario))].sort();
}

/** Mean capacity vs transmit power, one curve per scheme, for one scenario. */
export function aggregateByPower(records: SweepRecord[], scenario: string): Curve[] {
  const filtered = records.filter((r) => r.scenario === scenario);
  if (filtered.length === 0) {
    throw new NoDataError(`no data for scenario '${scenario}'`);
  }
  const bySchemeX = new Map<string, Map<number, number[]>>();
  for (const r of filtered) {
    if (!bySchemeX.has(r.scheme)) bySchemeX.set(r.scheme, new Map());
    const byX = bySchemeX.get(r.scheme)!;
    if (!byX.has(r.ptDb)) byX.set(r.ptDb, []);
    byX.get(r.ptDb)!.push(r.capacityBpsHz);
  }
  const curves: Curve[] = [];
  for (const [scheme, byX] of [...bySchemeX.entries()].sort()) {
    const points = [...byX.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([x, values]) => ({ x, count: values.length, ...meanStderr(values) }));
    curves.push({ scenario, scheme, points });
  }
  return curves;
}

/**
 * Mean capacity vs user count: each input file contributes one x position
 * (its user count, supplied by the caller because the CSV schema does not
 * carry it) evaluated at one power point.
 */
export function aggregateByUsers(
  inputs: { records: SweepRecord[]; users: number }[],
  atPtDb?: number,
): { curves: Curve[]; ptDb: number } {
  if (inputs.length === 0) throw new NoDataError("no input files");
  const grids = inputs.map((inp) => new Set(inp.records.map((r) => r.ptDb)));
  const shared = [...grids[0]].filter((pt) => grids.every((g) => g.has(pt)));
  if (shared.length === 0) throw new NoDataError("inputs share no power point");
  const pt = atPtDb ?? Math.max(...shared);
  if (!shared.includes(pt)) {
    throw new NoDataError(`power point ${pt} dB missing from some input`);
  }
  const scenario = scenariosIn(inputs.flatMap((i) => i.records)).join("+");
  const bySchemeX = new Map<string, Map<number, number[]>>();
  for (const { records, users } of inputs) {
    for (const r of records) {
      if (r.ptDb !== pt) continue;
      if (!bySchemeX.has(r.scheme)) bySchemeX.set(r.scheme, new Map());
      const byX = bySchemeX.get(r.scheme)!;
      if (!byX.has(users)) byX.set(users, []);
      byX.get(users)!.push(r.capacityBpsHz);
    }
  }
  const curves: Curve[] = [];
  for (const [scheme, byX] of [...bySchemeX.entries()].sort()) {
    const points = [...byX.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([x, values]) => ({ x, count: values.length, ...meanStderr(values) }));
    curves.push({ scenario, scheme, points });
  }
  if (curves.length === 0) throw new NoDataError("no records at the chosen power point");
  return { curves, ptDb: pt };
}

/**
 * True when the named schemes are ordered top-to-bottom at every shared x
 * (used to verify e.g. fully_digital >= hybrid >= baseline from curve data).
 */
export function orderingHolds(curves: Curve[], order: string[]): boolean {
  const bySchemes = new Map(curves.map((c) => [c.scheme, c]));
  for (const scheme of order) {
    if (!bySchemes.has(scheme)) return false;
  }
  const xs = order.map((s) => new Set(bySchemes.get(s)!.points.map((p) => p.x)));
  const shared = [...xs[0]].filter((x) => xs.every((set) => set.has(x)));
  if (shared.length === 0) return false;
  for (const x of shared) {
    for (let i = 0; i + 1 < order.length; i++) {
      const hi = bySchemes.get(order[i])!.points.find((p) => p.x === x)!;
      const lo = bySchemes.get(order[i + 1])!.points.find((p) => p.x === x)!;
      if (hi.mean < lo.mean) return false;
    }
  }
  return true;
}
