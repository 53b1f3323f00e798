/**
 * Reader for the simulator's sweep CSV files.
 *
 * The expected schema is the exact header the harness writes; anything else
 * (missing column, extra column, unparseable number) raises a SchemaError
 * naming the problem so a stale or foreign file never renders silently.
 */

import { z } from "zod";

export const EXPECTED_HEADER = [
  "scenario",
  "scheme",
  "pt_db",
  "realization",
  "capacity_bps_hz",
  "min_sinr_db",
  "wall_ms",
] as const;

export interface SweepRecord {
  scenario: string;
  scheme: string;
  ptDb: number;
  realization: number;
  capacityBpsHz: number;
  minSinrDb: number;
  wallMs: number;
}

export class SchemaError extends Error {}

/** Parses the harness's float format, including inf/-inf/nan spellings. */
function parseFloatStrict(token: string, column: string, line: number): number {
  const t = token.trim().toLowerCase();
  if (t === "inf" || t === "+inf" || t === "infinity") return Infinity;
  if (t === "-inf" || t === "-infinity") return -Infinity;
  if (t === "nan") return NaN;
  const value = Number(token);
  if (token.trim() === "" || Number.isNaN(value)) {
    throw new SchemaError(`line ${line}: column '${column}' is not a number: '${token}'`);
  }
  return value;
}

const rowSchema = z.object({
  scenario: z.string().min(1),
  scheme: z.string().min(1),
  ptDb: z.number(),
  realization: z.number().int().nonnegative(),
  capacityBpsHz: z.number().nonnegative(),
  minSinrDb: z.number(),
  wallMs: z.number(),
});

export function parseSweepCsv(text: string, source = "<csv>"): SweepRecord[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: file is empty`);
  }
  const header = lines[0].split(",");
  for (const column of EXPECTED_HEADER) {
    if (!header.includes(column)) {
      throw new SchemaError(`${source}: missing column '${column}'`);
    }
  }
  for (const column of header) {
    if (!(EXPECTED_HEADER as readonly string[]).includes(column)) {
      throw new SchemaError(`${source}: unexpected column '${column}'`);
    }
  }
  const index = (name: string) => header.indexOf(name);
  const records: SweepRecord[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new SchemaError(
        `${source}: line ${i + 1} has ${parts.length} fields, expected ${header.length}`,
      );
    }
    const lineNo = i + 1;
    const raw = {
      scenario: parts[index("scenario")],
      scheme: parts[index("scheme")],
      ptDb: parseFloatStrict(parts[index("pt_db")], "pt_db", lineNo),
      realization: parseFloatStrict(parts[index("realization")], "realization", lineNo),
      capacityBpsHz: parseFloatStrict(
        parts[index("capacity_bps_hz")], "capacity_bps_hz", lineNo),
      minSinrDb: parseFloatStrict(parts[index("min_sinr_db")], "min_sinr_db", lineNo),
      wallMs: parseFloatStrict(parts[index("wall_ms")], "wall_ms", lineNo),
    };
    const checked = rowSchema.safeParse(raw);
    if (!checked.success) {
      const issue = checked.error.issues[0];
      throw new SchemaError(
        `${source}: line ${lineNo}: ${issue.path.join(".")}: ${issue.message}`,
      );
    }
    records.push(checked.data);
  }
  return records;
}
