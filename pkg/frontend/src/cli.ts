#!/usr/bin/env node
/**
 * plot --csv <path> [--csv <path> ...] --x pt_db|users --out <image>
 *
 * Renders one SVG per scenario found in the inputs. In users mode every CSV
 * stands for one user count, passed as a matching --users flag (the sweep
 * CSV schema has no user-count column), evaluated at --at-pt-db (default:
 * the largest power point shared by all inputs).
 */

import * as fs from "fs";
import * as path from "path";

import { aggregateByPower, aggregateByUsers, Curve, NoDataError, scenariosIn } from "./aggregate";
import { parseSweepCsv, SchemaError, SweepRecord } from "./csv";
import { renderCurves } from "./render";

export class UsageError extends Error {}

export interface PlotArgs {
  csv: string[];
  x: "pt_db" | "users";
  out: string;
  users: number[];
  atPtDb?: number;
}

export function parseArgs(argv: string[]): PlotArgs {
  if (argv[0] !== "plot") {
    throw new UsageError("usage: plot --csv <path> [--csv <path> ...] --x pt_db|users --out <image>");
  }
  const args: PlotArgs = { csv: [], x: "pt_db", out: "", users: [] };
  let xSeen = false;
  for (let i = 1; i < argv.length; i++) {
    const flag = argv[i];
    const value = argv[i + 1];
    const need = () => {
      if (value === undefined) throw new UsageError(`${flag} needs a value`);
      i++;
      return value;
    };
    switch (flag) {
      case "--csv":
        args.csv.push(need());
        break;
      case "--x": {
        const v = need();
        if (v !== "pt_db" && v !== "users") {
          throw new UsageError(`--x must be pt_db or users, got '${v}'`);
        }
        args.x = v;
        xSeen = true;
        break;
      }
      case "--out":
        args.out = need();
        break;
      case "--users":
        args.users.push(Number(need()));
        break;
      case "--at-pt-db":
        args.atPtDb = Number(need());
        break;
      default:
        throw new UsageError(`unknown flag '${flag}'`);
    }
  }
  if (args.csv.length === 0) throw new UsageError("at least one --csv is required");
  if (!xSeen) throw new UsageError("--x pt_db|users is required");
  if (!args.out) throw new UsageError("--out is required");
  if (args.x === "users" && args.users.length !== args.csv.length) {
    throw new UsageError("users mode needs one --users value per --csv input");
  }
  return args;
}

function outPath(base: string, scenario: string, multi: boolean): string {
  if (!multi) return base;
  const ext = path.extname(base) || ".svg";
  const stem = base.slice(0, base.length - path.extname(base).length);
  return `${stem}_${scenario}${ext}`;
}

function writeSvg(file: string, svg: string): void {
  if (path.extname(file).toLowerCase() !== ".svg") {
    throw new UsageError(`unsupported output extension on '${file}' (only .svg)`);
  }
  fs.writeFileSync(file, svg, "utf-8");
}

export function runPlot(args: PlotArgs): string[] {
  const inputs: { records: SweepRecord[]; source: string }[] = args.csv.map((file) => ({
    records: parseSweepCsv(fs.readFileSync(file, "utf-8"), file),
    source: file,
  }));
  const written: string[] = [];
  if (args.x === "pt_db") {
    const all = inputs.flatMap((i) => i.records);
    const scenarios = scenariosIn(all);
    if (scenarios.length === 0) throw new NoDataError("inputs contain no records");
    for (const scenario of scenarios) {
      const curves: Curve[] = aggregateByPower(all, scenario);
      const svg = renderCurves(curves, {
        title: `${scenario}: capacity vs total power`,
        xLabel: "total power (dB)",
      });
      const file = outPath(args.out, scenario, scenarios.length > 1);
      writeSvg(file, svg);
      written.push(file);
    }
  } else {
    const { curves, ptDb } = aggregateByUsers(
      inputs.map((inp, k) => ({ records: inp.records, users: args.users[k] })),
      args.atPtDb,
    );
    const svg = renderCurves(curves, {
      title: `capacity vs users at ${ptDb} dB`,
      xLabel: "users",
    });
    writeSvg(args.out, svg);
    written.push(args.out);
  }
  return written;
}

export function main(argv: string[]): number {
  try {
    const files = runPlot(parseArgs(argv));
    for (const file of files) console.log(`wrote ${file}`);
    return 0;
  } catch (err) {
    if (err instanceof UsageError || err instanceof SchemaError || err instanceof NoDataError) {
      console.error(`error: ${(err as Error).message}`);
      return 1;
    }
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
