#!/usr/bin/env node
/**
 * saddlevr-plot: figures from solver trace CSVs.
 *
 *   plot --csv PATH[:LABEL] [--csv PATH[:LABEL] ...] --y COLUMN [--logy] --out PATH
 */

import { PLOTTABLE_COLUMNS } from "./csv.js";
import { PlotSpec, render } from "./plot.js";

const USAGE =
  "usage: saddlevr-plot plot --csv PATH[:LABEL]... --y COLUMN [--logy] --out PATH\n" +
  `  COLUMN: ${PLOTTABLE_COLUMNS.join(" | ")}`;

class UsageError extends Error {}

export function parseArgs(argv: string[]): PlotSpec {
  if (argv[0] !== "plot") {
    throw new UsageError(`unknown command "${argv[0] ?? ""}"`);
  }
  const spec: PlotSpec = { inputs: [], yColumn: "", logY: false, out: "" };
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) throw new UsageError(`${arg} needs a value`);
      return argv[++i];
    };
    switch (arg) {
      case "--csv": {
        const v = next();
        // labels may contain ':'; only the first separator after the path counts,
        // and Windows-style single-letter drive prefixes are left alone
        const sep = v.indexOf(":", 2);
        if (sep === -1) spec.inputs.push({ path: v });
        else spec.inputs.push({ path: v.slice(0, sep), label: v.slice(sep + 1) });
        break;
      }
      case "--y":
        spec.yColumn = next();
        break;
      case "--logy":
        spec.logY = true;
        break;
      case "--out":
        spec.out = next();
        break;
      default:
        throw new UsageError(`unknown flag "${arg}"`);
    }
  }
  if (spec.inputs.length === 0) throw new UsageError("--csv is required");
  if (!spec.yColumn) throw new UsageError("--y is required");
  if (!spec.out) throw new UsageError("--out is required");
  return spec;
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const written = render(spec);
    console.log(written);
    return 0;
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`saddlevr-plot: ${err.message}\n${USAGE}`);
      return 2;
    }
    console.error(`saddlevr-plot: error: ${(err as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && /cli\.(js|ts)$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
