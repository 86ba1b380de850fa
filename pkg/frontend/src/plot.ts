import * as fs from "fs";
import * as path from "path";

import { PlottableColumn, readTrace, requireColumn } from "./csv.js";
import { renderChart, Series } from "./svg.js";

export interface PlotSpec {
  /** (csv path, legend label) pairs; the label defaults to the file stem. */
  inputs: Array<{ path: string; label?: string }>;
  yColumn: PlottableColumn | string;
  logY: boolean;
  out: string;
}

/** Render one figure from harness trace CSVs; returns the written path. */
export function render(spec: PlotSpec): string {
  if (spec.inputs.length === 0) {
    throw new Error("at least one --csv input is required");
  }
  const column = requireColumn(spec.yColumn);
  const series: Series[] = spec.inputs.map((input) => {
    const rows = readTrace(input.path);
    return {
      label: input.label ?? path.basename(input.path).replace(/\.[^.]*$/, ""),
      points: rows.map((r) => ({ x: r.pass, y: r[column] })),
    };
  });
  const svg = renderChart(series, {
    logY: spec.logY,
    xLabel: "passes over the data",
    yLabel: column,
  });
  fs.writeFileSync(spec.out, svg + "\n");
  return spec.out;
}
