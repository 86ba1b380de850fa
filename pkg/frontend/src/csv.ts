import * as fs from "fs";

/** Exact column order emitted by the solver harness. */
export const TRACE_HEADER = [
  "pass", "iter", "f_last", "f_avg",
  "gap_last", "gap_avg", "nnz_last", "nnz_avg", "wall_ms",
] as const;

export type TraceColumn = (typeof TRACE_HEADER)[number];

export const PLOTTABLE_COLUMNS = ["gap_last", "gap_avg", "nnz_last", "nnz_avg"] as const;
export type PlottableColumn = (typeof PLOTTABLE_COLUMNS)[number];

export interface TraceRow {
  pass: number;
  iter: number;
  f_last: number;
  f_avg: number;
  gap_last: number;
  gap_avg: number;
  nnz_last: number;
  nnz_avg: number;
  wall_ms: number;
}

export class SchemaError extends Error {}

/** Parse one harness trace CSV; the header must match the schema exactly. */
export function parseTrace(text: string, source = "<csv>"): TraceRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: empty file`);
  }
  const header = lines[0].split(",");
  const expected = TRACE_HEADER.join(",");
  if (header.join(",") !== expected) {
    throw new SchemaError(
      `${source}: unexpected columns [${header.join(", ")}]; expected [${expected}]`,
    );
  }
  const rows: TraceRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== TRACE_HEADER.length) {
      throw new SchemaError(`${source}: line ${i + 1} has ${cells.length} cells`);
    }
    const row = {} as Record<TraceColumn, number>;
    for (let c = 0; c < TRACE_HEADER.length; c++) {
      row[TRACE_HEADER[c]] = Number(cells[c]);
    }
    rows.push(row as TraceRow);
  }
  return rows;
}

export function readTrace(path: string): TraceRow[] {
  return parseTrace(fs.readFileSync(path, "utf-8"), path);
}

export function requireColumn(name: string): PlottableColumn {
  if (!(PLOTTABLE_COLUMNS as readonly string[]).includes(name)) {
    throw new SchemaError(
      `unknown y-column "${name}"; choose one of ${PLOTTABLE_COLUMNS.join(", ")}`,
    );
  }
  return name as PlottableColumn;
}
