import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { TRACE_HEADER } from "../src/csv.js";
import { render } from "../src/plot.js";
import { renderChart } from "../src/svg.js";

let dir: string;

function writeTrace(name: string, gapScale = 1.0): string {
  const lines = [TRACE_HEADER.join(",")];
  for (let k = 1; k <= 40; k++) {
    const pass = k * 0.25;
    const gap = gapScale * Math.exp(-0.5 * pass);
    const nnz = Math.max(5, 60 - 2 * k);
    lines.push(`${pass},${k * 100},${1 + gap},${1 + 0.8 * gap},${gap},${0.8 * gap},${nnz},${nnz + 10},${k * 2.5}`);
  }
  const p = path.join(dir, name);
  fs.writeFileSync(p, lines.join("\n") + "\n");
  return p;
}

beforeAll(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "saddlevr-plots-"));
});

afterAll(() => {
  fs.rmSync(dir, { recursive: true, force: true });
});

const legendCount = (svg: string) => (svg.match(/class="legend-entry"/g) ?? []).length;

describe("render", () => {
  it("writes a gap figure with one legend entry per csv", () => {
    const a = writeTrace("a.csv");
    const b = writeTrace("b.csv", 0.3);
    const out = path.join(dir, "gap.svg");
    render({ inputs: [{ path: a, label: "run A" }, { path: b, label: "run B" }],
             yColumn: "gap_avg", logY: true, out });
    const svg = fs.readFileSync(out, "utf-8");
    expect(legendCount(svg)).toBe(2);
    expect(svg).toContain("run A");
    expect(svg).toContain("<polyline");
    expect(svg).toContain('width="860" height="520"');
  });

  it("defaults labels to file stems", () => {
    const a = writeTrace("trace_sigma0.csv");
    const out = path.join(dir, "d.svg");
    render({ inputs: [{ path: a }], yColumn: "nnz_avg", logY: false, out });
    expect(fs.readFileSync(out, "utf-8")).toContain("trace_sigma0");
  });

  it("is deterministic for a fixed spec", () => {
    const a = writeTrace("det.csv");
    const out1 = path.join(dir, "d1.svg");
    const out2 = path.join(dir, "d2.svg");
    render({ inputs: [{ path: a }], yColumn: "gap_last", logY: true, out: out1 });
    render({ inputs: [{ path: a }], yColumn: "gap_last", logY: true, out: out2 });
    expect(fs.readFileSync(out1, "utf-8")).toBe(fs.readFileSync(out2, "utf-8"));
  });

  it("rejects a non-plottable column by name", () => {
    const a = writeTrace("c.csv");
    expect(() => render({ inputs: [{ path: a }], yColumn: "wall_ms", logY: false,
                          out: path.join(dir, "x.svg") }))
      .toThrowError(/unknown y-column "wall_ms"/);
  });

  it("rejects a schema-mismatched csv", () => {
    const p = path.join(dir, "bad.csv");
    fs.writeFileSync(p, "a,b,c\n1,2,3\n");
    expect(() => render({ inputs: [{ path: p }], yColumn: "gap_avg", logY: false,
                          out: path.join(dir, "y.svg") }))
      .toThrowError(/expected \[pass,iter/);
  });
});

describe("renderChart", () => {
  it("uses decade ticks on the log scale", () => {
    const svg = renderChart(
      [{ label: "s", points: [{ x: 1, y: 1e-4 }, { x: 2, y: 1e-1 }, { x: 3, y: 5 }] }],
      { logY: true });
    expect(svg).toContain(">1e-4<");
    expect(svg).toContain(">0.01<");
    expect(svg).toContain(">1<");
  });

  it("drops non-positive values on the log scale and splits the line", () => {
    const svg = renderChart(
      [{ label: "s", points: [
        { x: 1, y: 1.0 }, { x: 2, y: 0.5 }, { x: 3, y: 0 },
        { x: 4, y: 0.2 }, { x: 5, y: 0.1 }] }],
      { logY: true });
    expect((svg.match(/<polyline/g) ?? []).length).toBe(2);
  });

  it("fails loudly when nothing is plottable", () => {
    expect(() => renderChart([{ label: "s", points: [{ x: 1, y: -1 }] }], { logY: true }))
      .toThrowError(/nothing to plot/);
  });

  it("escapes markup in labels", () => {
    const svg = renderChart(
      [{ label: "<run&>", points: [{ x: 0, y: 1 }, { x: 1, y: 2 }] }], {});
    expect(svg).toContain("&lt;run&amp;&gt;");
  });
});
