/** Minimal deterministic SVG line-chart renderer (no DOM, no timestamps). */

export interface Series {
  label: string;
  points: Array<{ x: number; y: number }>;
}

export interface ChartOptions {
  width?: number;
  height?: number;
  logY?: boolean;
  xLabel?: string;
  yLabel?: string;
}

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

const MARGIN = { left: 78, right: 24, top: 28, bottom: 56 };

function fmt(v: number): string {
  // stable short labels: integers as-is, otherwise trimmed exponent/decimal
  if (Number.isInteger(v) && Math.abs(v) < 1e7) return String(v);
  const abs = Math.abs(v);
  if (abs >= 1e-3 && abs < 1e5) {
    return String(Number(v.toPrecision(4)));
  }
  return v.toExponential(0).replace("+", "");
}

function linearTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const span = hi - lo;
  const step0 = Math.pow(10, Math.floor(Math.log10(span / target)));
  const err = span / target / step0;
  const step = step0 * (err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1);
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

function decadeTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    out.push(Math.pow(10, e));
  }
  return out.length ? out : [lo];
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderChart(series: Series[], opts: ChartOptions = {}): string {
  const width = opts.width ?? 860;
  const height = opts.height ?? 520;
  const logY = opts.logY ?? false;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  // collect the plottable points (log scale drops non-positive values)
  const usable = series.map((s) => ({
    label: s.label,
    points: s.points.filter((p) =>
      Number.isFinite(p.x) && Number.isFinite(p.y) && (!logY || p.y > 0)),
  }));
  const all = usable.flatMap((s) => s.points);
  if (all.length === 0) {
    throw new Error("nothing to plot: no finite points" + (logY ? " (log scale drops y <= 0)" : ""));
  }
  let x0 = Math.min(...all.map((p) => p.x));
  let x1 = Math.max(...all.map((p) => p.x));
  let y0 = Math.min(...all.map((p) => p.y));
  let y1 = Math.max(...all.map((p) => p.y));
  if (x1 === x0) { x0 -= 0.5; x1 += 0.5; }
  if (y1 === y0) {
    if (logY) { y0 /= 2; y1 *= 2; } else { y0 -= 0.5; y1 += 0.5; }
  }

  const sx = (x: number) => MARGIN.left + ((x - x0) / (x1 - x0)) * plotW;
  const sy = logY
    ? (y: number) => MARGIN.top + plotH
        - ((Math.log10(y) - Math.log10(y0)) / (Math.log10(y1) - Math.log10(y0))) * plotH
    : (y: number) => MARGIN.top + plotH - ((y - y0) / (y1 - y0)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  // gridlines and axis ticks
  const xticks = linearTicks(x0, x1);
  const yticks = logY ? decadeTicks(y0, y1) : linearTicks(y0, y1);
  for (const t of xticks) {
    const X = sx(t).toFixed(2);
    parts.push(`<line x1="${X}" y1="${MARGIN.top}" x2="${X}" y2="${MARGIN.top + plotH}" stroke="#e0e0e0"/>`);
    parts.push(`<text x="${X}" y="${MARGIN.top + plotH + 20}" font-size="12" text-anchor="middle">${fmt(t)}</text>`);
  }
  for (const t of yticks) {
    const Y = sy(t).toFixed(2);
    parts.push(`<line x1="${MARGIN.left}" y1="${Y}" x2="${MARGIN.left + plotW}" y2="${Y}" stroke="#e0e0e0"/>`);
    parts.push(`<text x="${MARGIN.left - 8}" y="${Y}" font-size="12" text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`);
  }
  // frame
  parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333"/>`);

  // axis labels
  if (opts.xLabel) {
    parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${height - 14}" font-size="14" text-anchor="middle">${esc(opts.xLabel)}</text>`);
  }
  if (opts.yLabel) {
    const cx = 20, cy = MARGIN.top + plotH / 2;
    parts.push(`<text x="${cx}" y="${cy}" font-size="14" text-anchor="middle" transform="rotate(-90 ${cx} ${cy})">${esc(opts.yLabel)}</text>`);
  }

  // curves: break the polyline wherever a point was dropped
  usable.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const original = series[i].points;
    let run: string[] = [];
    const flush = () => {
      if (run.length >= 2) {
        parts.push(`<polyline fill="none" stroke="${color}" stroke-width="1.8" points="${run.join(" ")}"/>`);
      } else if (run.length === 1) {
        const [px, py] = run[0].split(",");
        parts.push(`<circle cx="${px}" cy="${py}" r="2.2" fill="${color}"/>`);
      }
      run = [];
    };
    for (const p of original) {
      const ok = Number.isFinite(p.x) && Number.isFinite(p.y) && (!logY || p.y > 0);
      if (ok) run.push(`${sx(p.x).toFixed(2)},${sy(p.y).toFixed(2)}`);
      else flush();
    }
    flush();
  });

  // legend, top-right inside the frame
  usable.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const y = MARGIN.top + 16 + i * 20;
    const x = MARGIN.left + plotW - 170;
    parts.push(
      `<g class="legend-entry">` +
      `<line x1="${x}" y1="${y}" x2="${x + 26}" y2="${y}" stroke="${color}" stroke-width="2.2"/>` +
      `<text x="${x + 32}" y="${y + 4}" font-size="13">${esc(s.label)}</text></g>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}
