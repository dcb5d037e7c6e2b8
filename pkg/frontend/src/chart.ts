// Dependency-free SVG line charts. All functions are pure string/number
// helpers so chart geometry is unit-testable without a DOM.

import { Curve } from "./types.js";

export interface ChartOptions {
  width: number;
  height: number;
  /** shared x-domain so every panel aligns on the same year axis */
  xDomain: [number, number];
  /** fixed y-domain (e.g. the 1..9 emotion scale); autoscaled when absent */
  yDomain?: [number, number];
  colors: string[];
}

export const MARGIN = { top: 10, right: 14, bottom: 24, left: 42 };

export interface LinearScale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  const fn = ((value: number) =>
    span === 0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0)) as LinearScale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

export function autoDomain(curves: Curve[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const curve of curves) {
    for (const point of curve.points) {
      lo = Math.min(lo, point.y);
      hi = Math.max(hi, point.y);
    }
  }
  if (lo === Infinity) return [0, 1];
  if (lo === hi) {
    // flat series still needs a visible band around it
    const pad = lo === 0 ? 1 : Math.abs(lo) * 0.1;
    return [lo - pad, hi + pad];
  }
  const pad = (hi - lo) * 0.08;
  return [lo - pad, hi + pad];
}

export function ticks(domain: [number, number], count: number): number[] {
  const [lo, hi] = domain;
  if (lo === hi) return [lo];
  const step = (hi - lo) / Math.max(1, count - 1);
  return Array.from({ length: count }, (_, i) => lo + i * step);
}

function fmt(value: number): string {
  if (Number.isInteger(value)) return String(value);
  const abs = Math.abs(value);
  if (abs >= 100) return value.toFixed(0);
  if (abs >= 1) return value.toFixed(2);
  return value.toPrecision(2);
}

export function linePath(curve: Curve, x: LinearScale, y: LinearScale): string {
  return curve.points
    .map((p, i) => `${i === 0 ? "M" : "L"}${x(p.x).toFixed(2)},${y(p.y).toFixed(2)}`)
    .join("");
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

/** Full chart as an SVG string; one polyline + point markers per curve. */
export function renderChart(curves: Curve[], options: ChartOptions): string {
  const { width, height, xDomain, colors } = options;
  const yDomain = options.yDomain ?? autoDomain(curves);
  const x = linearScale(xDomain, [MARGIN.left, width - MARGIN.right]);
  const y = linearScale(yDomain, [height - MARGIN.bottom, MARGIN.top]);

  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${width} ${height}" class="chart" role="img" xmlns="http://www.w3.org/2000/svg">`
  );
  for (const tick of ticks(yDomain, 4)) {
    const ty = y(tick).toFixed(2);
    parts.push(
      `<line class="grid" x1="${MARGIN.left}" x2="${width - MARGIN.right}" y1="${ty}" y2="${ty}"/>`,
      `<text class="tick" x="${MARGIN.left - 6}" y="${ty}" text-anchor="end" dominant-baseline="middle">${esc(fmt(tick))}</text>`
    );
  }
  for (const tick of ticks(xDomain, Math.min(6, xDomain[1] - xDomain[0] + 1))) {
    const tx = x(tick).toFixed(2);
    parts.push(
      `<text class="tick" x="${tx}" y="${height - 6}" text-anchor="middle">${esc(fmt(Math.round(tick)))}</text>`
    );
  }
  parts.push(
    `<line class="axis" x1="${MARGIN.left}" x2="${width - MARGIN.right}" y1="${y.range[0]}" y2="${y.range[0]}"/>`
  );
  curves.forEach((curve, index) => {
    const color = colors[index % colors.length];
    if (curve.points.length > 1) {
      parts.push(`<path class="line" d="${linePath(curve, x, y)}" stroke="${color}"/>`);
    }
    for (const point of curve.points) {
      parts.push(
        `<circle class="dot" cx="${x(point.x).toFixed(2)}" cy="${y(point.y).toFixed(2)}" r="2.6" fill="${color}">` +
          `<title>${esc(curve.name)} ${point.x}: ${esc(fmt(point.y))}</title></circle>`
      );
    }
  });
  parts.push("</svg>");
  return parts.join("");
}
