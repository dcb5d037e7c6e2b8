// Series transforms applied client-side. Points pass through one-to-one:
// nothing here ever interpolates or invents a data point.

import { Curve, Point } from "./types.js";

/** Center and scale to mean 0 / population std 1; constant series map to zeros. */
export function zscale(values: number[]): number[] {
  if (values.length === 0) return [];
  const mean = values.reduce((a, b) => a + b, 0) / values.length;
  const variance = values.reduce((a, b) => a + (b - mean) * (b - mean), 0) / values.length;
  const std = Math.sqrt(variance);
  if (std === 0) return values.map(() => 0);
  return values.map((v) => (v - mean) / std);
}

export function zscaleCurve(curve: Curve): Curve {
  const scaled = zscale(curve.points.map((p) => p.y));
  const points: Point[] = curve.points.map((p, i) => ({ x: p.x, y: scaled[i] }));
  return { name: curve.name, points };
}
