import { describe, expect, it } from "vitest";

import { autoDomain, linePath, linearScale, renderChart, ticks } from "../src/chart.js";
import { Curve } from "../src/types.js";

const curve: Curve = {
  name: "joy",
  points: [
    { x: 1830, y: 0.2 },
    { x: 1840, y: 0.5 },
    { x: 1850, y: 0.1 },
  ],
};

describe("chart geometry", () => {
  it("maps domain endpoints onto range endpoints", () => {
    const scale = linearScale([1830, 1850], [40, 440]);
    expect(scale(1830)).toBe(40);
    expect(scale(1850)).toBe(440);
    expect(scale(1840)).toBe(240);
  });

  it("degenerate domain maps to the range midpoint", () => {
    const scale = linearScale([1830, 1830], [0, 100]);
    expect(scale(1830)).toBe(50);
  });

  it("autoDomain pads and survives flat series", () => {
    const [lo, hi] = autoDomain([curve]);
    expect(lo).toBeLessThan(0.1);
    expect(hi).toBeGreaterThan(0.5);
    const flat = autoDomain([{ name: "f", points: [{ x: 1, y: 0 }] }]);
    expect(flat[0]).toBeLessThan(flat[1]);
  });

  it("builds one path segment per point", () => {
    const x = linearScale([1830, 1850], [0, 400]);
    const y = linearScale([0, 1], [200, 0]);
    const path = linePath(curve, x, y);
    expect(path.match(/[ML]/g)).toHaveLength(3);
    expect(path.startsWith("M")).toBe(true);
  });

  it("renders one marker per data point and one path per multi-point curve", () => {
    const svg = renderChart([curve], {
      width: 460,
      height: 240,
      xDomain: [1830, 1850],
      colors: ["#123456"],
    });
    expect(svg.match(/<circle/g)).toHaveLength(3);
    expect(svg.match(/<path class="line"/g)).toHaveLength(1);
    expect(svg).toContain('stroke="#123456"');
  });

  it("draws single-point curves as markers only", () => {
    const single: Curve = { name: "s", points: [{ x: 1830, y: 0.4 }] };
    const svg = renderChart([single], {
      width: 460,
      height: 240,
      xDomain: [1820, 1840],
      colors: ["#000"],
    });
    expect(svg.match(/<circle/g)).toHaveLength(1);
    expect(svg).not.toContain('<path class="line"');
  });

  it("ticks cover the domain inclusively", () => {
    expect(ticks([0, 3], 4)).toEqual([0, 1, 2, 3]);
    expect(ticks([5, 5], 4)).toEqual([5]);
  });

  it("escapes markup in curve names", () => {
    const sneaky: Curve = { name: '<img src=x onerror="1">', points: [{ x: 1, y: 1 }] };
    const svg = renderChart([sneaky], {
      width: 100,
      height: 100,
      xDomain: [0, 2],
      colors: ["#000"],
    });
    expect(svg).not.toContain("<img");
  });
});
