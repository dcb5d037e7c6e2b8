// Pure render plan: ViewState + fetched responses -> panel specifications.
// The DOM layer only materializes what this function returns, so panel
// content is reproducible from (state, data) alone.

import { zscaleCurve } from "./transform.js";
import { Curve, FetchedData, PanelKind, ViewState } from "./types.js";

export const PALETTE = [
  "#2563eb",
  "#dc2626",
  "#059669",
  "#d97706",
  "#7c3aed",
  "#0891b2",
  "#be185d",
  "#4d7c0f",
  "#b45309",
  "#1e40af",
];

export const EMOTION_COLORS: Record<string, string> = {
  valence: "#2563eb",
  arousal: "#d97706",
  dominance: "#059669",
};

export interface LegendEntry {
  label: string;
  color: string;
  removable: boolean;
}

export interface PanelSpec {
  kind: PanelKind;
  title: string;
  curves: Curve[];
  colors: string[];
  legend: LegendEntry[];
  yDomain?: [number, number];
  emptyMessage?: string;
}

function similarityPanel(state: ViewState, data: FetchedData): PanelSpec {
  const curves: Curve[] = [];
  const colors: string[] = [];
  const legend: LegendEntry[] = [];
  state.refs.forEach((ref, index) => {
    const color = PALETTE[index % PALETTE.length];
    legend.push({ label: ref, color, removable: true });
    const curve = data.similarity.get(ref);
    if (curve) {
      curves.push({ name: ref, points: curve.points });
      colors.push(color);
    }
  });
  return {
    kind: "similarity",
    title: `similarity of “${state.word}” to reference words`,
    curves,
    colors,
    legend,
    yDomain: [-1, 1],
    emptyMessage: state.refs.length === 0 ? "no reference words yet — add one below" : undefined,
  };
}

function emotionPanel(state: ViewState, data: FetchedData): PanelSpec {
  const raw = data.emotion?.curves ?? [];
  const curves = state.scale === "zscored" ? raw.map(zscaleCurve) : raw;
  const colors = curves.map((c) => EMOTION_COLORS[c.name] ?? PALETTE[0]);
  return {
    kind: "emotion",
    title: `emotion of “${state.word}” (${state.scale === "zscored" ? "centered and scaled" : "raw 1–9 scale"})`,
    curves,
    colors,
    legend: curves.map((c, i) => ({ label: c.name, color: colors[i], removable: false })),
    yDomain: state.scale === "raw" ? [1, 9] : undefined,
    emptyMessage: raw.length === 0 || raw.every((c) => c.points.length === 0)
      ? "no induced emotion values for this word"
      : undefined,
  };
}

function contextPanel(state: ViewState, data: FetchedData): PanelSpec {
  const curves = data.context?.curves ?? [];
  const colors = curves.map((_, i) => PALETTE[i % PALETTE.length]);
  return {
    kind: "context",
    title: `typical contexts of “${state.word}” (association strength)`,
    curves,
    colors,
    legend: curves.map((c, i) => ({ label: c.name, color: colors[i], removable: false })),
    emptyMessage: curves.length === 0 ? "no context words cached for this word" : undefined,
  };
}

function frequencyPanel(state: ViewState, data: FetchedData): PanelSpec {
  const curves = data.frequency?.curves ?? [];
  return {
    kind: "frequency",
    title: `relative frequency of “${state.word}”`,
    curves,
    colors: [PALETTE[0]],
    legend: [],
    emptyMessage: curves.length === 0 ? "no frequency data" : undefined,
  };
}

export function renderPlan(state: ViewState, data: FetchedData): PanelSpec[] {
  const builders: Record<PanelKind, (s: ViewState, d: FetchedData) => PanelSpec> = {
    similarity: similarityPanel,
    emotion: emotionPanel,
    context: contextPanel,
    frequency: frequencyPanel,
  };
  return state.panels.map((kind) => builders[kind](state, data));
}

/** Shared x-domain across panels: the span of every plotted slice year. */
export function sharedXDomain(specs: PanelSpec[], fallback: [number, number]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const spec of specs) {
    for (const curve of spec.curves) {
      for (const point of curve.points) {
        lo = Math.min(lo, point.x);
        hi = Math.max(hi, point.x);
      }
    }
  }
  if (lo === Infinity) return fallback;
  if (lo === hi) return [lo - 1, hi + 1];
  return [lo, hi];
}
