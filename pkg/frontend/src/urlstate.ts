// ViewState <-> query string, so every result page is a shareable link:
//   ?corpus=demo&word=ember&refs=joy,woe&scale=zscored&panels=similarity,emotion

import { initialState } from "./state.js";
import { ALL_PANELS, PanelKind, ViewState } from "./types.js";

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.corpus) params.set("corpus", state.corpus);
  if (state.word) params.set("word", state.word);
  if (state.refs.length > 0) params.set("refs", state.refs.join(","));
  if (state.scale !== "raw") params.set("scale", state.scale);
  if (state.panels.length !== ALL_PANELS.length) {
    params.set("panels", state.panels.join(","));
  }
  const encoded = params.toString();
  return encoded ? `?${encoded}` : "";
}

export function decodeState(search: string): ViewState {
  const params = new URLSearchParams(search.startsWith("?") ? search.slice(1) : search);
  const base = initialState();
  const corpus = params.get("corpus") ?? "";
  const word = params.get("word") ?? "";
  const refsRaw = params.get("refs") ?? "";
  const refs: string[] = [];
  for (const piece of refsRaw.split(",")) {
    const ref = piece.trim();
    if (ref && ref !== word && !refs.includes(ref)) refs.push(ref);
  }
  const scale = params.get("scale") === "zscored" ? "zscored" : "raw";
  let panels = base.panels;
  const panelsRaw = params.get("panels");
  if (panelsRaw !== null) {
    const wanted = new Set(panelsRaw.split(",").map((p) => p.trim()));
    panels = ALL_PANELS.filter((p: PanelKind) => wanted.has(p));
  }
  return { corpus, word, refs, panels, scale };
}
