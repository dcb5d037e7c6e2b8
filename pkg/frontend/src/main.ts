// DOM wiring: owns the ViewState, orchestrates fetches (stale responses are
// discarded by sequence number), and materializes the pure render plan.

import { getCorpora, getEnvelope, contextUrl, emotionUrl, frequencyUrl, mostSimilarUrl, similarityUrl } from "./api.js";
import { renderChart } from "./chart.js";
import { PanelSpec, renderPlan, sharedXDomain } from "./panels.js";
import { addReference, initialState, removeReference, setQuery, setReferences, togglePanel, toggleScale } from "./state.js";
import { ALL_PANELS, CorpusInfo, PanelKind, ViewState, emptyData, FetchedData } from "./types.js";
import { decodeState, encodeState } from "./urlstate.js";

const API_BASE = "";
const REFERENCE_COUNT = 5;
const CONTEXT_COUNT = 6;

let state: ViewState = initialState();
let data: FetchedData = emptyData();
let corpora: CorpusInfo[] = [];
let banner = "";
let notice = "";
let searchSeq = 0;

const $ = <T extends HTMLElement>(selector: string): T => {
  const node = document.querySelector(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node as T;
};

function syncUrl(): void {
  history.replaceState(null, "", `${location.pathname}${encodeState(state)}`);
}

function sliceDomain(): [number, number] {
  const info = corpora.find((c) => c.corpus_id === state.corpus);
  if (!info || info.slices.length === 0) return [0, 1];
  const labels = info.slices.map((s) => s.label);
  return [Math.min(...labels), Math.max(...labels)];
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function panelHtml(spec: PanelSpec): string {
  const xDomain = sharedXDomain(renderPlan(state, data), sliceDomain());
  const chart = spec.emptyMessage
    ? `<p class="empty">${esc(spec.emptyMessage)}</p>`
    : renderChart(spec.curves, {
        width: 460,
        height: 240,
        xDomain,
        yDomain: spec.yDomain,
        colors: spec.colors,
      });
  const legend = spec.legend
    .map(
      (entry) =>
        `<span class="chip" style="--chip:${entry.color}">${esc(entry.label)}` +
        (entry.removable
          ? `<button class="remove" data-remove-ref="${esc(entry.label)}" title="remove">×</button>`
          : "") +
        `</span>`
    )
    .join("");
  const extras =
    spec.kind === "similarity"
      ? `<form class="addref" data-addref-form>
           <input name="ref" placeholder="add reference word" autocomplete="off">
           <button type="submit">add</button>
         </form>`
      : spec.kind === "emotion"
        ? `<button class="scale-toggle" data-toggle-scale>switch to ${state.scale === "raw" ? "centered/scaled" : "raw"} axis</button>`
        : "";
  return `<section class="panel" data-panel="${spec.kind}">
    <h2>${esc(spec.title)}</h2>
    <div class="legend">${legend}</div>
    ${chart}
    ${extras}
  </section>`;
}

function render(): void {
  $("#banner").textContent = banner;
  $("#banner").className = banner ? "banner visible" : "banner";
  $("#notice").textContent = notice;
  $("#notice").className = notice ? "notice visible" : "notice";
  const container = $("#panels");
  if (banner || !state.word) {
    container.innerHTML = "";
    return;
  }
  container.innerHTML = renderPlan(state, data).map(panelHtml).join("");
}

async function fetchSimilarityCurve(ref: string, seq: number): Promise<boolean> {
  const result = await getEnvelope(similarityUrl(API_BASE, state.corpus, state.word, ref));
  if (seq !== searchSeq) return false;
  if (result.ok && result.value.curves.length > 0) {
    data.similarity.set(ref, { name: ref, points: result.value.curves[0].points });
    return true;
  }
  return false;
}

async function runSearch(adoptReferences: boolean): Promise<void> {
  const seq = ++searchSeq;
  banner = "";
  notice = "";
  data = emptyData();
  render();
  if (!state.word || !state.corpus) return;

  const [emotion, frequency, context] = await Promise.all([
    getEnvelope(emotionUrl(API_BASE, state.corpus, state.word)),
    getEnvelope(frequencyUrl(API_BASE, state.corpus, state.word)),
    getEnvelope(contextUrl(API_BASE, state.corpus, state.word, CONTEXT_COUNT)),
  ]);
  if (seq !== searchSeq) return;
  const failed = [emotion, frequency, context].find((r) => !r.ok);
  if (failed && !failed.ok && failed.error.kind !== "Other") {
    banner = failed.error.message;
    render();
    return;
  }
  data.emotion = emotion.ok ? emotion.value : null;
  data.frequency = frequency.ok ? frequency.value : null;
  data.context = context.ok ? context.value : null;

  if (adoptReferences) {
    const suggested = await getEnvelope(
      mostSimilarUrl(API_BASE, state.corpus, state.word, REFERENCE_COUNT)
    );
    if (seq !== searchSeq) return;
    if (suggested.ok && suggested.value.ranking) {
      state = setReferences(state, suggested.value.ranking.map((r) => r.word));
      syncUrl();
    }
  }
  await Promise.all(state.refs.map((ref) => fetchSimilarityCurve(ref, seq)));
  if (seq !== searchSeq) return;
  render();
}

async function onAddReference(ref: string): Promise<void> {
  const added = addReference(state, ref.trim());
  if (added.notice) {
    notice = added.notice;
    render();
    return;
  }
  if (added.state === state) return;
  const previous = state;
  state = added.state;
  const ok = await fetchSimilarityCurve(ref.trim(), searchSeq);
  if (!ok) {
    state = previous;
    notice = `no similarity data for "${ref.trim()}" — is it in the corpus?`;
  } else {
    notice = "";
    syncUrl();
  }
  render();
}

function onRemoveReference(ref: string): void {
  state = removeReference(state, ref);
  data.similarity.delete(ref);
  notice = "";
  syncUrl();
  render();
}

function bindEvents(): void {
  $("#search-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const corpus = ($("#corpus-select") as HTMLSelectElement).value;
    const word = ($("#word-input") as HTMLInputElement).value.trim();
    state = setQuery({ ...state, refs: [] }, corpus, word);
    syncUrl();
    void runSearch(true);
  });

  $("#panel-toggles").addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement;
    if (target.dataset.panelToggle) {
      state = togglePanel(state, target.dataset.panelToggle as PanelKind);
      syncUrl();
      render();
    }
  });

  $("#panels").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const ref = target.dataset.removeRef;
    if (ref !== undefined) {
      onRemoveReference(ref);
      return;
    }
    if (target.dataset.toggleScale !== undefined) {
      state = toggleScale(state);
      syncUrl();
      render();
    }
  });

  $("#panels").addEventListener("submit", (event) => {
    const form = event.target as HTMLFormElement;
    if (form.dataset.addrefForm !== undefined) {
      event.preventDefault();
      const input = form.elements.namedItem("ref") as HTMLInputElement;
      void onAddReference(input.value);
      input.value = "";
    }
  });

  window.addEventListener("popstate", () => {
    state = decodeState(location.search);
    reflectForm();
    void runSearch(state.refs.length === 0);
  });
}

function reflectForm(): void {
  ($("#corpus-select") as HTMLSelectElement).value = state.corpus;
  ($("#word-input") as HTMLInputElement).value = state.word;
  for (const panel of ALL_PANELS) {
    const box = document.querySelector<HTMLInputElement>(`[data-panel-toggle="${panel}"]`);
    if (box) box.checked = state.panels.includes(panel);
  }
}

async function boot(): Promise<void> {
  bindEvents();
  const listed = await getCorpora(API_BASE);
  corpora = listed.ok ? listed.value : [];
  const select = $("#corpus-select") as HTMLSelectElement;
  select.innerHTML = corpora
    .map((c) => `<option value="${esc(c.corpus_id)}">${esc(c.corpus_id)} (${esc(c.language)})</option>`)
    .join("");
  state = decodeState(location.search);
  if (!state.corpus && corpora.length > 0) {
    state = { ...state, corpus: corpora[0].corpus_id };
  }
  reflectForm();
  if (state.word) {
    await runSearch(state.refs.length === 0);
  } else {
    render();
  }
}

void boot();
