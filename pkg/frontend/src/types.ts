// Shared shapes: API responses and the exploration view state.

export interface Point {
  x: number;
  y: number;
}

export interface Curve {
  name: string;
  points: Point[];
}

export interface Envelope {
  corpus: string;
  words: string[];
  curves: Curve[];
  meta: { scale: string | null; k: number | null; d: number | null };
  ranking?: { word: string; score: number }[];
}

export interface SliceInfo {
  label: number;
  start_year: number;
  end_year: number;
}

export interface CorpusInfo {
  corpus_id: string;
  language: string;
  slices: SliceInfo[];
}

export type PanelKind = "similarity" | "emotion" | "context" | "frequency";

export const ALL_PANELS: PanelKind[] = ["similarity", "emotion", "context", "frequency"];

export type EmotionScale = "raw" | "zscored";

export interface ViewState {
  corpus: string;
  word: string;
  /** ordered, de-duplicated, never contains the query word itself */
  refs: string[];
  panels: PanelKind[];
  scale: EmotionScale;
}

/** Everything the result page has fetched; panels render purely from this. */
export interface FetchedData {
  /** similarity curves keyed by reference word */
  similarity: Map<string, Curve>;
  emotion: Envelope | null;
  context: Envelope | null;
  frequency: Envelope | null;
}

export function emptyData(): FetchedData {
  return { similarity: new Map(), emotion: null, context: null, frequency: null };
}
