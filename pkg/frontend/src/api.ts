// REST client: pure URL builders plus a thin fetch wrapper that surfaces the
// API's 404 error payloads ({error, word|corpus}) as typed failures.

import { CorpusInfo, Envelope } from "./types.js";

export interface ApiError {
  kind: "UnknownWord" | "UnknownCorpus" | "Other";
  message: string;
}

export type ApiResult<T> = { ok: true; value: T } | { ok: false; error: ApiError };

export function corporaUrl(base: string): string {
  return `${base}/api/corpora`;
}

export function similarityUrl(base: string, corpus: string, word1: string, word2: string): string {
  const q = new URLSearchParams({ corpus, word1, word2 });
  return `${base}/api/similarity?${q}`;
}

export function emotionUrl(base: string, corpus: string, word: string): string {
  // always fetch raw; z-scaling is re-derived client-side so toggling is instant
  const q = new URLSearchParams({ corpus, word, scale: "raw" });
  return `${base}/api/emotion?${q}`;
}

export function frequencyUrl(base: string, corpus: string, word: string): string {
  const q = new URLSearchParams({ corpus, word });
  return `${base}/api/frequency?${q}`;
}

export function contextUrl(base: string, corpus: string, word: string, k: number): string {
  const q = new URLSearchParams({ corpus, word, k: String(k) });
  return `${base}/api/typicalcontext?${q}`;
}

export function mostSimilarUrl(base: string, corpus: string, word: string, k: number): string {
  const q = new URLSearchParams({ corpus, word, k: String(k) });
  return `${base}/api/mostsimilar?${q}`;
}

async function toError(response: Response): Promise<ApiError> {
  try {
    const body = await response.json();
    const detail = body?.detail;
    if (detail?.error === "UnknownWord") {
      return { kind: "UnknownWord", message: `unknown word: ${detail.word}` };
    }
    if (detail?.error === "UnknownCorpus") {
      return { kind: "UnknownCorpus", message: `unknown corpus: ${detail.corpus}` };
    }
    return { kind: "Other", message: `request failed (${response.status})` };
  } catch {
    return { kind: "Other", message: `request failed (${response.status})` };
  }
}

export async function getJson<T>(url: string): Promise<ApiResult<T>> {
  try {
    const response = await fetch(url);
    if (!response.ok) {
      return { ok: false, error: await toError(response) };
    }
    return { ok: true, value: (await response.json()) as T };
  } catch (err) {
    return { ok: false, error: { kind: "Other", message: String(err) } };
  }
}

export const getEnvelope = (url: string) => getJson<Envelope>(url);
export const getCorpora = (base: string) => getJson<CorpusInfo[]>(corporaUrl(base));
