// Client-side term highlighting. Both modes are computed purely from an
// already-loaded DTO: changing the threshold, kernel selection, or query
// term selection never triggers a network request.

import type { DocumentDTO, KernelBankDTO, TokenDTO } from "./types.js";

export type HighlightMode = "minSimilarity" | "kernelSet";

export interface HighlightState {
  mode: HighlightMode;
  threshold: number; // [0, 1], minSimilarity mode
  selectedKernels: Set<number>; // kernel indices, kernelSet mode
  selectedQueryTerms: Set<number>; // empty = all query terms
}

export function defaultHighlightState(): HighlightState {
  return {
    mode: "minSimilarity",
    threshold: 0.75,
    selectedKernels: new Set([0]),
    selectedQueryTerms: new Set(),
  };
}

function queryTermActive(state: HighlightState, i: number): boolean {
  return state.selectedQueryTerms.size === 0 || state.selectedQueryTerms.has(i);
}

/** Gaussian kernel transformation of a similarity value. */
export function kernelActivation(
  similarity: number,
  mu: number,
  sigma: number,
): number {
  const d = similarity - mu;
  return Math.exp(-(d * d) / (2 * sigma * sigma));
}

/**
 * Mode 1: a (queryTerm, docTerm) pair is highlighted iff both terms are
 * in-vocabulary, the similarity meets the threshold, and the query term
 * is selected (or no selection is active).
 */
export function pairHighlighted(
  state: HighlightState,
  similarity: number,
  queryTermIndex: number,
  queryOov: boolean,
  docOov: boolean,
): boolean {
  if (queryOov || docOov) return false;
  if (!queryTermActive(state, queryTermIndex)) return false;
  // threshold 0 means "no constraint": negative similarities color too
  return state.threshold === 0 || similarity >= state.threshold;
}

/**
 * Per-document-term intensity in [0, 1].
 *
 * minSimilarity mode: 1 when any selected query term's pair passes the
 * threshold, else 0. kernelSet mode: max over selected kernels and
 * selected query terms of the kernel activation.
 */
export function docTermIntensity(
  state: HighlightState,
  doc: DocumentDTO,
  queryTerms: TokenDTO[],
  bank: KernelBankDTO,
  docTermIndex: number,
): number {
  if (doc.tokens[docTermIndex].oov) return 0;
  let best = 0;
  for (let i = 0; i < queryTerms.length; i++) {
    if (queryTerms[i].oov || !queryTermActive(state, i)) continue;
    const sim = doc.similarityMatrix[i][docTermIndex];
    if (state.mode === "minSimilarity") {
      if (state.threshold === 0 || sim >= state.threshold) return 1;
    } else {
      for (const k of state.selectedKernels) {
        if (k < 0 || k >= bank.mus.length) continue;
        const act = kernelActivation(sim, bank.mus[k], bank.sigmas[k]);
        if (act > best) best = act;
      }
    }
  }
  return best;
}

/**
 * Discretize an intensity into one of 4 opacity steps (0 = uncolored);
 * graded but legible coloring.
 */
export function intensityStep(intensity: number): 0 | 1 | 2 | 3 | 4 {
  if (intensity < 0.25) return 0;
  if (intensity < 0.5) return 1;
  if (intensity < 0.75) return 2;
  if (intensity < 0.95) return 3;
  return 4;
}

/** Steps for every token of a document; the DOM layer maps these to CSS classes. */
export function documentHighlightSteps(
  state: HighlightState,
  doc: DocumentDTO,
  queryTerms: TokenDTO[],
  bank: KernelBankDTO,
): number[] {
  if (!doc.similarityMatrix || doc.similarityMatrix.length === 0) {
    return doc.tokens.map(() => 0);
  }
  return doc.tokens.map((_, j) =>
    intensityStep(docTermIntensity(state, doc, queryTerms, bank, j)),
  );
}
