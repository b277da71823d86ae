// Hand-built DTOs for tests: a 2-term query against a 4-token document
// where exactly one document token is string-identical to a query term.

import type { CompareDTO, DocumentDTO, KernelBankDTO, QueryResultDTO, TokenDTO } from "./types.js";

export const bank: KernelBankDTO = {
  mus: [1.0, 0.9, 0.7],
  sigmas: [0.001, 0.1, 0.1],
  weights: [0.4, 1.2, 0.9],
  bias: 0.1,
};

export const queryTerms: TokenDTO[] = [
  { term: "alpha", start: 0, end: 5, oov: false },
  { term: "beta", start: 6, end: 10, oov: false },
  { term: "zzz", start: 11, end: 14, oov: true },
];

function tok(term: string, oov = false): TokenDTO {
  return { term, start: 0, end: term.length, oov };
}

// doc tokens: alpha (identical to query term 0), near, far, oovtok
export function makeDoc(docId: string, rank: number): DocumentDTO {
  const features = [0.0, -1.2, 0.8];
  const contributions = features.map((f, k) => bank.weights[k] * f);
  const overall = bank.bias + contributions.reduce((a, b) => a + b, 0);
  return {
    docId,
    rank,
    baselineRank: rank,
    overall,
    bias: bank.bias,
    perKernel: bank.mus.map((mu, k) => ({
      mu,
      sigma: bank.sigmas[k],
      weight: bank.weights[k],
      feature: features[k],
      contribution: contributions[k],
    })),
    judged: rank === 1,
    grade: rank === 1 ? 1 : null,
    tokens: [tok("alpha"), tok("near"), tok("far"), tok("oovtok", true)],
    similarityMatrix: [
      // query alpha vs [alpha, near, far, oovtok]
      [1.0, 0.8, -0.3, 0.0],
      // query beta
      [0.5, 0.6, 0.1, 0.0],
      // query zzz (OOV): all zeros
      [0.0, 0.0, 0.0, 0.0],
    ],
    softTf: [
      [1.0, 1.2, 0.9],
      [0.1, 0.8, 1.4],
      [0.0, 0.0, 0.0],
    ],
  };
}

export function makeQueryResult(): QueryResultDTO {
  return {
    queryId: "q1",
    queryText: "alpha beta zzz",
    queryTerms,
    totalDocuments: 2,
    offset: 0,
    summary: {
      firstRelevantRank: 1,
      baselineFirstRelevantRank: 2,
      delta: 1,
      judgedCount: 1,
    },
    documents: [makeDoc("d1", 1), makeDoc("d2", 2)],
    kernelBank: bank,
  };
}

export function makeCompare(): CompareDTO {
  const left = makeDoc("d1", 1);
  const right = makeDoc("d2", 2);
  return {
    queryId: "q1",
    queryText: "alpha beta zzz",
    queryTerms,
    left,
    right,
    perKernelPairs: bank.mus.map((mu, k) => ({
      mu,
      leftContribution: left.perKernel[k].contribution,
      rightContribution: right.perKernel[k].contribution,
    })),
    kernelBank: bank,
  };
}
