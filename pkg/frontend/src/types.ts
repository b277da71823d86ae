// DTO shapes mirroring the JSON API; numeric values are displayed
// verbatim (formatting only, no client-side recomputation of scores).

export interface KernelBankDTO {
  mus: number[];
  sigmas: number[];
  weights: number[];
  bias: number;
}

export interface MetaDTO {
  collection: string;
  queryCount: number;
  candidateDepth: number;
  kernelBank: KernelBankDTO;
  clusterCount: number;
  builtAt: number;
}

export interface ClusterQueryDTO {
  queryId: string;
  text: string;
  firstRelevantRank: number | null;
  delta: number | null;
  judgedCount: number;
}

export interface ClusterCardDTO {
  clusterId: string;
  title: string;
  medianFirstRelevantRank: number | null;
  medianDelta: number | null;
  queries: ClusterQueryDTO[];
  collapsedCount: number;
}

export interface TokenDTO {
  term: string;
  start: number;
  end: number;
  oov: boolean;
}

export interface PerKernelDTO {
  mu: number;
  sigma: number;
  weight: number;
  feature: number;
  contribution: number;
}

export interface DocumentDTO {
  docId: string;
  rank: number;
  baselineRank: number;
  overall: number;
  bias: number;
  perKernel: PerKernelDTO[];
  judged: boolean;
  grade: number | null;
  tokens: TokenDTO[];
  similarityMatrix: number[][];
  softTf: number[][];
}

export interface QuerySummaryDTO {
  firstRelevantRank: number | null;
  baselineFirstRelevantRank: number | null;
  delta: number | null;
  judgedCount: number;
}

export interface QueryResultDTO {
  queryId: string;
  queryText: string;
  queryTerms: TokenDTO[];
  totalDocuments: number;
  offset: number;
  summary: QuerySummaryDTO;
  documents: DocumentDTO[];
  kernelBank: KernelBankDTO;
}

export interface KernelPairDTO {
  mu: number;
  leftContribution: number;
  rightContribution: number;
}

export interface CompareDTO {
  queryId: string;
  queryText: string;
  queryTerms: TokenDTO[];
  left: DocumentDTO;
  right: DocumentDTO;
  perKernelPairs: KernelPairDTO[];
  kernelBank: KernelBankDTO;
}
