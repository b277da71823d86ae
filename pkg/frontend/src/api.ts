// Thin fetch client. Concurrent in-flight requests are allowed; stale
// responses are discarded via a per-channel generation counter.

import type { ClusterCardDTO, CompareDTO, MetaDTO, QueryResultDTO } from "./types.js";
import type { ClusterControls } from "./state.js";

const generations = new Map<string, number>();

async function getJson<T>(channel: string, url: string): Promise<T | null> {
  const gen = (generations.get(channel) ?? 0) + 1;
  generations.set(channel, gen);
  const response = await fetch(url);
  if (generations.get(channel) !== gen) return null; // superseded
  if (!response.ok) {
    const body = await response.text();
    throw new Error(`${response.status}: ${body}`);
  }
  return (await response.json()) as T;
}

export function fetchMeta(): Promise<MetaDTO | null> {
  return getJson<MetaDTO>("meta", "/api/meta");
}

export function fetchClusters(c: ClusterControls): Promise<ClusterCardDTO[] | null> {
  const params = new URLSearchParams({
    sort: c.sort,
    order: c.order,
    seed: String(c.seed),
  });
  if (c.filter) params.set("filter", c.filter);
  return getJson<ClusterCardDTO[]>("clusters", `/api/clusters?${params}`);
}

// The snapshot is immutable, so DTOs can be cached client-side; highlight
// or selection changes then re-render with zero further network requests.
const dtoCache = new Map<string, unknown>();

async function getCached<T>(channel: string, url: string): Promise<T | null> {
  if (dtoCache.has(url)) return dtoCache.get(url) as T;
  const dto = await getJson<T>(channel, url);
  if (dto !== null) dtoCache.set(url, dto);
  return dto;
}

export function fetchQuery(
  queryId: string,
  offset: number,
  count: number,
): Promise<QueryResultDTO | null> {
  return getCached<QueryResultDTO>(
    `query:${queryId}`,
    `/api/query/${encodeURIComponent(queryId)}?offset=${offset}&count=${count}`,
  );
}

export function fetchCompare(
  queryId: string,
  docA: string,
  docB: string,
): Promise<CompareDTO | null> {
  const ids = [queryId, docA, docB].map(encodeURIComponent).join("/");
  return getCached<CompareDTO>("compare", `/api/compare/${ids}`);
}
