// Shareable view state: the full route (view + sort/filter/paging +
// highlight) round-trips through the URL hash, so reloading a link
// restores the identical view.

import type { HighlightState } from "./highlight.js";
import { defaultHighlightState } from "./highlight.js";

export interface ClusterControls {
  sort: string;
  order: string;
  filter: string;
  seed: number;
  expandAll: boolean;
}

export type ViewRoute =
  | { view: "clusterOverview"; controls: ClusterControls }
  | { view: "queryResult"; queryId: string; count: number; highlight: HighlightState }
  | {
      view: "compare";
      queryId: string;
      docA: string;
      docB: string;
      highlight: HighlightState;
    };

export function defaultClusterControls(): ClusterControls {
  return { sort: "median", order: "asc", filter: "", seed: 0, expandAll: false };
}

function encodeHighlight(params: URLSearchParams, h: HighlightState): void {
  params.set("hm", h.mode === "minSimilarity" ? "sim" : "kernel");
  params.set("th", String(h.threshold));
  if (h.selectedKernels.size > 0) {
    params.set("k", [...h.selectedKernels].sort((a, b) => a - b).join(","));
  }
  if (h.selectedQueryTerms.size > 0) {
    params.set("qt", [...h.selectedQueryTerms].sort((a, b) => a - b).join(","));
  }
}

function decodeHighlight(params: URLSearchParams): HighlightState {
  const state = defaultHighlightState();
  const mode = params.get("hm");
  if (mode === "kernel") state.mode = "kernelSet";
  if (mode === "sim") state.mode = "minSimilarity";
  const th = params.get("th");
  if (th !== null && !Number.isNaN(Number(th))) {
    state.threshold = Math.min(1, Math.max(0, Number(th)));
  }
  const parseSet = (value: string | null): Set<number> => {
    if (!value) return new Set();
    return new Set(
      value
        .split(",")
        .map((x) => Number(x))
        .filter((x) => Number.isInteger(x) && x >= 0),
    );
  };
  const kernels = parseSet(params.get("k"));
  if (kernels.size > 0) state.selectedKernels = kernels;
  state.selectedQueryTerms = parseSet(params.get("qt"));
  return state;
}

export function serializeRoute(route: ViewRoute): string {
  const params = new URLSearchParams();
  switch (route.view) {
    case "clusterOverview": {
      const c = route.controls;
      if (c.sort !== "median") params.set("sort", c.sort);
      if (c.order !== "asc") params.set("order", c.order);
      if (c.filter) params.set("filter", c.filter);
      if (c.seed) params.set("seed", String(c.seed));
      if (c.expandAll) params.set("expand", "1");
      const qs = params.toString();
      return qs ? `#/clusters?${qs}` : "#/clusters";
    }
    case "queryResult": {
      if (route.count !== 10) params.set("count", String(route.count));
      encodeHighlight(params, route.highlight);
      return `#/query/${encodeURIComponent(route.queryId)}?${params.toString()}`;
    }
    case "compare": {
      encodeHighlight(params, route.highlight);
      const ids = [route.queryId, route.docA, route.docB]
        .map(encodeURIComponent)
        .join("/");
      return `#/compare/${ids}?${params.toString()}`;
    }
  }
}

export function parseRoute(hash: string): ViewRoute {
  const stripped = hash.startsWith("#") ? hash.slice(1) : hash;
  const qIndex = stripped.indexOf("?");
  const path = qIndex >= 0 ? stripped.slice(0, qIndex) : stripped;
  const params = new URLSearchParams(qIndex >= 0 ? stripped.slice(qIndex + 1) : "");
  const parts = path.split("/").filter((p) => p.length > 0);

  if (parts[0] === "query" && parts.length === 2) {
    const count = Number(params.get("count") ?? "10");
    return {
      view: "queryResult",
      queryId: decodeURIComponent(parts[1]),
      count: Number.isInteger(count) && count > 0 ? count : 10,
      highlight: decodeHighlight(params),
    };
  }
  if (parts[0] === "compare" && parts.length === 4) {
    return {
      view: "compare",
      queryId: decodeURIComponent(parts[1]),
      docA: decodeURIComponent(parts[2]),
      docB: decodeURIComponent(parts[3]),
      highlight: decodeHighlight(params),
    };
  }
  const controls = defaultClusterControls();
  controls.sort = params.get("sort") ?? controls.sort;
  controls.order = params.get("order") ?? controls.order;
  controls.filter = params.get("filter") ?? "";
  const seed = Number(params.get("seed") ?? "0");
  controls.seed = Number.isInteger(seed) ? seed : 0;
  controls.expandAll = params.get("expand") === "1";
  return { view: "clusterOverview", controls };
}
