import { describe, expect, it } from "vitest";

import { defaultClusterControls, parseRoute, serializeRoute } from "./state.js";
import type { ViewRoute } from "./state.js";

describe("route round trips", () => {
  const routes: ViewRoute[] = [
    { view: "clusterOverview", controls: defaultClusterControls() },
    {
      view: "clusterOverview",
      controls: { sort: "random", order: "desc", filter: "bm", seed: 7, expandAll: true },
    },
    {
      view: "queryResult",
      queryId: "q07",
      count: 30,
      highlight: {
        mode: "minSimilarity",
        threshold: 0.85,
        selectedKernels: new Set([0]),
        selectedQueryTerms: new Set([1, 3]),
      },
    },
    {
      view: "queryResult",
      queryId: "q with spaces",
      count: 10,
      highlight: {
        mode: "kernelSet",
        threshold: 0.75,
        selectedKernels: new Set([0, 4, 10]),
        selectedQueryTerms: new Set(),
      },
    },
    {
      view: "compare",
      queryId: "q00",
      docA: "d00_002",
      docB: "d00_005",
      highlight: {
        mode: "kernelSet",
        threshold: 0.75,
        selectedKernels: new Set([2]),
        selectedQueryTerms: new Set([0]),
      },
    },
  ];

  for (const route of routes) {
    it(`restores ${route.view} state from the URL`, () => {
      expect(parseRoute(serializeRoute(route))).toEqual(route);
    });
  }

  it("serialization is stable (URL fidelity)", () => {
    for (const route of routes) {
      const url = serializeRoute(route);
      expect(serializeRoute(parseRoute(url))).toBe(url);
    }
  });
});

describe("route parsing defaults", () => {
  it("empty hash is the cluster overview", () => {
    expect(parseRoute("")).toEqual({
      view: "clusterOverview",
      controls: defaultClusterControls(),
    });
    expect(parseRoute("#/clusters")).toEqual({
      view: "clusterOverview",
      controls: defaultClusterControls(),
    });
  });

  it("garbage falls back to the overview", () => {
    expect(parseRoute("#/nope/zzz").view).toBe("clusterOverview");
  });

  it("invalid numbers are clamped or defaulted", () => {
    const route = parseRoute("#/query/q1?count=-5&th=7");
    expect(route.view).toBe("queryResult");
    if (route.view === "queryResult") {
      expect(route.count).toBe(10);
      expect(route.highlight.threshold).toBe(1); // clamped to [0, 1]
    }
  });
});
