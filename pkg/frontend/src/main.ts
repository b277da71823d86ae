import { fetchMeta } from "./api.js";
import { el } from "./dom.js";
import { parseRoute, serializeRoute } from "./state.js";
import type { ViewRoute } from "./state.js";
import { renderClusterOverview } from "./views/clusters.js";
import { renderCompareView } from "./views/compare.js";
import { introDismissed, showIntro } from "./views/intro.js";
import { renderQueryView } from "./views/query.js";

function navigate(route: ViewRoute): void {
  window.location.hash = serializeRoute(route);
}

function render(root: HTMLElement): void {
  const route = parseRoute(window.location.hash || "#/clusters");
  switch (route.view) {
    case "clusterOverview":
      renderClusterOverview(root, route.controls, (controls) =>
        navigate({ view: "clusterOverview", controls }),
      );
      break;
    case "queryResult":
      renderQueryView(root, route.queryId, route.count, route.highlight, {
        onHighlightChange: (highlight) => navigate({ ...route, highlight }),
        onCountChange: (count) => navigate({ ...route, count }),
      });
      break;
    case "compare":
      renderCompareView(root, route.queryId, route.docA, route.docB, route.highlight);
      break;
  }
}

function main(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");

  const help = el("button", { class: "help", title: "reopen the introduction" }, ["?"]);
  help.addEventListener("click", () => {
    fetchMeta()
      .then((meta) => showIntro(meta))
      .catch(() => showIntro(null));
  });
  document.body.append(help);

  if (!introDismissed()) {
    fetchMeta()
      .then((meta) => showIntro(meta))
      .catch(() => showIntro(null));
  }

  window.addEventListener("hashchange", () => render(root));
  render(root);
}

main();
