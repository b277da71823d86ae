import { fetchClusters } from "../api.js";
import { clear, el, errorBanner, formatNumber } from "../dom.js";
import type { ClusterControls } from "../state.js";
import { serializeRoute } from "../state.js";
import { defaultHighlightState } from "../highlight.js";
import type { ClusterCardDTO } from "../types.js";

const SORTS = ["median", "delta", "alpha", "random"];

function queryRow(q: ClusterCardDTO["queries"][number]): HTMLElement {
  const link = el("a", {
    href: serializeRoute({
      view: "queryResult",
      queryId: q.queryId,
      count: 10,
      highlight: defaultHighlightState(),
    }),
    class: "query-link",
  }, [q.text]);
  return el("li", { class: "query-row" }, [
    el("span", {
      class: "metric",
      title: "rank of the first relevant document in the re-ranked list",
    }, [formatNumber(q.firstRelevantRank)]),
    el("span", {
      class: `metric delta ${q.delta !== null && q.delta > 0 ? "up" : q.delta !== null && q.delta < 0 ? "down" : ""}`,
      title: "difference to the baseline ranking (positive = improved)",
    }, [q.delta === null ? "–" : (q.delta > 0 ? "+" : "") + q.delta]),
    link,
    q.judgedCount === 0
      ? el("span", { class: "badge unjudged", title: "this query has no relevance judgments" }, ["unjudged"])
      : "",
  ]);
}

function card(dto: ClusterCardDTO, expanded: boolean): HTMLElement {
  const list = el("ul", { class: "query-list" });
  const visible = expanded ? dto.queries : dto.queries.slice(0, dto.collapsedCount);
  for (const q of visible) list.append(queryRow(q));
  const hidden = dto.queries.length - visible.length;
  const node = el("section", { class: "cluster-card" }, [
    el("header", {}, [
      el("h3", {}, [dto.title]),
      el("span", { class: "metric", title: "median first-relevant rank of the cluster's queries" }, [
        `median ${formatNumber(dto.medianFirstRelevantRank)}`,
      ]),
      el("span", { class: "metric", title: "median rank difference to the baseline" }, [
        `Δ ${formatNumber(dto.medianDelta)}`,
      ]),
    ]),
    list,
  ]);
  if (hidden > 0) {
    const more = el("button", { class: "show-more" }, [`show ${hidden} more`]);
    more.addEventListener("click", () => {
      clear(list);
      for (const q of dto.queries) list.append(queryRow(q));
      more.remove();
    });
    node.append(more);
  }
  return node;
}

export function renderClusterOverview(
  root: HTMLElement,
  controls: ClusterControls,
  onControlsChange: (c: ClusterControls) => void,
): void {
  clear(root);

  const bar = el("div", { class: "controls" });
  const sortSelect = el("select", { title: "sort clusters and queries" });
  for (const s of SORTS) {
    const opt = el("option", { value: s }, [s]);
    if (s === controls.sort) opt.selected = true;
    sortSelect.append(opt);
  }
  sortSelect.addEventListener("change", () =>
    onControlsChange({ ...controls, sort: sortSelect.value }),
  );

  const orderButton = el("button", { title: "toggle ascending / descending" }, [
    controls.order === "asc" ? "▲ asc" : "▼ desc",
  ]);
  orderButton.addEventListener("click", () =>
    onControlsChange({ ...controls, order: controls.order === "asc" ? "desc" : "asc" }),
  );

  const filterInput = el("input", {
    type: "text",
    placeholder: "term prefix filter",
    value: controls.filter,
    title: "keep only queries containing a term with this prefix",
  });
  filterInput.value = controls.filter;
  filterInput.addEventListener("change", () =>
    onControlsChange({ ...controls, filter: filterInput.value }),
  );

  const expandButton = el("button", { title: "expand or collapse every cluster card" }, [
    controls.expandAll ? "collapse all" : "expand all",
  ]);
  expandButton.addEventListener("click", () =>
    onControlsChange({ ...controls, expandAll: !controls.expandAll }),
  );

  const reshuffle = el("button", { title: "new random order (seed shown in the URL)" }, [
    "reshuffle",
  ]);
  reshuffle.addEventListener("click", () =>
    onControlsChange({ ...controls, sort: "random", seed: (controls.seed + 1) | 0 }),
  );

  bar.append("sort ", sortSelect, " ", orderButton, " ", filterInput, " ", expandButton, " ", reshuffle);
  root.append(bar);

  const grid = el("div", { class: "cluster-grid" }, ["loading…"]);
  root.append(grid);

  const load = () => {
    fetchClusters(controls)
      .then((cards) => {
        if (cards === null) return; // superseded by a newer request
        clear(grid);
        if (cards.length === 0) {
          grid.append(el("p", { class: "empty" }, ["no queries match the filter"]));
          return;
        }
        for (const dto of cards) grid.append(card(dto, controls.expandAll));
      })
      .catch((err: Error) => {
        clear(grid);
        grid.append(errorBanner(err.message, load));
      });
  };
  load();
}
