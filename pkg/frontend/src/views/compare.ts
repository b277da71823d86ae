import { fetchCompare } from "../api.js";
import { centerBars } from "../compare.js";
import { clear, el, formatNumber } from "../dom.js";
import type { HighlightState } from "../highlight.js";
import { documentHighlightSteps } from "../highlight.js";
import type { CompareDTO, DocumentDTO } from "../types.js";

function docPanel(doc: DocumentDTO, dto: CompareDTO, highlight: HighlightState): HTMLElement {
  const steps = documentHighlightSteps(highlight, doc, dto.queryTerms, dto.kernelBank);
  const body = el("p", { class: "doc-text" });
  doc.tokens.forEach((tok, j) => {
    const cls = steps[j] > 0 ? `tok hl-${steps[j]}` : tok.oov ? "tok oov" : "tok";
    body.append(el("span", { class: cls }, [tok.term]), " ");
  });
  return el("div", { class: "compare-panel" }, [
    el("header", {}, [
      el("span", { class: "rank" }, [`#${doc.rank}`]),
      el("span", { class: "doc-id" }, [doc.docId]),
      el("span", { class: "metric", title: "overall model score" }, [
        `score ${formatNumber(doc.overall)}`,
      ]),
      doc.judged
        ? el("span", { class: "badge judged" }, [`judged ${doc.grade}`])
        : el("span", { class: "badge unjudged" }, ["unjudged"]),
    ]),
    body,
  ]);
}

function centerColumn(dto: CompareDTO): HTMLElement {
  const column = el("div", { class: "compare-center" }, [
    el("h4", { title: "per-kernel weighted contributions of both documents" }, ["kernel scores"]),
  ]);
  for (const bar of centerBars(dto.perKernelPairs)) {
    const left = el("div", { class: "bar left" });
    left.style.width = `${(bar.leftFraction * 100).toFixed(1)}%`;
    const right = el("div", { class: "bar right" });
    right.style.width = `${(bar.rightFraction * 100).toFixed(1)}%`;
    column.append(
      el("div", { class: "bar-pair", title: `μ=${bar.mu}` }, [
        el("span", { class: "bar-value" }, [formatNumber(bar.leftContribution)]),
        el("div", { class: "bar-track left" }, [left]),
        el("span", { class: "bar-mu" }, [`μ=${bar.mu}`]),
        el("div", { class: "bar-track right" }, [right]),
        el("span", { class: "bar-value" }, [formatNumber(bar.rightContribution)]),
      ]),
    );
  }
  column.append(
    el("p", { class: "bias-note", title: "shared additive offset" }, [
      `bias ${formatNumber(dto.kernelBank.bias)}`,
    ]),
  );
  return column;
}

export function renderCompareView(
  root: HTMLElement,
  queryId: string,
  docA: string,
  docB: string,
  highlight: HighlightState,
): void {
  clear(root);
  const back = el("a", { href: `#/query/${encodeURIComponent(queryId)}?` }, [
    "← back to query",
  ]);
  root.append(el("p", {}, [back]));
  const container = el("div", { class: "compare-view" }, ["loading…"]);
  root.append(container);

  const load = () => {
    fetchCompare(queryId, docA, docB)
      .then((dto) => {
        if (dto === null) return;
        clear(container);
        container.append(
          el("h2", {}, [dto.queryText]),
          el("div", { class: "compare-columns" }, [
            docPanel(dto.left, dto, highlight),
            centerColumn(dto),
            docPanel(dto.right, dto, highlight),
          ]),
        );
      })
      .catch((err: Error) => {
        clear(container);
        container.append(
          el("p", { class: "error-banner" }, [`could not load comparison: ${err.message} `, back.cloneNode(true) as HTMLElement]),
        );
      });
  };
  load();
}
