import { fetchQuery } from "../api.js";
import { clear, el, errorBanner, formatNumber } from "../dom.js";
import type { HighlightState } from "../highlight.js";
import { documentHighlightSteps } from "../highlight.js";
import { serializeRoute } from "../state.js";
import type { DocumentDTO, QueryResultDTO } from "../types.js";

export interface QueryViewCallbacks {
  onHighlightChange: (h: HighlightState) => void;
  onCountChange: (count: number) => void;
}

function docTokens(
  doc: DocumentDTO,
  dto: QueryResultDTO,
  highlight: HighlightState,
): HTMLElement {
  const body = el("p", { class: "doc-text" });
  if (!doc.similarityMatrix || doc.similarityMatrix.length === 0) {
    body.append(
      el("span", { class: "warning", title: "no similarity data for this document" }, ["⚠ "]),
      doc.tokens.map((t) => t.term).join(" "),
    );
    return body;
  }
  const steps = documentHighlightSteps(highlight, doc, dto.queryTerms, dto.kernelBank);
  doc.tokens.forEach((tok, j) => {
    const cls = steps[j] > 0 ? `tok hl-${steps[j]}` : tok.oov ? "tok oov" : "tok";
    body.append(el("span", { class: cls }, [tok.term]), " ");
  });
  return body;
}

function kernelScoreRow(doc: DocumentDTO): HTMLElement {
  const row = el("div", { class: "kernel-scores" });
  for (const k of doc.perKernel) {
    row.append(
      el("span", {
        class: "kernel-score",
        title: `kernel μ=${k.mu}: pooled feature ${k.feature} (weighted contribution ${k.contribution})`,
      }, [`${k.mu}: ${formatNumber(k.contribution)}`]),
    );
  }
  return row;
}

function documentCard(
  doc: DocumentDTO,
  dto: QueryResultDTO,
  highlight: HighlightState,
  selection: Set<string>,
  onToggleSelect: (docId: string) => void,
): HTMLElement {
  const select = el("input", {
    type: "checkbox",
    title: "select two documents to compare them side-by-side",
  });
  select.checked = selection.has(doc.docId);
  select.addEventListener("change", () => onToggleSelect(doc.docId));
  const badge = doc.judged
    ? el("span", { class: `badge judged grade-${doc.grade}`, title: "judged relevance grade" }, [
        `judged ${doc.grade}`,
      ])
    : el("span", { class: "badge unjudged", title: "no relevance judgment for this document" }, [
        "unjudged",
      ]);
  return el("article", { class: "doc-card", "data-doc": doc.docId }, [
    el("header", {}, [
      select,
      el("span", { class: "rank", title: "re-ranked position" }, [`#${doc.rank}`]),
      el("span", { class: "doc-id" }, [doc.docId]),
      el("span", { class: "metric", title: "overall model score (bias + kernel contributions)" }, [
        `score ${formatNumber(doc.overall)}`,
      ]),
      el("span", { class: "metric", title: "position in the baseline ranking" }, [
        `baseline #${doc.baselineRank}`,
      ]),
      badge,
    ]),
    kernelScoreRow(doc),
    docTokens(doc, dto, highlight),
  ]);
}

function highlightControls(
  dto: QueryResultDTO,
  highlight: HighlightState,
  cb: QueryViewCallbacks,
): HTMLElement {
  const bar = el("div", { class: "controls highlight-controls" });

  const modeSim = el("button", {
    class: highlight.mode === "minSimilarity" ? "mode active" : "mode",
    title: "color term pairs whose cosine similarity exceeds the threshold",
  }, ["min. similarity"]);
  modeSim.addEventListener("click", () =>
    cb.onHighlightChange({ ...highlight, mode: "minSimilarity" }),
  );
  const modeKernel = el("button", {
    class: highlight.mode === "kernelSet" ? "mode active" : "mode",
    title: "color terms by their value after the kernel transformation",
  }, ["kernels"]);
  modeKernel.addEventListener("click", () =>
    cb.onHighlightChange({ ...highlight, mode: "kernelSet" }),
  );
  bar.append(modeSim, modeKernel);

  if (highlight.mode === "minSimilarity") {
    const slider = el("input", {
      type: "range",
      min: "0",
      max: "1",
      step: "0.05",
      value: String(highlight.threshold),
      title: "minimum cosine similarity a term pair must exceed to be colored",
    });
    const label = el("span", { class: "threshold-label" }, [`≥ ${highlight.threshold}`]);
    slider.addEventListener("input", () =>
      cb.onHighlightChange({ ...highlight, threshold: Number(slider.value) }),
    );
    bar.append(" threshold ", slider, label);
  } else {
    const chips = el("span", { class: "kernel-chips" });
    dto.kernelBank.mus.forEach((mu, k) => {
      const chip = el("button", {
        class: highlight.selectedKernels.has(k) ? "chip active" : "chip",
        title: `toggle the μ=${mu} kernel (σ=${dto.kernelBank.sigmas[k]})`,
      }, [`μ=${mu}`]);
      chip.addEventListener("click", () => {
        const next = new Set(highlight.selectedKernels);
        if (next.has(k)) next.delete(k);
        else next.add(k);
        cb.onHighlightChange({ ...highlight, selectedKernels: next });
      });
      chips.append(chip);
    });
    bar.append(" ", chips);
  }

  const termChips = el("span", { class: "term-chips" });
  dto.queryTerms.forEach((tok, i) => {
    const active =
      highlight.selectedQueryTerms.size === 0 || highlight.selectedQueryTerms.has(i);
    const chip = el("button", {
      class: `chip term ${active ? "active" : ""} ${tok.oov ? "oov" : ""}`,
      title: tok.oov
        ? "out-of-vocabulary query term (no connections to highlight)"
        : "toggle highlighting for this query term (none selected = all)",
    }, [tok.term]);
    chip.addEventListener("click", () => {
      const next = new Set(highlight.selectedQueryTerms);
      if (next.has(i)) next.delete(i);
      else next.add(i);
      cb.onHighlightChange({ ...highlight, selectedQueryTerms: next });
    });
    termChips.append(chip);
  });
  bar.append(" terms: ", termChips);
  return bar;
}

export function renderQueryView(
  root: HTMLElement,
  queryId: string,
  count: number,
  highlight: HighlightState,
  cb: QueryViewCallbacks,
): void {
  clear(root);
  root.append(el("p", {}, [el("a", { href: "#/clusters" }, ["← all clusters"])]));
  const container = el("div", { class: "query-view" }, ["loading…"]);
  root.append(container);

  const selection = new Set<string>();

  const load = () => {
    fetchQuery(queryId, 0, count)
      .then((dto) => {
        if (dto === null) return;
        clear(container);
        container.append(
          el("h2", {}, [dto.queryText]),
          el("p", { class: "query-summary" }, [
            `first relevant: ${formatNumber(dto.summary.firstRelevantRank)} `,
            `(baseline ${formatNumber(dto.summary.baselineFirstRelevantRank)}, `,
            `Δ ${formatNumber(dto.summary.delta)}, ${dto.summary.judgedCount} judged)`,
          ]),
          highlightControls(dto, highlight, cb),
        );

        const onToggleSelect = (docId: string) => {
          if (selection.has(docId)) selection.delete(docId);
          else selection.add(docId);
          if (selection.size === 2) {
            const [docA, docB] = [...selection];
            window.location.hash = serializeRoute({
              view: "compare",
              queryId,
              docA,
              docB,
              highlight,
            });
          }
        };

        // mark unjudged docs ranked above the first judged-relevant one
        // (the pool-bias signal)
        let firstJudgedRelevant = Infinity;
        for (const d of dto.documents) {
          if (d.judged && (d.grade ?? 0) >= 1) {
            firstJudgedRelevant = Math.min(firstJudgedRelevant, d.rank);
          }
        }
        const list = el("div", { class: "doc-list" });
        for (const doc of dto.documents) {
          const node = documentCard(doc, dto, highlight, selection, onToggleSelect);
          if (!doc.judged && doc.rank < firstJudgedRelevant) {
            node.classList.add("pool-bias");
            node.querySelector("header")?.append(
              el("span", {
                class: "badge attention",
                title: "unjudged document ranked above the first judged-relevant one",
              }, ["▲ above judged"]),
            );
          }
          list.append(node);
        }
        container.append(list);

        if (dto.documents.length < dto.totalDocuments) {
          const more = el("button", { class: "load-more" }, [
            `load more (${dto.documents.length}/${dto.totalDocuments})`,
          ]);
          more.addEventListener("click", () => cb.onCountChange(count + 10));
          container.append(more);
        }
      })
      .catch((err: Error) => {
        clear(container);
        container.append(errorBanner(err.message, load));
      });
  };
  load();
}
