import { el } from "../dom.js";
import type { MetaDTO } from "../types.js";

const STORAGE_KEY = "explorer-intro-dismissed";

const STATIC_COPY =
  "This explorer lets you browse the output of a neural re-ranking model. " +
  "A first-stage ranker retrieves candidate documents per query; the neural " +
  "model then re-scores them using cosine similarities between query and " +
  "document terms, summarized by a bank of Gaussian kernels. Browse query " +
  "clusters, open a query to see each document's score broken down per " +
  "kernel, highlight query-document term connections, and compare two " +
  "documents side-by-side. Hover any control for a short explanation.";

export function introDismissed(): boolean {
  try {
    return window.localStorage.getItem(STORAGE_KEY) === "1";
  } catch {
    return false;
  }
}

export function showIntro(meta: MetaDTO | null, onDismiss?: () => void): void {
  const lines: (Node | string)[] = [
    el("h2", {}, ["Exploring neural re-ranking results"]),
    el("p", {}, [STATIC_COPY]),
  ];
  if (meta !== null) {
    lines.push(
      el("p", { class: "meta-line" }, [
        `This instance serves the "${meta.collection}" collection: ` +
          `${meta.queryCount} queries, up to ${meta.candidateDepth} candidates ` +
          `each, scored by ${meta.kernelBank.mus.length} kernels ` +
          `(μ = ${meta.kernelBank.mus.join(", ")}).`,
      ]),
    );
  }
  const dismiss = el("button", { class: "dismiss" }, ["got it"]);
  const overlay = el("div", { class: "intro-overlay" }, [
    el("div", { class: "intro-panel" }, [...lines, dismiss]),
  ]);
  dismiss.addEventListener("click", () => {
    try {
      window.localStorage.setItem(STORAGE_KEY, "1");
    } catch {
      // private browsing; the overlay just reappears next visit
    }
    overlay.remove();
    onDismiss?.();
  });
  document.body.append(overlay);
}
