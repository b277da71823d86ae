// Tiny DOM helpers; no framework.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else if (key === "title") node.title = value; // hover hint
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function formatNumber(value: number | null, digits = 3): string {
  if (value === null) return "–";
  if (Number.isInteger(value)) return String(value);
  return value.toFixed(digits);
}

export function errorBanner(message: string, retry: () => void): HTMLElement {
  const button = el("button", { class: "retry" }, ["retry"]);
  button.addEventListener("click", retry);
  return el("div", { class: "error-banner" }, [`request failed: ${message} `, button]);
}
