/** Tiny DOM helpers; no framework, no virtual DOM. */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

export function clear(node: HTMLElement): void {
  node.replaceChildren();
}

/** Render a share string like "0.512" as "51.2%" — display formatting only. */
export function formatPercent(share: string): string {
  const value = Number(share) * 100;
  return `${value.toFixed(1)}%`;
}

export function errorBanner(message: string): HTMLElement {
  return el("div", { class: "error", role: "alert" }, message);
}
