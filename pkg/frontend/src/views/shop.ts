/**
 * Shop view: type or scan a barcode, see the product card plus up to four
 * lower-carbon alternatives, and commit whichever card you pick. Selecting a
 * card issues exactly one commit carrying that card's barcode.
 */

import { ApiClient, ApiError, Product, ScanResponse } from "../api.js";
import { clear, el, errorBanner } from "../dom.js";

export interface ShopContext {
  client: ApiClient;
  onCommitted?: () => void;
}

function productCard(
  product: Product,
  label: string,
  onSelect: (barcode: string) => void,
): HTMLElement {
  const card = el(
    "div",
    { class: "card product-card", "data-barcode": product.barcode },
    el("div", { class: "card-label" }, label),
    el("h3", {}, product.name),
    el("div", { class: "muted" }, `${product.category} · ${product.barcode}`),
    el("div", { class: "kg" }, `${product.footprint_kg} kgCO2e`),
  );
  const button = el("button", { class: "commit" }, "Buy this");
  button.addEventListener("click", () => onSelect(product.barcode));
  card.append(button);
  return card;
}

export function renderShop(container: HTMLElement, ctx: ShopContext): void {
  clear(container);
  const input = el("input", {
    id: "barcode-input",
    placeholder: "EAN-13 or UPC-A digits",
    autocomplete: "off",
  });
  const scanButton = el("button", {}, "Scan");
  const results = el("div", { class: "scan-results" });
  const status = el("div", { class: "status", "aria-live": "polite" });

  async function commit(barcode: string) {
    status.textContent = "";
    try {
      const committed = await ctx.client.commitScan(barcode);
      status.textContent =
        `Committed ${committed.product.name}: ${committed.kg_co2e} kgCO2e added to your ledger.`;
      ctx.onCommitted?.();
    } catch (err) {
      status.replaceChildren(errorBanner(describe(err)));
    }
  }

  function showResults(scan: ScanResponse) {
    clear(results);
    results.append(productCard(scan.product, "scanned", commit));
    if (scan.alternatives.length === 0) {
      results.append(
        el("div", { class: "empty-state" }, "Best in category — no lower-carbon alternative."),
      );
      return;
    }
    for (const alternative of scan.alternatives) {
      results.append(productCard(alternative, "alternative", commit));
    }
  }

  async function runScan() {
    status.textContent = "";
    clear(results);
    try {
      showResults(await ctx.client.scan(input.value));
    } catch (err) {
      status.replaceChildren(errorBanner(describe(err)));
    }
  }

  scanButton.addEventListener("click", runScan);
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter") void runScan();
  });

  container.append(
    el("h2", {}, "Shop"),
    el("div", { class: "row" }, input, scanButton),
    status,
    results,
  );
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}
