/** Bill view: paste electricity-bill text, pick the region, commit once. */

import { ApiClient, ApiError } from "../api.js";
import { clear, el, errorBanner } from "../dom.js";

export interface BillContext {
  client: ApiClient;
  onCommitted?: () => void;
}

export function renderBill(container: HTMLElement, ctx: BillContext): void {
  clear(container);
  const textArea = el("textarea", {
    id: "bill-text",
    rows: "8",
    placeholder: "Paste the bill text; the line like 'Grand Total ₹1,450.00' is what counts.",
  });
  const regionInput = el("input", { id: "bill-region", placeholder: "region, e.g. in-ka" });
  const submit = el("button", { class: "primary" }, "Submit bill");
  const output = el("div", { class: "bill-output", "aria-live": "polite" });

  submit.addEventListener("click", async () => {
    clear(output);
    try {
      const reading = await ctx.client.submitBill(textArea.value, regionInput.value);
      output.append(
        el("div", { class: "status" },
          `cost ${reading.total_cost} at ${reading.tariff_per_kwh}/kWh -> ` +
          `${reading.kwh} kWh -> ${reading.footprint_kg} kgCO2e (${reading.region})`),
      );
      ctx.onCommitted?.();
    } catch (err) {
      output.append(errorBanner(describe(err)));
    }
  });

  container.append(
    el("h2", {}, "Electricity bill"),
    textArea,
    el("div", { class: "row" }, regionInput, submit),
    output,
  );
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}
