/**
 * Journal view: grocery list CRUD plus the purchase step. Purchased rows
 * render locked (no edit/delete-state mutations beyond delete, no re-buy).
 */

import { ApiClient, ApiError, JournalEntry } from "../api.js";
import { clear, el, errorBanner } from "../dom.js";

export interface JournalContext {
  client: ApiClient;
  onCommitted?: () => void;
}

function entryRow(
  entry: JournalEntry,
  actions: {
    purchase: (id: string) => void;
    remove: (id: string) => void;
    bumpQuantity: (id: string, quantity: number) => void;
  },
): HTMLElement {
  const locked = entry.state === "purchased";
  const row = el(
    "tr",
    { "data-entry": entry.entry_id, class: locked ? "locked" : "pending" },
    el("td", {}, entry.label),
    el("td", {}, String(entry.quantity)),
    el("td", {}, entry.footprint_kg_each),
    el("td", {}, entry.total_kg),
    el("td", {}, locked ? "purchased 🔒" : "pending"),
  );
  const cell = el("td", {});
  if (!locked) {
    const plus = el("button", { class: "qty-plus" }, "+1");
    plus.addEventListener("click", () => actions.bumpQuantity(entry.entry_id, entry.quantity + 1));
    const buy = el("button", { class: "buy" }, "Purchase");
    buy.addEventListener("click", () => actions.purchase(entry.entry_id));
    cell.append(plus, buy);
  }
  const remove = el("button", { class: "remove" }, "Delete");
  remove.addEventListener("click", () => actions.remove(entry.entry_id));
  cell.append(remove);
  row.append(cell);
  return row;
}

export async function renderJournal(container: HTMLElement, ctx: JournalContext): Promise<void> {
  clear(container);
  const status = el("div", { class: "status", "aria-live": "polite" });
  const labelInput = el("input", { placeholder: "label", id: "journal-label" });
  const quantityInput = el("input", { placeholder: "qty", id: "journal-qty", value: "1" });
  const barcodeInput = el("input", { placeholder: "barcode (optional)", id: "journal-barcode" });
  const kgInput = el("input", { placeholder: "kg each (no barcode)", id: "journal-kg" });
  const addButton = el("button", { class: "primary" }, "Add");

  const table = el("table", { class: "journal" },
    el("thead", {},
      el("tr", {},
        el("th", {}, "item"), el("th", {}, "qty"), el("th", {}, "kg each"),
        el("th", {}, "kg total"), el("th", {}, "state"), el("th", {}, ""))),
  );
  const tbody = el("tbody", {});
  table.append(tbody);

  const rerender = () => renderJournal(container, ctx);

  async function guard(action: () => Promise<unknown>, refresh = true) {
    status.textContent = "";
    try {
      await action();
      if (refresh) await rerender();
    } catch (err) {
      status.replaceChildren(errorBanner(describe(err)));
    }
  }

  addButton.addEventListener("click", () =>
    guard(() =>
      ctx.client.journalCreate(
        labelInput.value,
        Number(quantityInput.value || "1"),
        barcodeInput.value || undefined,
        barcodeInput.value ? undefined : kgInput.value || undefined,
      ),
    ),
  );

  const actions = {
    purchase: (id: string) =>
      guard(async () => {
        await ctx.client.journalPurchase(id);
        ctx.onCommitted?.();
      }),
    remove: (id: string) => guard(() => ctx.client.journalDelete(id)),
    bumpQuantity: (id: string, quantity: number) =>
      guard(() => ctx.client.journalPatch(id, { quantity })),
  };

  try {
    const listing = await ctx.client.journal();
    for (const entry of listing.entries) {
      tbody.append(entryRow(entry, actions));
    }
  } catch (err) {
    status.replaceChildren(errorBanner(describe(err)));
  }

  container.append(
    el("h2", {}, "Grocery journal"),
    el("div", { class: "row" }, labelInput, quantityInput, barcodeInput, kgInput, addButton),
    status,
    table,
  );
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}
