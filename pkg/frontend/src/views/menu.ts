/**
 * Menu view: pick a restaurant, browse items with computed footprints, see
 * lower-carbon recommendations in the same category, commit a meal.
 */

import { ApiClient, ApiError, MenuItem } from "../api.js";
import { clear, el, errorBanner } from "../dom.js";

export interface MenuContext {
  client: ApiClient;
  onCommitted?: () => void;
}

export async function renderMenu(container: HTMLElement, ctx: MenuContext): Promise<void> {
  clear(container);
  const restaurantSelect = el("select", { id: "restaurant-select" });
  const itemsDiv = el("div", { class: "menu-items" });
  const detailDiv = el("div", { class: "menu-detail", "aria-live": "polite" });

  async function commitMeal(restaurantId: string, item: MenuItem) {
    try {
      const meal = await ctx.client.commitMeal(restaurantId, item.id);
      detailDiv.append(
        el("div", { class: "status" },
          `enjoy ${meal.name}: ${meal.footprint_kg} kgCO2e added to your ledger`),
      );
      ctx.onCommitted?.();
    } catch (err) {
      detailDiv.append(errorBanner(describe(err)));
    }
  }

  async function showRecommendations(restaurantId: string, item: MenuItem) {
    clear(detailDiv);
    try {
      const rec = await ctx.client.recommend(restaurantId, item.id);
      detailDiv.append(
        el("h4", {}, `${rec.chosen.name} — ${rec.chosen.footprint_kg} kgCO2e`),
      );
      const eatButton = el("button", { class: "primary" }, `Eat ${rec.chosen.name}`);
      eatButton.addEventListener("click", () => void commitMeal(restaurantId, rec.chosen));
      detailDiv.append(eatButton);
      if (rec.recommendations.length === 0) {
        detailDiv.append(el("div", { class: "empty-state" }, "lowest-carbon pick in its category"));
        return;
      }
      const list = el("ul", { class: "recommendations" });
      for (const better of rec.recommendations) {
        const li = el("li", {}, `${better.name} — ${better.footprint_kg} kgCO2e `);
        const swap = el("button", {}, "eat this instead");
        swap.addEventListener("click", () => void commitMeal(restaurantId, better));
        li.append(swap);
        list.append(li);
      }
      detailDiv.append(el("div", {}, "lower-carbon picks:"), list);
    } catch (err) {
      detailDiv.append(errorBanner(describe(err)));
    }
  }

  async function showMenu(restaurantId: string) {
    clear(itemsDiv);
    clear(detailDiv);
    try {
      const menu = await ctx.client.menu(restaurantId);
      const list = el("ul", { class: "menu-list" });
      for (const item of menu.items) {
        const li = el("li", { "data-item": item.id },
          `${item.name} (${item.category}) — ${item.footprint_kg} kgCO2e `);
        const pick = el("button", {}, "pick");
        pick.addEventListener("click", () => void showRecommendations(restaurantId, item));
        li.append(pick);
        list.append(li);
      }
      itemsDiv.append(list);
    } catch (err) {
      itemsDiv.append(errorBanner(describe(err)));
    }
  }

  restaurantSelect.addEventListener("change", () => void showMenu(restaurantSelect.value));

  try {
    const { restaurant_ids } = await ctx.client.restaurants();
    for (const id of restaurant_ids) {
      restaurantSelect.append(el("option", { value: id }, id));
    }
    container.append(el("h2", {}, "Restaurant menu"), restaurantSelect, itemsDiv, detailDiv);
    if (restaurant_ids.length > 0 && restaurant_ids[0]) {
      await showMenu(restaurant_ids[0]);
    }
  } catch (err) {
    container.append(el("h2", {}, "Restaurant menu"), errorBanner(describe(err)));
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}
