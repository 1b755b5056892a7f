/**
 * Dashboard: period summary (totals per source, shares, area average, tips)
 * plus the leaderboard. Everything is rebuilt from GET responses; leaderboard
 * rows render in exactly the order the API returned them.
 */

import {
  ApiClient,
  LeaderboardResponse,
  PeriodKind,
  SummaryResponse,
} from "../api.js";
import { clear, el, errorBanner, formatPercent } from "../dom.js";

export interface DashboardContext {
  client: ApiClient;
}

export function renderSummarySection(summary: SummaryResponse): HTMLElement {
  const section = el("section", { class: "summary" });
  section.append(
    el("h3", {}, `Your ${summary.kind} footprint`),
    el("div", { class: "kg total" }, `${summary.total_kg} kgCO2e`),
    el("div", { class: "muted" },
      `${summary.event_count} events · area average ${summary.area_average_kg} kgCO2e (${summary.region})`),
  );
  const shareList = el("ul", { class: "shares" });
  for (const [source, kg] of Object.entries(summary.by_source)) {
    const share = summary.shares[source] ?? "0";
    shareList.append(
      el("li", { "data-source": source },
        `${source}: ${kg} kgCO2e (${formatPercent(share)})`),
    );
  }
  section.append(shareList);
  const tipList = el("ul", { class: "tips" });
  for (const tip of summary.tips) {
    tipList.append(el("li", { "data-category": tip.category }, tip.message));
  }
  section.append(el("h4", {}, "Tips"), tipList);
  return section;
}

export function renderLeaderboardSection(board: LeaderboardResponse): HTMLElement {
  const section = el("section", { class: "leaderboard" });
  section.append(el("h3", {}, `${board.kind} leaderboard`));
  const table = el("table", {},
    el("thead", {},
      el("tr", {}, el("th", {}, "#"), el("th", {}, "user"), el("th", {}, "kgCO2e"))),
  );
  const tbody = el("tbody", {});
  // API order is authoritative: no client-side sorting
  for (const entry of board.entries) {
    tbody.append(
      el("tr", { "data-user": entry.user_id },
        el("td", {}, String(entry.rank)),
        el("td", {}, entry.display_name),
        el("td", {}, entry.total_kg)),
    );
  }
  table.append(tbody);
  section.append(table);
  return section;
}

export async function renderDashboard(
  container: HTMLElement,
  ctx: DashboardContext,
  kind: PeriodKind = "weekly",
  scope = "all",
): Promise<void> {
  clear(container);
  const controls = el("div", { class: "row controls" });
  const kindSelect = el("select", { id: "kind-select" });
  for (const option of ["weekly", "monthly"] as const) {
    const opt = el("option", { value: option }, option);
    if (option === kind) opt.selected = true;
    kindSelect.append(opt);
  }
  const scopeInput = el("input", {
    id: "scope-input",
    placeholder: 'scope: "all" or friend ids a,b,c',
  });
  scopeInput.value = scope;
  const refresh = el("button", {}, "Refresh");
  controls.append(kindSelect, scopeInput, refresh);

  const body = el("div", { class: "dashboard-body" });
  container.append(el("h2", {}, "Dashboard"), controls, body);

  refresh.addEventListener("click", () => {
    void renderDashboard(container, ctx, kindSelect.value as PeriodKind, scopeInput.value || "all");
  });
  kindSelect.addEventListener("change", () => {
    void renderDashboard(container, ctx, kindSelect.value as PeriodKind, scopeInput.value || "all");
  });

  try {
    const [summary, board] = await Promise.all([
      ctx.client.summary(kind),
      ctx.client.leaderboard(kind, scope),
    ]);
    body.append(renderSummarySection(summary), renderLeaderboardSection(board));
  } catch (err) {
    body.append(errorBanner(String(err)));
  }
}
