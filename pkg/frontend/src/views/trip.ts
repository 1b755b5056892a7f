/**
 * Trip view: declared distance or pasted trace, mode/fuel pickers fed from the
 * travel factor table, a read-only alternatives preview, and a confirm that
 * commits exactly one trip.
 */

import { ApiClient, ApiError, TripBody } from "../api.js";
import { clear, el, errorBanner } from "../dom.js";

export interface TripContext {
  client: ApiClient;
  onCommitted?: () => void;
}

function parseTrace(text: string): { lat: number; lon: number }[] {
  // one "lat,lon" pair per line
  return text
    .split("\n")
    .map((line) => line.trim())
    .filter(Boolean)
    .map((line) => {
      const [lat, lon] = line.split(",").map((part) => Number(part.trim()));
      return { lat: lat ?? NaN, lon: lon ?? NaN };
    });
}

export async function renderTrip(container: HTMLElement, ctx: TripContext): Promise<void> {
  clear(container);
  const modeSelect = el("select", { id: "mode-select" });
  try {
    const travel = await ctx.client.factors("travel");
    for (const factor of travel.factors) {
      modeSelect.append(el("option", { value: factor.variant }, factor.variant));
    }
  } catch {
    // factors are a convenience; manual entry still works
    modeSelect.append(el("option", { value: "car:petrol" }, "car:petrol"));
  }

  const distanceInput = el("input", { id: "distance-input", placeholder: "distance km" });
  const traceArea = el("textarea", {
    id: "trace-input",
    placeholder: "or GPS trace: one lat,lon per line",
    rows: "4",
  });
  const previewButton = el("button", {}, "Preview alternatives");
  const confirmButton = el("button", { class: "primary" }, "Log trip");
  const output = el("div", { class: "trip-output", "aria-live": "polite" });

  function body(): TripBody {
    const [mode, fuel] = (modeSelect.value || "car:petrol").split(":");
    const request: TripBody = { mode: mode ?? "car", fuel: fuel ?? "none" };
    const trace = traceArea.value.trim();
    if (trace) request.trace = parseTrace(trace);
    else request.declared_distance_km = distanceInput.value.trim();
    return request;
  }

  previewButton.addEventListener("click", async () => {
    clear(output);
    try {
      const request = body();
      if (request.trace) {
        output.append(errorBanner("preview works with a declared distance; confirm to use the trace"));
        return;
      }
      const preview = await ctx.client.tripAlternatives(
        request.declared_distance_km ?? "0",
        request.mode,
        request.fuel,
      );
      const list = el("ul", { class: "alternatives" });
      for (const alt of preview.alternatives) {
        list.append(
          el("li", {},
            `${alt.mode}:${alt.fuel} — ${alt.footprint_kg} kgCO2e (saves ${alt.savings_kg})`),
        );
      }
      output.append(
        el("div", {}, `this trip: ${preview.footprint_kg} kgCO2e over ${preview.distance_km} km`),
        preview.alternatives.length ? list : el("div", {}, "already the lowest-carbon option"),
      );
    } catch (err) {
      output.append(errorBanner(describe(err)));
    }
  });

  confirmButton.addEventListener("click", async () => {
    clear(output);
    try {
      const record = await ctx.client.createTrip(body());
      output.append(
        el("div", { class: "status" },
          `logged ${record.distance_km} km by ${record.mode}:${record.fuel}: ` +
          `${record.footprint_kg} kgCO2e`),
      );
      ctx.onCommitted?.();
    } catch (err) {
      output.append(errorBanner(describe(err)));
    }
  });

  container.append(
    el("h2", {}, "Trip"),
    el("div", { class: "row" }, modeSelect, distanceInput),
    traceArea,
    el("div", { class: "row" }, previewButton, confirmButton),
    output,
  );
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}
