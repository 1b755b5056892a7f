/**
 * Typed client for the carbonledger /v1 JSON API.
 *
 * Every kilogram / kWh / share figure arrives as a decimal string and stays a
 * string: the UI renders server numbers, it never computes footprints. Each
 * method issues exactly one request; there are no retries on mutations.
 */

export interface TokenResponse {
  user_id: string;
  token: string;
}

export interface Profile {
  user_id: string;
  display_name: string;
  region: string;
}

export interface Factor {
  category: string;
  variant: string;
  unit: string;
  kg_co2e_per_unit: string;
  source_note: string;
}

export interface TripBody {
  mode: string;
  fuel: string;
  declared_distance_km?: string;
  trace?: { lat: number; lon: number }[];
}

export interface TripResponse {
  event_id: string;
  user_id: string;
  mode: string;
  fuel: string;
  distance_km: string;
  footprint_kg: string;
  occurred_at: string;
}

export interface Alternative {
  mode: string;
  fuel: string;
  footprint_kg: string;
  savings_kg: string;
}

export interface AlternativesResponse {
  distance_km: string;
  footprint_kg: string;
  alternatives: Alternative[];
}

export interface Product {
  barcode: string;
  name: string;
  category: string;
  footprint_kg: string;
}

export interface ScanResponse {
  product: Product;
  alternatives: Product[];
}

export interface ScanCommitResponse {
  event_id: string;
  product: Product;
  kg_co2e: string;
  occurred_at: string;
}

export interface BillResponse {
  event_id: string;
  region: string;
  total_cost: string;
  tariff_per_kwh: string;
  kwh: string;
  footprint_kg: string;
  occurred_at: string;
}

export interface Ingredient {
  ingredient: string;
  grams: string;
}

export interface MenuItem {
  id: string;
  name: string;
  category: string;
  footprint_kg: string;
  ingredients: Ingredient[];
}

export interface MenuResponse {
  restaurant_id: string;
  items: MenuItem[];
}

export interface RecommendResponse {
  chosen: MenuItem;
  recommendations: MenuItem[];
}

export interface MealResponse {
  event_id: string;
  restaurant_id: string;
  item_id: string;
  name: string;
  footprint_kg: string;
  occurred_at: string;
}

export interface JournalEntry {
  entry_id: string;
  user_id: string;
  label: string;
  barcode: string | null;
  quantity: number;
  footprint_kg_each: string;
  total_kg: string;
  state: "pending" | "purchased";
  created_at: string;
  updated_at: string;
}

export interface PurchaseResponse {
  event_id: string;
  kg_co2e: string;
  entry: JournalEntry;
}

export interface LeaderboardEntry {
  rank: number;
  user_id: string;
  display_name: string;
  total_kg: string;
}

export interface LeaderboardResponse {
  kind: string;
  window: { start: string; end: string };
  entries: LeaderboardEntry[];
}

export interface Tip {
  category: string;
  message: string;
  share: string;
}

export interface SummaryResponse {
  user_id: string;
  region: string;
  kind: string;
  window: { start: string; end: string };
  event_count: number;
  total_kg: string;
  by_source: Record<string, string>;
  shares: Record<string, string>;
  area_average_kg: string;
  tips: Tip[];
}

export type PeriodKind = "weekly" | "monthly";

/** Error body the service returns: {code, message, detail}. */
export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: unknown = {},
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private token: string | null = null;

  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    params?: Record<string, string>,
  ): Promise<T> {
    let url = this.baseUrl.replace(/\/$/, "") + path;
    if (params) {
      url += "?" + new URLSearchParams(params).toString();
    }
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(url, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const payload = text ? JSON.parse(text) : {};
    if (!response.ok) {
      throw new ApiError(
        response.status,
        payload.code ?? "http_error",
        payload.message ?? `HTTP ${response.status}`,
        payload.detail,
      );
    }
    return payload as T;
  }

  // auth
  signup(userId: string, displayName: string, region: string, password: string) {
    return this.request<TokenResponse>("POST", "/v1/users", {
      user_id: userId,
      display_name: displayName,
      region,
      password,
    });
  }

  login(userId: string, password: string) {
    return this.request<TokenResponse>("POST", "/v1/login", {
      user_id: userId,
      password,
    });
  }

  me() {
    return this.request<Profile>("GET", "/v1/me");
  }

  // factors
  factors(category?: string) {
    return this.request<{ version: number; factors: Factor[] }>(
      "GET",
      "/v1/factors",
      undefined,
      category ? { category } : undefined,
    );
  }

  // trips
  createTrip(body: TripBody) {
    return this.request<TripResponse>("POST", "/v1/trips", body);
  }

  tripAlternatives(distanceKm: string, mode: string, fuel: string) {
    return this.request<AlternativesResponse>(
      "GET",
      "/v1/trips/alternatives",
      undefined,
      { distance_km: distanceKm, mode, fuel },
    );
  }

  // shop
  scan(rawBarcode: string) {
    return this.request<ScanResponse>("POST", "/v1/scan", { raw_barcode: rawBarcode });
  }

  commitScan(barcode: string) {
    return this.request<ScanCommitResponse>("POST", "/v1/scan/commit", { barcode });
  }

  // bills
  submitBill(text: string, region: string) {
    return this.request<BillResponse>("POST", "/v1/bills", { text, region });
  }

  // menus
  restaurants() {
    return this.request<{ restaurant_ids: string[] }>("GET", "/v1/menus");
  }

  menu(restaurantId: string) {
    return this.request<MenuResponse>("GET", `/v1/menus/${encodeURIComponent(restaurantId)}`);
  }

  recommend(restaurantId: string, itemId: string) {
    return this.request<RecommendResponse>(
      "GET",
      `/v1/menus/${encodeURIComponent(restaurantId)}/recommend`,
      undefined,
      { item: itemId },
    );
  }

  commitMeal(restaurantId: string, itemId: string) {
    return this.request<MealResponse>("POST", "/v1/meals", {
      restaurant_id: restaurantId,
      item_id: itemId,
    });
  }

  // journal
  journal() {
    return this.request<{ entries: JournalEntry[] }>("GET", "/v1/journal");
  }

  journalCreate(label: string, quantity: number, barcode?: string, kgEach?: string) {
    const body: Record<string, unknown> = { label, quantity };
    if (barcode) body.barcode = barcode;
    if (kgEach !== undefined) body.footprint_kg_each = kgEach;
    return this.request<JournalEntry>("POST", "/v1/journal", body);
  }

  journalPatch(entryId: string, patch: { label?: string; quantity?: number; barcode?: string }) {
    return this.request<JournalEntry>("PATCH", `/v1/journal/${encodeURIComponent(entryId)}`, patch);
  }

  journalDelete(entryId: string) {
    return this.request<{ acknowledged: boolean; entry_id: string }>(
      "DELETE",
      `/v1/journal/${encodeURIComponent(entryId)}`,
    );
  }

  journalPurchase(entryId: string) {
    return this.request<PurchaseResponse>(
      "POST",
      `/v1/journal/${encodeURIComponent(entryId)}/purchase`,
      {},
    );
  }

  // leaderboard / summary
  leaderboard(kind: PeriodKind, scope = "all") {
    return this.request<LeaderboardResponse>("GET", "/v1/leaderboard", undefined, {
      kind,
      scope,
    });
  }

  summary(kind: PeriodKind) {
    return this.request<SummaryResponse>("GET", "/v1/summary", undefined, { kind });
  }
}
