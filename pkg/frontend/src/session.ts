/**
 * Session state: token, user id and the active view. The token survives a
 * hard refresh via sessionStorage; everything else is refetched from GETs.
 */

export type ViewName =
  | "login"
  | "dashboard"
  | "trip"
  | "shop"
  | "journal"
  | "bill"
  | "menu";

const TOKEN_KEY = "carbonledger.token";
const USER_KEY = "carbonledger.user";
const BASE_KEY = "carbonledger.base";

export class SessionState {
  token: string | null = null;
  userId: string | null = null;
  activeView: ViewName = "login";

  constructor(private storage: Storage = sessionStorage) {
    this.token = storage.getItem(TOKEN_KEY);
    this.userId = storage.getItem(USER_KEY);
  }

  get authenticated(): boolean {
    return this.token !== null;
  }

  signIn(userId: string, token: string): void {
    this.userId = userId;
    this.token = token;
    this.storage.setItem(TOKEN_KEY, token);
    this.storage.setItem(USER_KEY, userId);
  }

  signOut(): void {
    this.token = null;
    this.userId = null;
    this.storage.removeItem(TOKEN_KEY);
    this.storage.removeItem(USER_KEY);
  }
}

export function savedBaseUrl(storage: Storage = sessionStorage): string {
  return storage.getItem(BASE_KEY) ?? "http://127.0.0.1:8800";
}

export function saveBaseUrl(url: string, storage: Storage = sessionStorage): void {
  storage.setItem(BASE_KEY, url);
}
