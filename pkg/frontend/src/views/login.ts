/** Login / signup view; the only screens reachable without a token. */

import { ApiClient, ApiError } from "../api.js";
import { clear, el, errorBanner } from "../dom.js";
import { SessionState, saveBaseUrl } from "../session.js";

export interface LoginContext {
  client: ApiClient;
  session: SessionState;
  baseUrl: string;
  onSignedIn: () => void;
}

export function renderLogin(container: HTMLElement, ctx: LoginContext): void {
  clear(container);
  const status = el("div", { class: "status", "aria-live": "polite" });

  const baseInput = el("input", { id: "base-url", value: ctx.baseUrl });
  const userInput = el("input", { id: "login-user", placeholder: "user id" });
  const passwordInput = el("input", {
    id: "login-password", type: "password", placeholder: "password",
  });
  const nameInput = el("input", { id: "signup-name", placeholder: "display name (signup)" });
  const regionInput = el("input", { id: "signup-region", placeholder: "region, e.g. in-ka (signup)" });

  async function finish(action: "login" | "signup") {
    status.textContent = "";
    saveBaseUrl(baseInput.value);
    try {
      const granted =
        action === "login"
          ? await ctx.client.login(userInput.value, passwordInput.value)
          : await ctx.client.signup(
              userInput.value, nameInput.value || userInput.value,
              regionInput.value || "unknown", passwordInput.value,
            );
      ctx.session.signIn(granted.user_id, granted.token);
      ctx.client.setToken(granted.token);
      ctx.onSignedIn();
    } catch (err) {
      status.replaceChildren(errorBanner(describe(err)));
    }
  }

  const loginButton = el("button", { class: "primary" }, "Log in");
  loginButton.addEventListener("click", () => void finish("login"));
  const signupButton = el("button", {}, "Sign up");
  signupButton.addEventListener("click", () => void finish("signup"));

  container.append(
    el("h2", {}, "Welcome"),
    el("label", {}, "service URL ", baseInput),
    el("div", { class: "row" }, userInput, passwordInput),
    el("div", { class: "row" }, nameInput, regionInput),
    el("div", { class: "row" }, loginButton, signupButton),
    status,
  );
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return String(err);
}
