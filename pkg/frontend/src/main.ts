/**
 * Hash-routed single-page app over the carbonledger /v1 API. State beyond the
 * session token lives on the server; a hard refresh refetches everything.
 */

import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import { SessionState, ViewName, savedBaseUrl } from "./session.js";
import { renderBill } from "./views/bill.js";
import { renderDashboard } from "./views/dashboard.js";
import { renderJournal } from "./views/journal.js";
import { renderLogin } from "./views/login.js";
import { renderMenu } from "./views/menu.js";
import { renderShop } from "./views/shop.js";
import { renderTrip } from "./views/trip.js";

const VIEWS: { name: ViewName; title: string }[] = [
  { name: "dashboard", title: "Dashboard" },
  { name: "trip", title: "Trip" },
  { name: "shop", title: "Shop" },
  { name: "journal", title: "Journal" },
  { name: "bill", title: "Bill" },
  { name: "menu", title: "Menu" },
];

function currentView(session: SessionState): ViewName {
  const hash = window.location.hash.replace(/^#\/?/, "") as ViewName;
  const known = VIEWS.some((v) => v.name === hash);
  if (!session.authenticated) return "login";
  return known ? hash : "dashboard";
}

export function start(root: HTMLElement): void {
  const session = new SessionState();
  const baseUrl = savedBaseUrl();
  const client = new ApiClient(baseUrl);
  if (session.token) client.setToken(session.token);

  const nav = el("nav", { class: "topnav" });
  const content = el("main", { id: "content" });
  root.append(el("h1", {}, "carbonledger"), nav, content);

  function navigate(view: ViewName) {
    window.location.hash = `#/${view}`;
  }

  function buildNav() {
    clear(nav);
    if (!session.authenticated) return;
    for (const view of VIEWS) {
      const link = el("a", { href: `#/${view.name}` }, view.title);
      if (view.name === session.activeView) link.className = "active";
      nav.append(link);
    }
    const logout = el("button", { class: "logout" }, `Sign out (${session.userId})`);
    logout.addEventListener("click", () => {
      session.signOut();
      client.setToken(null);
      navigate("login" as ViewName);
      render();
    });
    nav.append(logout);
  }

  function render() {
    const view = currentView(session);
    session.activeView = view;
    buildNav();
    clear(content);
    const afterCommit = () => undefined; // views report their own status lines
    switch (view) {
      case "login":
        renderLogin(content, {
          client,
          session,
          baseUrl,
          onSignedIn: () => {
            navigate("dashboard");
            render();
          },
        });
        break;
      case "dashboard":
        void renderDashboard(content, { client });
        break;
      case "trip":
        void renderTrip(content, { client, onCommitted: afterCommit });
        break;
      case "shop":
        renderShop(content, { client, onCommitted: afterCommit });
        break;
      case "journal":
        void renderJournal(content, { client, onCommitted: afterCommit });
        break;
      case "bill":
        renderBill(content, { client, onCommitted: afterCommit });
        break;
      case "menu":
        void renderMenu(content, { client, onCommitted: afterCommit });
        break;
    }
  }

  window.addEventListener("hashchange", render);
  render();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  start(document.getElementById("app") as HTMLElement);
}
