"""Command-line interface: `serve` runs the HTTP service, everything else is a
thin client over the /v1 JSON API. Client commands print the raw response JSON;
no footprint arithmetic happens on this side.
"""

import json
import sys
from pathlib import Path

import click
import httpx

from .service.config import ServiceConfig


@click.group()
def main():
    """Carbon-footprint accounting service and client."""


@main.command()
@click.option("--port", envvar="CARBONLEDGER_PORT", default=8800, show_default=True, type=int)
@click.option("--host", envvar="CARBONLEDGER_HOST", default="127.0.0.1", show_default=True)
@click.option("--data-dir", envvar="CARBONLEDGER_DATA_DIR", default="carbonledger-data",
              type=click.Path(path_type=Path), show_default=True)
@click.option("--factors", envvar="CARBONLEDGER_FACTORS", type=click.Path(path_type=Path))
@click.option("--catalog", envvar="CARBONLEDGER_CATALOG", type=click.Path(path_type=Path))
@click.option("--tariffs", envvar="CARBONLEDGER_TARIFFS", type=click.Path(path_type=Path))
@click.option("--menus", envvar="CARBONLEDGER_MENUS", type=click.Path(path_type=Path))
@click.option("--tips-config", envvar="CARBONLEDGER_TIPS_CONFIG", type=click.Path(path_type=Path))
@click.option("--no-fsync", is_flag=True, help="Skip fsync on log appends (testing only).")
def serve(port, host, data_dir, factors, catalog, tariffs, menus, tips_config, no_fsync):
    """Run the HTTP service (bundled seed tables unless overridden)."""
    import uvicorn

    from .service.app import create_app

    kwargs = {"listen_port": port, "data_dir": data_dir, "fsync": not no_fsync}
    if factors:
        kwargs["factors_csv"] = factors
    if catalog:
        kwargs["catalog_csv"] = catalog
    if tariffs:
        kwargs["tariffs_csv"] = tariffs
    if menus:
        kwargs["menus_json"] = menus
    if tips_config:
        kwargs["tips_config"] = tips_config
    app = create_app(ServiceConfig(**kwargs))
    uvicorn.run(app, host=host, port=port, log_level="info")


# --- thin client ----------------------------------------------------------------

_base_url = click.option(
    "--base-url", envvar="CARBONLEDGER_URL", default="http://127.0.0.1:8800",
    show_default=True, help="Service base URL.",
)
_token = click.option(
    "--token", envvar="CARBONLEDGER_TOKEN", default=None,
    help="API token (or set CARBONLEDGER_TOKEN).",
)


def _call(base_url, token, method, path, json_body=None, params=None):
    headers = {"Authorization": f"Bearer {token}"} if token else {}
    response = httpx.request(
        method, base_url.rstrip("/") + path,
        json=json_body, params=params, headers=headers, timeout=30.0,
    )
    try:
        payload = response.json()
    except ValueError:
        payload = {"raw": response.text}
    click.echo(json.dumps(payload, indent=2))
    if response.status_code >= 400:
        sys.exit(1)
    return payload


@main.command()
@_base_url
@click.argument("user_id")
@click.option("--name", required=True, help="Display name.")
@click.option("--region", required=True, help="Area key, e.g. in-ka.")
@click.option("--password", prompt=True, hide_input=True)
def signup(base_url, user_id, name, region, password):
    """Create an account; prints the API token."""
    _call(base_url, None, "POST", "/v1/users",
          {"user_id": user_id, "display_name": name, "region": region, "password": password})


@main.command()
@_base_url
@click.argument("user_id")
@click.option("--password", prompt=True, hide_input=True)
def login(base_url, user_id, password):
    """Exchange credentials for a fresh token (the old one stops working)."""
    _call(base_url, None, "POST", "/v1/login", {"user_id": user_id, "password": password})


@main.command()
@_base_url
@_token
@click.option("--mode", required=True)
@click.option("--fuel", required=True)
@click.option("--distance-km", default=None, help="Declared distance.")
@click.option("--trace-file", type=click.Path(exists=True, path_type=Path),
              help="JSON file with [[lat, lon], ...] points.")
@click.option("--at", "occurred_at", default=None, help="RFC 3339 timestamp override.")
def trip(base_url, token, mode, fuel, distance_km, trace_file, occurred_at):
    """Log a trip (commits one ledger event)."""
    body = {"mode": mode, "fuel": fuel}
    if distance_km is not None:
        body["declared_distance_km"] = distance_km
    if trace_file is not None:
        points = json.loads(trace_file.read_text())
        body["trace"] = [{"lat": p[0], "lon": p[1]} for p in points]
    if occurred_at:
        body["occurred_at"] = occurred_at
    _call(base_url, token, "POST", "/v1/trips", body)


@main.command()
@_base_url
@_token
@click.option("--mode", required=True)
@click.option("--fuel", required=True)
@click.option("--distance-km", required=True)
def alternatives(base_url, token, mode, fuel, distance_km):
    """Preview lower-carbon transport options (read-only)."""
    _call(base_url, token, "GET", "/v1/trips/alternatives",
          params={"mode": mode, "fuel": fuel, "distance_km": distance_km})


@main.command()
@_base_url
@_token
@click.argument("raw_barcode")
def scan(base_url, token, raw_barcode):
    """Look up a barcode and its better alternatives (read-only)."""
    _call(base_url, token, "POST", "/v1/scan", {"raw_barcode": raw_barcode})


@main.command()
@_base_url
@_token
@click.argument("barcode")
@click.option("--at", "occurred_at", default=None)
def commit(base_url, token, barcode, occurred_at):
    """Commit a scanned (or alternative) product purchase to the ledger."""
    body = {"barcode": barcode}
    if occurred_at:
        body["occurred_at"] = occurred_at
    _call(base_url, token, "POST", "/v1/scan/commit", body)


@main.command()
@_base_url
@_token
@click.option("--region", required=True)
@click.option("--file", "bill_file", type=click.Path(exists=True, path_type=Path),
              help="Bill text file; reads stdin when omitted.")
@click.option("--at", "occurred_at", default=None)
def bill(base_url, token, region, bill_file, occurred_at):
    """Submit electricity bill text (commits one ledger event)."""
    text = bill_file.read_text() if bill_file else sys.stdin.read()
    body = {"text": text, "region": region}
    if occurred_at:
        body["occurred_at"] = occurred_at
    _call(base_url, token, "POST", "/v1/bills", body)


@main.command()
@_base_url
@_token
@click.argument("restaurant_id", required=False)
def menu(base_url, token, restaurant_id):
    """List restaurants, or show one menu with computed footprints."""
    if restaurant_id:
        _call(base_url, token, "GET", f"/v1/menus/{restaurant_id}")
    else:
        _call(base_url, token, "GET", "/v1/menus")


@main.command()
@_base_url
@_token
@click.argument("restaurant_id")
@click.argument("item_id")
def recommend(base_url, token, restaurant_id, item_id):
    """Lower-carbon items in the same menu category (read-only)."""
    _call(base_url, token, "GET", f"/v1/menus/{restaurant_id}/recommend",
          params={"item": item_id})


@main.command()
@_base_url
@_token
@click.argument("restaurant_id")
@click.argument("item_id")
@click.option("--at", "occurred_at", default=None)
def meal(base_url, token, restaurant_id, item_id, occurred_at):
    """Commit a restaurant meal to the ledger."""
    body = {"restaurant_id": restaurant_id, "item_id": item_id}
    if occurred_at:
        body["occurred_at"] = occurred_at
    _call(base_url, token, "POST", "/v1/meals", body)


@main.group()
def journal():
    """Grocery journal CRUD and purchase."""


@journal.command("list")
@_base_url
@_token
def journal_list(base_url, token):
    _call(base_url, token, "GET", "/v1/journal")


@journal.command("add")
@_base_url
@_token
@click.argument("label")
@click.option("--quantity", default=1, show_default=True, type=int)
@click.option("--barcode", default=None, help="Resolve footprint from the catalog.")
@click.option("--kg-each", default=None, help="Footprint per item when no barcode.")
def journal_add(base_url, token, label, quantity, barcode, kg_each):
    body = {"label": label, "quantity": quantity}
    if barcode:
        body["barcode"] = barcode
    if kg_each is not None:
        body["footprint_kg_each"] = kg_each
    _call(base_url, token, "POST", "/v1/journal", body)


@journal.command("update")
@_base_url
@_token
@click.argument("entry_id")
@click.option("--label", default=None)
@click.option("--quantity", default=None, type=int)
@click.option("--barcode", default=None)
def journal_update(base_url, token, entry_id, label, quantity, barcode):
    body = {}
    if label is not None:
        body["label"] = label
    if quantity is not None:
        body["quantity"] = quantity
    if barcode is not None:
        body["barcode"] = barcode
    _call(base_url, token, "PATCH", f"/v1/journal/{entry_id}", body)


@journal.command("rm")
@_base_url
@_token
@click.argument("entry_id")
def journal_rm(base_url, token, entry_id):
    _call(base_url, token, "DELETE", f"/v1/journal/{entry_id}")


@journal.command("buy")
@_base_url
@_token
@click.argument("entry_id")
def journal_buy(base_url, token, entry_id):
    """Mark purchased and commit quantity x footprint to the ledger."""
    _call(base_url, token, "POST", f"/v1/journal/{entry_id}/purchase")


@main.command()
@_base_url
@_token
@click.option("--kind", default="weekly", type=click.Choice(["weekly", "monthly"]),
              show_default=True)
@click.option("--scope", default="all", show_default=True,
              help='"all" or comma-separated user ids (friend set).')
@click.option("--anchor", default=None, help="Anchor date YYYY-MM-DD (default today).")
def leaderboard(base_url, token, kind, scope, anchor):
    """Ascending footprint leaderboard: least carbon wins."""
    params = {"kind": kind, "scope": scope}
    if anchor:
        params["anchor"] = anchor
    _call(base_url, token, "GET", "/v1/leaderboard", params=params)


@main.command()
@_base_url
@_token
@click.option("--kind", default="weekly", type=click.Choice(["weekly", "monthly"]),
              show_default=True)
@click.option("--anchor", default=None)
def summary(base_url, token, kind, anchor):
    """Per-source totals, area average and personalized tips."""
    params = {"kind": kind}
    if anchor:
        params["anchor"] = anchor
    _call(base_url, token, "GET", "/v1/summary", params=params)


if __name__ == "__main__":
    main()
