"""Acceptance suite: one test per criterion, reported as ACCEPTANCE lines.

Desk-scale oracles (enumeration, analytic geometry, reference models, seeded
randomness) pin every expected value; the service-level criteria drive a real
HTTP server subprocess, including a kill -9 and replay.
"""

import json
import math
import random
import signal
import socket
import subprocess
import sys
import time
from datetime import date, datetime, timedelta, timezone
from decimal import Decimal
from pathlib import Path

import httpx
import pytest

from carbonledger import errors
from carbonledger.barcodes import Barcode, Catalog, Product, check_digit, validate
from carbonledger.bills import BillText, TariffTable, bill_footprint, cost_to_kwh, load_tariffs
from carbonledger.factors import load_factors
from carbonledger.journal import EntryState, JournalStore
from carbonledger.ledger import (
    EventSource,
    FootprintEvent,
    LedgerStore,
    Period,
    PeriodKind,
    UserProfile,
    leaderboard,
)
from carbonledger.menus import IngredientQuantity, Menu, MenuItem, item_footprint, recommend_menu
from carbonledger.trips import GeoPoint, TripRequest, compute_trip, haversine_km

from conftest import FACTORS_CSV


# --- criterion 1: barcode suite ------------------------------------------------


@pytest.mark.acceptance("barcode-suite")
def test_barcode_suite():
    started = time.perf_counter()
    rng = random.Random(20240601)

    assert check_digit("400638133393") == "1"
    assert check_digit("000000000000") == "0"

    codes = []
    for _ in range(1000):
        first12 = "".join(rng.choice("0123456789") for _ in range(12))
        code = first12 + check_digit(first12)
        assert validate(code)
        codes.append(code)

    for code in codes:
        for pos in range(13):
            original = code[pos]
            for digit in "0123456789":
                if digit == original:
                    continue
                assert not validate(code[:pos] + digit + code[pos + 1 :])

    assert time.perf_counter() - started < 1.0


# --- criterion 2: alternatives oracle --------------------------------------------


def _random_catalog(rng, size):
    products = {}
    categories = ["snacks", "beverages", "dairy", "staples"]
    while len(products) < size:
        prefix = "".join(rng.choice("0123456789") for _ in range(12))
        code = prefix + check_digit(prefix)
        if code in products:
            continue
        footprint = Decimal(rng.randrange(0, 60)) / 10  # coarse grid -> ties
        products[code] = Product(
            Barcode(code), f"p{len(products)}", rng.choice(categories), footprint
        )
    return Catalog(products)


def _random_menu(rng, registry, size):
    pool = [f.key.variant for f in registry.variants("food_ingredient")]
    recipes = []
    items = []
    for n in range(size):
        if recipes and rng.random() < 0.25:
            ingredients = rng.choice(recipes)  # duplicate recipe -> footprint tie
        else:
            ingredients = tuple(
                IngredientQuantity(rng.choice(pool), Decimal(rng.randrange(10, 400)))
                for _ in range(rng.randrange(1, 4))
            )
            recipes.append(ingredients)
        items.append(MenuItem(f"item-{n:03d}", f"item {n}", rng.choice(["main", "side"]), ingredients))
    return Menu("fixture", tuple(items))


@pytest.mark.acceptance("alternatives-oracle")
def test_alternatives_oracle():
    rng = random.Random(7341)
    registry = load_factors(FACTORS_CSV)

    for _ in range(120):
        catalog = _random_catalog(rng, rng.randrange(2, 101))
        item = rng.choice(catalog.all_products())
        got = catalog.alternatives(item)
        oracle = [
            p
            for p in catalog.all_products()
            if p.category == item.category
            and p.footprint_kg < item.footprint_kg
            and p.barcode != item.barcode
        ]
        oracle.sort(key=lambda p: (p.footprint_kg, p.barcode.digits))
        assert got == oracle[:4]

    for _ in range(80):
        menu = _random_menu(rng, registry, rng.randrange(2, 101))
        chosen = rng.choice(menu.items)
        got = recommend_menu(menu, chosen.id, registry)
        reference = item_footprint(chosen, registry)
        oracle = [
            i
            for i in menu.items
            if i.category == chosen.category
            and i.id != chosen.id
            and item_footprint(i, registry) < reference
        ]
        oracle.sort(key=lambda i: (item_footprint(i, registry), i.id))
        assert got == oracle[:4]


# --- criterion 3: trip math ---------------------------------------------------------


@pytest.mark.acceptance("trip-math")
def test_trip_math():
    rng = random.Random(4242)
    for _ in range(500):
        a = GeoPoint(rng.uniform(-90, 90), rng.uniform(-180, 180))
        b = GeoPoint(rng.uniform(-90, 90), rng.uniform(-180, 180))
        assert haversine_km(a, b) == haversine_km(b, a)  # exact symmetry

    quarter = haversine_km(GeoPoint(0, 0), GeoPoint(0, 90))
    assert abs(quarter - 10007.543398) <= 1e-3
    assert abs(quarter - math.pi * 6371.0 / 2) <= 1e-3  # analytic arc oracle

    summed = sum(
        haversine_km(GeoPoint(0, lon), GeoPoint(0, lon + 1)) for lon in range(0, 40)
    )
    direct = haversine_km(GeoPoint(0, 0), GeoPoint(0, 40))
    assert abs(summed - direct) <= 1e-9 * direct

    registry = load_factors(FACTORS_CSV)
    factor = registry.lookup("travel", "car:petrol").kg_co2e_per_unit
    ts = datetime(2024, 6, 5, tzinfo=timezone.utc)
    for _ in range(200):
        d = Decimal(rng.randrange(0, 10_000_000)) / 1000
        alpha = Decimal(rng.randrange(0, 10_000)) / 100
        base = compute_trip(
            TripRequest("u", "car", "petrol", ts, declared_distance_km=d), registry
        ).footprint_kg
        scaled = compute_trip(
            TripRequest("u", "car", "petrol", ts, declared_distance_km=d * alpha), registry
        ).footprint_kg
        if base:
            assert abs(scaled - alpha * base) <= Decimal("1e-12") * abs(alpha * base)

    zero = compute_trip(
        TripRequest("u", "car", "petrol", ts, declared_distance_km=Decimal(0)), registry
    )
    assert zero.footprint_kg == 0


# --- criterion 4: bill pipeline ----------------------------------------------------------


@pytest.mark.acceptance("bill-pipeline")
def test_bill_pipeline():
    registry = load_factors(FACTORS_CSV)
    tariffs = load_tariffs("region,tariff_per_kwh\nin-ka,7.25\n")
    reading = bill_footprint(
        BillText.from_text("subtotal 900.00\nGrand Total ₹1,450.00", "in-ka"),
        tariffs,
        registry,
    )
    assert reading.kwh == Decimal("200.000")
    assert reading.footprint_kg == Decimal("164.000")

    rng = random.Random(555)
    for _ in range(500):
        cost = Decimal(rng.randrange(0, 1_000_000)) / 100
        tariff = Decimal(rng.randrange(1, 10_000)) / 100
        table = TariffTable({"r": tariff})
        kwh = cost_to_kwh(cost, "r", table)
        assert abs(kwh * tariff - cost) <= Decimal("0.0005") * tariff


# --- criterion 5: ledger conservation and windows ---------------------------------------------


@pytest.mark.acceptance("ledger-conservation-windows")
def test_ledger_conservation_and_windows():
    rng = random.Random(808)
    store = LedgerStore()
    users = [f"user{i}" for i in range(10)]
    expected = {u: Decimal(0) for u in users}  # independent accumulator
    span_start = datetime(2024, 1, 1, tzinfo=timezone.utc)

    for n in range(1000):
        user = rng.choice(users)
        kg = Decimal(rng.randrange(0, 100_000)) / 1000
        occurred = span_start + timedelta(minutes=rng.randrange(0, 90 * 24 * 60))
        store.append(
            FootprintEvent(
                event_id=f"acc-{n}",
                user_id=user,
                source=rng.choice(list(EventSource)),
                kg_co2e=kg,
                occurred_at=occurred,
            )
        )
        expected[user] += kg

    monday = date(2024, 1, 1)
    assert monday.weekday() == 0
    weeks = [monday + timedelta(days=7 * i) for i in range(14)]  # covers the 90-day span
    for user in users:
        weekly_sum = Decimal(0)
        for week_anchor in weeks:
            weekly_sum += store.user_total(user, Period(PeriodKind.WEEKLY, week_anchor))
        assert weekly_sum == expected[user]

    # Monday-00:00 boundary membership
    boundary_store = LedgerStore()
    new_week = datetime(2024, 1, 8, 0, 0, tzinfo=timezone.utc)
    boundary_store.append(
        FootprintEvent("b1", "u", EventSource.TRIP, Decimal(1), new_week)
    )
    boundary_store.append(
        FootprintEvent("b2", "u", EventSource.TRIP, Decimal(2), new_week - timedelta(seconds=1))
    )
    assert boundary_store.user_total("u", Period(PeriodKind.WEEKLY, date(2024, 1, 7))) == 2
    assert boundary_store.user_total("u", Period(PeriodKind.WEEKLY, date(2024, 1, 8))) == 1

    # 50-user leaderboard vs sort-and-rank oracle, ties included
    board_store = LedgerStore()
    totals = {}
    for i in range(50):
        user = f"u{i:02d}"
        kg = Decimal(rng.randrange(0, 15))  # coarse grid forces ties
        totals[user] = kg
        if kg:
            board_store.append(
                FootprintEvent(
                    f"lb-{i}", user, EventSource.TRIP, kg,
                    datetime(2024, 1, 3, tzinfo=timezone.utc),
                )
            )
    profiles = [UserProfile(u, u, "area") for u in totals]
    got = leaderboard(board_store, profiles, Period(PeriodKind.WEEKLY, date(2024, 1, 1)))

    ordered = sorted(totals.items(), key=lambda kv: (kv[1], kv[0]))
    oracle = []
    for i, (user, total) in enumerate(ordered):
        rank = oracle[i - 1][2] if i and total == ordered[i - 1][1] else i + 1
        oracle.append((user, total, rank))
    assert [(e.user_id, e.total_kg, e.rank) for e in got] == oracle
    assert any(e.rank == oracle[i - 1][2] for i, e in enumerate(got) if i)  # ties exercised


# --- criterion 6: journal model test -----------------------------------------------------------


@pytest.mark.acceptance("journal-model")
def test_journal_model_500_ops(catalog):
    rng = random.Random(31415)
    journal, ledger = JournalStore(), LedgerStore()
    model = {}  # entry_id -> dict; the reference in-memory map
    committed = []
    ids = []

    def model_purchase(entry_id):
        e = model.get(entry_id)
        if e is None or e["state"] != "pending":
            return False
        e["state"] = "purchased"
        committed.append(e["qty"] * e["each"])
        return True

    double_purchase_checked = 0
    for step in range(500):
        op = rng.choice(["create", "update", "delete", "purchase", "repurchase"])
        if op == "create" or not ids:
            qty = rng.randrange(1, 6)
            each = Decimal(rng.randrange(0, 400)) / 100
            entry = journal.create_entry("u1", f"item-{step}", None, qty, catalog, each)
            model[entry.entry_id] = {"qty": qty, "each": each, "state": "pending"}
            ids.append(entry.entry_id)
            continue
        entry_id = rng.choice(ids)
        if op == "update":
            qty = rng.randrange(1, 6)
            expected_ok = model.get(entry_id, {}).get("state") == "pending"
            try:
                journal.update_entry(entry_id, {"quantity": qty}, catalog)
                ok = True
            except (errors.EntryNotFound, errors.EntryImmutable):
                ok = False
            assert ok == expected_ok
            if ok:
                model[entry_id]["qty"] = qty
        elif op == "delete":
            try:
                journal.delete_entry(entry_id)
                ok = True
            except errors.EntryNotFound:
                ok = False
            assert ok == (model.pop(entry_id, None) is not None)
        elif op == "purchase":
            try:
                journal.purchase_entry(entry_id, ledger)
                ok = True
            except (errors.EntryNotFound, errors.EntryImmutable):
                ok = False
            assert ok == model_purchase(entry_id)
        else:  # repurchase: explicit double-purchase attack on a purchased entry
            purchased = [i for i in ids if model.get(i, {}).get("state") == "purchased"]
            if not purchased:
                continue
            target = rng.choice(purchased)
            before = len(ledger)
            with pytest.raises(errors.EntryImmutable):
                journal.purchase_entry(target, ledger)
            assert len(ledger) == before
            double_purchase_checked += 1

    assert double_purchase_checked > 0

    # final state equivalence
    for entry_id in ids:
        if entry_id in model:
            entry = journal.get(entry_id)
            assert entry.quantity == model[entry_id]["qty"]
            assert entry.footprint_kg_each == model[entry_id]["each"]
            assert (entry.state is EntryState.PURCHASED) == (
                model[entry_id]["state"] == "purchased"
            )
        else:
            with pytest.raises(errors.EntryNotFound):
                journal.get(entry_id)

    # exact conservation: ledger purchase totals == sum(quantity x each) purchased
    ledger_total = Decimal(0)
    for user in ledger.user_ids():
        for event in ledger.events_for(user):
            assert event.source is EventSource.PURCHASE
            ledger_total += event.kg_co2e
    assert ledger_total == sum(committed, Decimal(0))

    live_purchased = sum(
        (e.total_kg for uid in ["u1"] for e in journal.list_for(uid)
         if e.state is EntryState.PURCHASED),
        Decimal(0),
    )
    deleted_purchased = sum(committed, Decimal(0)) - live_purchased
    assert deleted_purchased >= 0  # deletions may remove purchased entries, never events


# --- HTTP service harness ----------------------------------------------------------------------


def _free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class ServerProcess:
    def __init__(self, data_dir: Path, port: int):
        self.data_dir = data_dir
        self.port = port
        self.base = f"http://127.0.0.1:{port}"
        self.proc = None

    def start(self):
        self.proc = subprocess.Popen(
            [
                sys.executable, "-m", "carbonledger.cli", "serve",
                "--port", str(self.port), "--data-dir", str(self.data_dir),
            ],
            stdout=subprocess.DEVNULL,
            stderr=subprocess.DEVNULL,
        )
        deadline = time.time() + 20
        while time.time() < deadline:
            try:
                if httpx.get(self.base + "/v1/health", timeout=1.0).status_code == 200:
                    return self
            except httpx.TransportError:
                pass
            if self.proc.poll() is not None:
                raise RuntimeError(f"server exited early with {self.proc.returncode}")
            time.sleep(0.05)
        raise RuntimeError("server did not become healthy")

    def kill(self):
        if self.proc and self.proc.poll() is None:
            self.proc.send_signal(signal.SIGKILL)
            self.proc.wait(timeout=10)

    def event_lines(self):
        path = self.data_dir / "events.jsonl"
        if not path.exists():
            return 0
        return sum(1 for l in path.read_text().splitlines() if l.strip())


def _signup(base, user_id, region="in-ka"):
    r = httpx.post(
        base + "/v1/users",
        json={"user_id": user_id, "display_name": user_id.title(),
              "region": region, "password": f"pw-{user_id}"},
        timeout=10.0,
    )
    assert r.status_code == 201, r.text
    return {"Authorization": f"Bearer {r.json()['token']}"}


# --- criterion 7: service determinism -------------------------------------------------------------


@pytest.mark.acceptance("service-determinism")
def test_service_determinism(tmp_path):
    port = _free_port()
    server = ServerProcess(tmp_path / "svc", port).start()
    base = server.base
    when = "2024-06-05T10:00:00Z"
    params = {"kind": "weekly", "anchor": "2024-06-05"}
    try:
        ada = _signup(base, "ada")
        bob = _signup(base, "bob")

        # every committing 2xx appends exactly one event line
        checks = [
            ("POST", "/v1/trips", {"mode": "car", "fuel": "petrol",
                                   "declared_distance_km": "10", "occurred_at": when}, ada),
            ("POST", "/v1/scan/commit", {"barcode": "8901002000055", "occurred_at": when}, ada),
            ("POST", "/v1/bills", {"text": "Grand Total ₹1,450.00", "region": "in-ka",
                                   "occurred_at": when}, bob),
            ("POST", "/v1/meals", {"restaurant_id": "spice-route", "item_id": "dal-tadka",
                                   "occurred_at": when}, bob),
        ]
        for method, path, body, headers in checks:
            before = server.event_lines()
            r = httpx.request(method, base + path, json=body, headers=headers, timeout=10.0)
            assert 200 <= r.status_code < 300, r.text
            assert server.event_lines() == before + 1

        entry = httpx.post(
            base + "/v1/journal",
            json={"label": "rice", "quantity": 2, "barcode": "8901003000061"},
            headers=ada, timeout=10.0,
        ).json()
        before = server.event_lines()
        r = httpx.post(
            base + f"/v1/journal/{entry['entry_id']}/purchase",
            json={"occurred_at": when}, headers=ada, timeout=10.0,
        )
        assert r.status_code == 201
        assert server.event_lines() == before + 1

        # reads are side-effect-free
        before = server.event_lines()
        httpx.post(base + "/v1/scan", json={"raw_barcode": "8901002000055"},
                   headers=ada, timeout=10.0)
        assert server.event_lines() == before

        gets = [
            ("/v1/summary", params, ada),
            ("/v1/summary", params, bob),
            ("/v1/leaderboard", params, ada),
            ("/v1/journal", {}, ada),
            ("/v1/menus/green-leaf-cafe", {}, bob),
            ("/v1/trips/alternatives",
             {"distance_km": "10", "mode": "car", "fuel": "petrol"}, ada),
        ]
        snapshots = []
        for path, query, headers in gets:
            r = httpx.get(base + path, params=query, headers=headers, timeout=10.0)
            assert r.status_code == 200
            snapshots.append(r.content)

        server.kill()  # SIGKILL mid-suite; on-disk logs are all that survives

        server = ServerProcess(tmp_path / "svc", port).start()
        for (path, query, headers), before_bytes in zip(gets, snapshots):
            r = httpx.get(server.base + path, params=query, headers=headers, timeout=10.0)
            assert r.status_code == 200
            assert r.content == before_bytes  # byte-for-byte replay
    finally:
        server.kill()


# --- criterion 8: end-to-end scenario ---------------------------------------------------------------


@pytest.mark.acceptance("end-to-end-scenario")
def test_end_to_end_scenario(tmp_path):
    port = _free_port()
    server = ServerProcess(tmp_path / "e2e", port).start()
    base = server.base
    when = "2024-06-05T10:00:00Z"
    anchor = "2024-06-05"

    # per-user action magnitudes (catalog footprints and bill totals are seeds)
    scan_codes = {"ada": "8901002000017", "bob": "8901002000055", "cem": "8901001000056"}
    scan_kg = {"ada": Decimal("0.11"), "bob": Decimal("0.95"), "cem": Decimal("0.20")}
    bill_costs = {"ada": "72.50", "bob": "725.00", "cem": "145.00"}
    journal_items = {
        "ada": ("8901004000015", 1, Decimal("0.35")),
        "bob": ("8901004000046", 2, Decimal("3.40")),
        "cem": ("8901005000021", 3, Decimal("0.60")),
    }

    # analytic expectation, computed independently of the service
    tariff, grid, car = Decimal("7.25"), Decimal("0.82"), Decimal("0.192")
    expected = {}
    for user in ["ada", "bob", "cem"]:
        trip_kg = Decimal("10") * car
        kwh = (Decimal(bill_costs[user]) / tariff).quantize(Decimal("0.001"))
        bill_kg = kwh * grid
        code, qty, each = journal_items[user]
        expected[user] = trip_kg + scan_kg[user] + bill_kg + qty * each
    expected_order = sorted(expected, key=lambda u: (expected[u], u))

    started = time.perf_counter()
    try:
        tokens = {u: _signup(base, u) for u in ["ada", "bob", "cem"]}
        for user, headers in tokens.items():
            r = httpx.post(base + "/v1/trips",
                           json={"mode": "car", "fuel": "petrol",
                                 "declared_distance_km": "10", "occurred_at": when},
                           headers=headers, timeout=10.0)
            assert r.status_code == 201
            r = httpx.post(base + "/v1/scan/commit",
                           json={"barcode": scan_codes[user], "occurred_at": when},
                           headers=headers, timeout=10.0)
            assert r.status_code == 201
            r = httpx.post(base + "/v1/bills",
                           json={"text": f"Total {bill_costs[user]}", "region": "in-ka",
                                 "occurred_at": when},
                           headers=headers, timeout=10.0)
            assert r.status_code == 201
            code, qty, _ = journal_items[user]
            entry = httpx.post(base + "/v1/journal",
                               json={"label": f"{user} basket", "quantity": qty, "barcode": code},
                               headers=headers, timeout=10.0).json()
            r = httpx.post(base + f"/v1/journal/{entry['entry_id']}/purchase",
                           json={"occurred_at": when}, headers=headers, timeout=10.0)
            assert r.status_code == 201

        board = httpx.get(base + "/v1/leaderboard",
                          params={"kind": "weekly", "anchor": anchor},
                          headers=tokens["ada"], timeout=10.0).json()
        assert [e["user_id"] for e in board["entries"]] == expected_order
        for entry in board["entries"]:
            assert Decimal(entry["total_kg"]) == expected[entry["user_id"]]
        assert [e["rank"] for e in board["entries"]] == [1, 2, 3]

        for user, headers in tokens.items():
            summary = httpx.get(base + "/v1/summary",
                                params={"kind": "weekly", "anchor": anchor},
                                headers=headers, timeout=10.0).json()
            share_sum = sum(Decimal(v) for v in summary["shares"].values())
            assert abs(share_sum - 1) <= Decimal("1e-9")
            assert Decimal(summary["total_kg"]) == expected[user]

        assert time.perf_counter() - started < 10.0
    finally:
        server.kill()
