"""JSON-over-HTTP surface binding all modules behind bearer-token auth.

Committing endpoints (trips, scan/commit, bills, meals, journal purchase)
append exactly one ledger event per successful call; every read endpoint is
side-effect-free. Domain errors map to {code, message, detail} bodies.
"""

import uuid
from datetime import date, datetime
from decimal import Decimal
from typing import Optional

from fastapi import Depends, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .. import __version__, errors
from ..barcodes import Product, parse_barcode
from ..bills import BillText, bill_footprint
from ..factors import Category
from ..journal import JournalEntry
from ..ledger import (
    EventSource,
    FootprintEvent,
    Period,
    PeriodKind,
    UserProfile,
    area_average,
    leaderboard,
    personalized_tips,
    source_shares,
    utc_now,
)
from ..menus import MenuItem, get_menu, item_footprint, recommend_menu
from ..trips import GeoPoint, TripRequest, compute_trip, suggest_alternatives
from . import schemas
from .config import ServiceConfig
from .state import AppState

_STATUS_BY_CODE = {
    "invariant_violation": 400,
    "checksum_mismatch": 400,
    "bad_length": 400,
    "non_digit_input": 400,
    "invalid_quantity": 400,
    "invalid_event": 400,
    "malformed_row": 400,
    "invalid_factor": 400,
    "unknown_category": 400,
    "unknown_unit": 400,
    "bad_credentials": 401,
    "forbidden": 403,
    "product_not_found": 404,
    "menu_not_found": 404,
    "entry_not_found": 404,
    "user_not_found": 404,
    "duplicate_user": 409,
    "entry_immutable": 409,
    "duplicate_event_id": 409,
    "duplicate_key": 409,
    "factor_not_found": 422,
    "total_not_found": 422,
    "region_unknown": 422,
    "item_not_found": 422,
    "empty_region": 422,
}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, **detail):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


def _error_response(status: int, code: str, message: str, detail: dict) -> JSONResponse:
    body = schemas.ErrorBody(code=code, message=message, detail=detail)
    return JSONResponse(status_code=status, content=body.model_dump(mode="json"))


def _new_event_id() -> str:
    return uuid.uuid4().hex


def _product_body(product: Product) -> schemas.ProductBody:
    return schemas.ProductBody(
        barcode=product.barcode.digits,
        name=product.name,
        category=product.category,
        footprint_kg=product.footprint_kg,
    )


def _entry_body(entry: JournalEntry) -> schemas.JournalEntryResponse:
    return schemas.JournalEntryResponse(
        entry_id=entry.entry_id,
        user_id=entry.user_id,
        label=entry.label,
        barcode=entry.barcode.digits if entry.barcode else None,
        quantity=entry.quantity,
        footprint_kg_each=entry.footprint_kg_each,
        total_kg=entry.total_kg,
        state=entry.state.value,
        created_at=entry.created_at,
        updated_at=entry.updated_at,
    )


def _menu_item_body(item: MenuItem, registry) -> schemas.MenuItemBody:
    return schemas.MenuItemBody(
        id=item.id,
        name=item.name,
        category=item.category,
        footprint_kg=item_footprint(item, registry),
        ingredients=[
            schemas.IngredientBody(ingredient=q.ingredient, grams=q.grams)
            for q in item.ingredients
        ],
    )


def _parse_period(kind: str, anchor: Optional[date]) -> Period:
    try:
        period_kind = PeriodKind(kind)
    except ValueError:
        raise ApiError(422, "invalid_period", f"kind must be weekly or monthly, got {kind!r}")
    return Period(period_kind, anchor or utc_now().date())


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    state = AppState(config or ServiceConfig())
    app = FastAPI(title="carbonledger", version=__version__)
    app.state.ctx = state
    # the browser UI is served from a separate static origin; tokens ride in
    # the Authorization header, no cookies, so a permissive policy is fine
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def current_user(request: Request) -> UserProfile:
        header = request.headers.get("authorization", "")
        if not header.startswith("Bearer "):
            raise ApiError(401, "missing_token", "Authorization: Bearer <token> required")
        return state.users.authenticate(header[len("Bearer ") :].strip())

    @app.exception_handler(errors.DomainError)
    async def domain_error_handler(request: Request, exc: errors.DomainError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return _error_response(status, exc.code, exc.message, exc.detail)

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return _error_response(exc.status, exc.code, exc.message, exc.detail)

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        detail = {"errors": [
            {"loc": [str(p) for p in err["loc"]], "msg": err["msg"]} for err in exc.errors()
        ]}
        return _error_response(422, "validation_error", "request body failed validation", detail)

    # --- unauthenticated -----------------------------------------------------

    @app.get("/v1/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", service="carbonledger", version=__version__)

    @app.post("/v1/users", response_model=schemas.TokenResponse, status_code=201)
    def signup(body: schemas.SignupRequest):
        profile, token = state.users.signup(
            body.user_id, body.display_name, body.region, body.password
        )
        return schemas.TokenResponse(user_id=profile.user_id, token=token)

    @app.post("/v1/login", response_model=schemas.TokenResponse)
    def login(body: schemas.LoginRequest):
        token = state.users.login(body.user_id, body.password)
        return schemas.TokenResponse(user_id=body.user_id, token=token)

    # --- profile / factors ----------------------------------------------------

    @app.get("/v1/me", response_model=schemas.ProfileResponse)
    def me(user: UserProfile = Depends(current_user)):
        return schemas.ProfileResponse(
            user_id=user.user_id, display_name=user.display_name, region=user.region
        )

    @app.get("/v1/factors", response_model=schemas.FactorListResponse)
    def list_factors(
        category: Optional[str] = None, user: UserProfile = Depends(current_user)
    ):
        if category is not None:
            try:
                factors = state.registry.variants(Category(category))
            except ValueError:
                raise ApiError(422, "unknown_category", f"unknown category {category!r}")
        else:
            factors = state.registry.list()
        return schemas.FactorListResponse(
            version=state.registry.version,
            factors=[
                schemas.FactorResponse(
                    category=f.key.category.value,
                    variant=f.key.variant,
                    unit=f.key.unit.value,
                    kg_co2e_per_unit=f.kg_co2e_per_unit,
                    source_note=f.source_note,
                )
                for f in factors
            ],
        )

    # --- trips -------------------------------------------------------------------

    def _trip_request(body: schemas.TripCreateRequest, user_id: str) -> TripRequest:
        trace = None
        if body.trace is not None:
            trace = tuple(GeoPoint(p.lat, p.lon) for p in body.trace)
        return TripRequest(
            user_id=user_id,
            mode=body.mode,
            fuel=body.fuel,
            timestamp=body.occurred_at or utc_now(),
            trace=trace,
            declared_distance_km=body.declared_distance_km,
        )

    @app.post("/v1/trips", response_model=schemas.TripResponse, status_code=201)
    def create_trip(body: schemas.TripCreateRequest, user: UserProfile = Depends(current_user)):
        request = _trip_request(body, user.user_id)
        record = compute_trip(request, state.registry)
        event = state.ledger.append(
            FootprintEvent(
                event_id=_new_event_id(),
                user_id=user.user_id,
                source=EventSource.TRIP,
                kg_co2e=record.footprint_kg,
                occurred_at=request.timestamp,
                detail={
                    "mode": request.mode,
                    "fuel": request.fuel,
                    "distance_km": str(record.distance_km),
                },
            )
        )
        return schemas.TripResponse(
            event_id=event.event_id,
            user_id=user.user_id,
            mode=request.mode,
            fuel=request.fuel,
            distance_km=record.distance_km,
            footprint_kg=record.footprint_kg,
            occurred_at=request.timestamp,
        )

    @app.get("/v1/trips/alternatives", response_model=schemas.AlternativesResponse)
    def trip_alternatives(
        distance_km: Decimal,
        mode: str,
        fuel: str,
        user: UserProfile = Depends(current_user),
    ):
        request = TripRequest(
            user_id=user.user_id,
            mode=mode,
            fuel=fuel,
            timestamp=utc_now(),
            declared_distance_km=distance_km,
        )
        record = compute_trip(request, state.registry)
        suggestions = suggest_alternatives(record, state.registry)
        return schemas.AlternativesResponse(
            distance_km=record.distance_km,
            footprint_kg=record.footprint_kg,
            alternatives=[
                schemas.AlternativeBody(
                    mode=s.mode, fuel=s.fuel,
                    footprint_kg=s.footprint_kg, savings_kg=s.savings_kg,
                )
                for s in suggestions
            ],
        )

    # --- barcode scanning -----------------------------------------------------------

    @app.post("/v1/scan", response_model=schemas.ScanResponse)
    def scan(body: schemas.ScanRequest, user: UserProfile = Depends(current_user)):
        code = parse_barcode(body.raw_barcode)
        product = state.catalog.lookup(code)
        return schemas.ScanResponse(
            product=_product_body(product),
            alternatives=[_product_body(p) for p in state.catalog.alternatives(product)],
        )

    @app.post("/v1/scan/commit", response_model=schemas.ScanCommitResponse, status_code=201)
    def scan_commit(body: schemas.ScanCommitRequest, user: UserProfile = Depends(current_user)):
        code = parse_barcode(body.barcode)
        product = state.catalog.lookup(code)
        occurred = body.occurred_at or utc_now()
        event = state.ledger.append(
            FootprintEvent(
                event_id=_new_event_id(),
                user_id=user.user_id,
                source=EventSource.PURCHASE,
                kg_co2e=product.footprint_kg,
                occurred_at=occurred,
                detail={"barcode": product.barcode.digits, "name": product.name},
            )
        )
        return schemas.ScanCommitResponse(
            event_id=event.event_id,
            product=_product_body(product),
            kg_co2e=event.kg_co2e,
            occurred_at=occurred,
        )

    # --- bills ------------------------------------------------------------------------

    @app.post("/v1/bills", response_model=schemas.BillResponse, status_code=201)
    def submit_bill(body: schemas.BillRequest, user: UserProfile = Depends(current_user)):
        reading = bill_footprint(
            BillText.from_text(body.text, body.region), state.tariffs, state.registry
        )
        occurred = body.occurred_at or utc_now()
        event = state.ledger.append(
            FootprintEvent(
                event_id=_new_event_id(),
                user_id=user.user_id,
                source=EventSource.ELECTRICITY,
                kg_co2e=reading.footprint_kg,
                occurred_at=occurred,
                detail={
                    "region": reading.region,
                    "total_cost": str(reading.total_cost),
                    "kwh": str(reading.kwh),
                },
            )
        )
        return schemas.BillResponse(
            event_id=event.event_id,
            region=reading.region,
            total_cost=reading.total_cost,
            tariff_per_kwh=reading.tariff_per_kwh,
            kwh=reading.kwh,
            footprint_kg=reading.footprint_kg,
            occurred_at=occurred,
        )

    # --- menus ----------------------------------------------------------------------------

    @app.get("/v1/menus", response_model=schemas.RestaurantListResponse)
    def list_restaurants(user: UserProfile = Depends(current_user)):
        return schemas.RestaurantListResponse(restaurant_ids=sorted(state.menus))

    @app.get("/v1/menus/{restaurant_id}", response_model=schemas.MenuResponse)
    def read_menu(restaurant_id: str, user: UserProfile = Depends(current_user)):
        menu = get_menu(state.menus, restaurant_id)
        return schemas.MenuResponse(
            restaurant_id=menu.restaurant_id,
            items=[_menu_item_body(i, state.registry) for i in menu.items],
        )

    @app.get("/v1/menus/{restaurant_id}/recommend", response_model=schemas.RecommendResponse)
    def recommend(
        restaurant_id: str,
        item: str = Query(...),
        limit: int = Query(4, ge=1, le=20),
        user: UserProfile = Depends(current_user),
    ):
        menu = get_menu(state.menus, restaurant_id)
        recommended = recommend_menu(menu, item, state.registry, limit)
        return schemas.RecommendResponse(
            chosen=_menu_item_body(menu.get(item), state.registry),
            recommendations=[_menu_item_body(i, state.registry) for i in recommended],
        )

    @app.post("/v1/meals", response_model=schemas.MealResponse, status_code=201)
    def commit_meal(body: schemas.MealRequest, user: UserProfile = Depends(current_user)):
        menu = get_menu(state.menus, body.restaurant_id)
        item = menu.get(body.item_id)
        footprint = item_footprint(item, state.registry)
        occurred = body.occurred_at or utc_now()
        event = state.ledger.append(
            FootprintEvent(
                event_id=_new_event_id(),
                user_id=user.user_id,
                source=EventSource.MEAL,
                kg_co2e=footprint,
                occurred_at=occurred,
                detail={
                    "restaurant_id": menu.restaurant_id,
                    "item_id": item.id,
                    "name": item.name,
                },
            )
        )
        return schemas.MealResponse(
            event_id=event.event_id,
            restaurant_id=menu.restaurant_id,
            item_id=item.id,
            name=item.name,
            footprint_kg=footprint,
            occurred_at=occurred,
        )

    # --- journal --------------------------------------------------------------------------

    def _own_entry(entry_id: str, user: UserProfile) -> JournalEntry:
        entry = state.journal.get(entry_id)
        if entry.user_id != user.user_id:
            raise ApiError(403, "forbidden", "entry belongs to another user")
        return entry

    @app.get("/v1/journal", response_model=schemas.JournalListResponse)
    def list_journal(
        user_id: Optional[str] = None, user: UserProfile = Depends(current_user)
    ):
        if user_id is not None and user_id != user.user_id:
            raise ApiError(403, "forbidden", "cannot read another user's journal")
        entries = state.journal.list_for(user.user_id)
        return schemas.JournalListResponse(entries=[_entry_body(e) for e in entries])

    @app.post("/v1/journal", response_model=schemas.JournalEntryResponse, status_code=201)
    def create_journal_entry(
        body: schemas.JournalCreateRequest, user: UserProfile = Depends(current_user)
    ):
        barcode = parse_barcode(body.barcode) if body.barcode else None
        entry = state.journal.create_entry(
            user.user_id,
            body.label,
            barcode,
            body.quantity,
            state.catalog,
            footprint_kg_each=body.footprint_kg_each,
        )
        return _entry_body(entry)

    @app.patch("/v1/journal/{entry_id}", response_model=schemas.JournalEntryResponse)
    def patch_journal_entry(
        entry_id: str,
        body: schemas.JournalPatchRequest,
        user: UserProfile = Depends(current_user),
    ):
        _own_entry(entry_id, user)
        patch = {}
        fields = body.model_dump(exclude_unset=True)
        if "label" in fields:
            patch["label"] = body.label
        if "quantity" in fields:
            patch["quantity"] = body.quantity
        if "barcode" in fields and body.barcode is not None:
            patch["barcode"] = parse_barcode(body.barcode)
        entry = state.journal.update_entry(entry_id, patch, state.catalog)
        return _entry_body(entry)

    @app.delete("/v1/journal/{entry_id}", response_model=schemas.DeleteResponse)
    def delete_journal_entry(entry_id: str, user: UserProfile = Depends(current_user)):
        _own_entry(entry_id, user)
        state.journal.delete_entry(entry_id)
        return schemas.DeleteResponse(acknowledged=True, entry_id=entry_id)

    @app.post(
        "/v1/journal/{entry_id}/purchase",
        response_model=schemas.PurchaseResponse,
        status_code=201,
    )
    def purchase_journal_entry(
        entry_id: str,
        body: Optional[schemas.PurchaseRequest] = None,
        user: UserProfile = Depends(current_user),
    ):
        _own_entry(entry_id, user)
        occurred = body.occurred_at if body and body.occurred_at else None
        event = state.journal.purchase_entry(entry_id, state.ledger, now=occurred)
        return schemas.PurchaseResponse(
            event_id=event.event_id,
            kg_co2e=event.kg_co2e,
            entry=_entry_body(state.journal.get(entry_id)),
        )

    # --- leaderboard / summary -------------------------------------------------------------

    @app.get("/v1/leaderboard", response_model=schemas.LeaderboardResponse)
    def read_leaderboard(
        kind: str = Query("weekly"),
        scope: str = Query("all"),
        anchor: Optional[date] = None,
        user: UserProfile = Depends(current_user),
    ):
        period = _parse_period(kind, anchor)
        scope_ids = None if scope == "all" else [s for s in scope.split(",") if s]
        entries = leaderboard(state.ledger, state.users.profiles(), period, scope_ids)
        start, end = period.window()
        return schemas.LeaderboardResponse(
            kind=period.kind.value,
            window=schemas.WindowBody(start=start, end=end),
            entries=[
                schemas.LeaderboardEntryBody(
                    rank=e.rank,
                    user_id=e.user_id,
                    display_name=state.users.get_profile(e.user_id).display_name,
                    total_kg=e.total_kg,
                )
                for e in entries
            ],
        )

    @app.get("/v1/summary", response_model=schemas.SummaryResponse)
    def read_summary(
        kind: str = Query("weekly"),
        anchor: Optional[date] = None,
        user: UserProfile = Depends(current_user),
    ):
        period = _parse_period(kind, anchor)
        start, end = period.window()
        events = state.ledger.events_for(user.user_id, period)
        by_source = state.ledger.totals_by_source(user.user_id, period)
        total = state.ledger.user_total(user.user_id, period)
        shares = source_shares(state.ledger, user.user_id, period)
        average = area_average(state.ledger, state.users.profiles(), user.region, period)
        tips = personalized_tips(state.ledger, user.user_id, period, state.tips)
        return schemas.SummaryResponse(
            user_id=user.user_id,
            region=user.region,
            kind=period.kind.value,
            window=schemas.WindowBody(start=start, end=end),
            event_count=len(events),
            total_kg=total,
            by_source={s.value: kg for s, kg in by_source.items()},
            shares={s.value: kg for s, kg in shares.items()},
            area_average_kg=average,
            tips=[
                schemas.TipBody(category=t.category, message=t.message, share=t.share)
                for t in tips
            ],
        )

    # --- admin ---------------------------------------------------------------------------------

    @app.post("/v1/admin/reload", response_model=schemas.ReloadResponse)
    def reload_tables(user: UserProfile = Depends(current_user)):
        state.reload_tables()
        return schemas.ReloadResponse(reloaded=True, registry_version=state.registry.version)

    return app
