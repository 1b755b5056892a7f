"""Pydantic request/response models for the /v1 JSON API.

Kilogram and kWh figures are Decimal end to end; pydantic serializes them as
JSON strings so clients get the exact digits the ledger stores. Naive request
timestamps are taken as UTC.
"""

from datetime import datetime, timezone
from decimal import Decimal
from typing import Annotated, Any, Optional

from pydantic import BaseModel, BeforeValidator, Field


def _assume_utc(value: Any) -> Any:
    if isinstance(value, datetime) and value.tzinfo is None:
        return value.replace(tzinfo=timezone.utc)
    return value


UtcInstant = Annotated[datetime, BeforeValidator(_assume_utc)]


class ErrorBody(BaseModel):
    code: str
    message: str
    detail: dict[str, Any] = {}


# --- auth -------------------------------------------------------------------

class SignupRequest(BaseModel):
    user_id: str = Field(min_length=1, max_length=64)
    display_name: str = Field(min_length=1, max_length=128)
    region: str = Field(min_length=1, max_length=64)
    password: str = Field(min_length=1)


class LoginRequest(BaseModel):
    user_id: str
    password: str


class TokenResponse(BaseModel):
    user_id: str
    token: str


class ProfileResponse(BaseModel):
    user_id: str
    display_name: str
    region: str


# --- factors ------------------------------------------------------------------

class FactorResponse(BaseModel):
    category: str
    variant: str
    unit: str
    kg_co2e_per_unit: Decimal
    source_note: str


class FactorListResponse(BaseModel):
    version: int
    factors: list[FactorResponse]


# --- trips ---------------------------------------------------------------------

class GeoPointBody(BaseModel):
    lat: float
    lon: float


class TripCreateRequest(BaseModel):
    mode: str = Field(min_length=1)
    fuel: str = Field(min_length=1)
    trace: Optional[list[GeoPointBody]] = None
    declared_distance_km: Optional[Decimal] = None
    occurred_at: Optional[UtcInstant] = None


class AlternativeBody(BaseModel):
    mode: str
    fuel: str
    footprint_kg: Decimal
    savings_kg: Decimal


class TripResponse(BaseModel):
    event_id: str
    user_id: str
    mode: str
    fuel: str
    distance_km: Decimal
    footprint_kg: Decimal
    occurred_at: datetime


class AlternativesResponse(BaseModel):
    distance_km: Decimal
    footprint_kg: Decimal
    alternatives: list[AlternativeBody]


# --- barcode scanning ------------------------------------------------------------

class ScanRequest(BaseModel):
    raw_barcode: str


class ProductBody(BaseModel):
    barcode: str
    name: str
    category: str
    footprint_kg: Decimal


class ScanResponse(BaseModel):
    product: ProductBody
    alternatives: list[ProductBody]


class ScanCommitRequest(BaseModel):
    barcode: str
    occurred_at: Optional[UtcInstant] = None


class ScanCommitResponse(BaseModel):
    event_id: str
    product: ProductBody
    kg_co2e: Decimal
    occurred_at: datetime


# --- bills -------------------------------------------------------------------------

class BillRequest(BaseModel):
    text: str
    region: str = Field(min_length=1)
    occurred_at: Optional[UtcInstant] = None


class BillResponse(BaseModel):
    event_id: str
    region: str
    total_cost: Decimal
    tariff_per_kwh: Decimal
    kwh: Decimal
    footprint_kg: Decimal
    occurred_at: datetime


# --- menus ---------------------------------------------------------------------------

class IngredientBody(BaseModel):
    ingredient: str
    grams: Decimal


class MenuItemBody(BaseModel):
    id: str
    name: str
    category: str
    footprint_kg: Decimal
    ingredients: list[IngredientBody]


class MenuResponse(BaseModel):
    restaurant_id: str
    items: list[MenuItemBody]


class RestaurantListResponse(BaseModel):
    restaurant_ids: list[str]


class RecommendResponse(BaseModel):
    chosen: MenuItemBody
    recommendations: list[MenuItemBody]


class MealRequest(BaseModel):
    restaurant_id: str
    item_id: str
    occurred_at: Optional[UtcInstant] = None


class MealResponse(BaseModel):
    event_id: str
    restaurant_id: str
    item_id: str
    name: str
    footprint_kg: Decimal
    occurred_at: datetime


# --- journal ------------------------------------------------------------------------

class JournalCreateRequest(BaseModel):
    label: str = Field(min_length=1, max_length=256)
    quantity: int
    barcode: Optional[str] = None
    footprint_kg_each: Optional[Decimal] = None


class JournalPatchRequest(BaseModel):
    label: Optional[str] = Field(default=None, min_length=1, max_length=256)
    quantity: Optional[int] = None
    barcode: Optional[str] = None


class PurchaseRequest(BaseModel):
    occurred_at: Optional[UtcInstant] = None


class JournalEntryResponse(BaseModel):
    entry_id: str
    user_id: str
    label: str
    barcode: Optional[str]
    quantity: int
    footprint_kg_each: Decimal
    total_kg: Decimal
    state: str
    created_at: datetime
    updated_at: datetime


class JournalListResponse(BaseModel):
    entries: list[JournalEntryResponse]


class PurchaseResponse(BaseModel):
    event_id: str
    kg_co2e: Decimal
    entry: JournalEntryResponse


class DeleteResponse(BaseModel):
    acknowledged: bool
    entry_id: str


# --- leaderboard / summary --------------------------------------------------------------

class WindowBody(BaseModel):
    start: datetime
    end: datetime


class LeaderboardEntryBody(BaseModel):
    rank: int
    user_id: str
    display_name: str
    total_kg: Decimal


class LeaderboardResponse(BaseModel):
    kind: str
    window: WindowBody
    entries: list[LeaderboardEntryBody]


class TipBody(BaseModel):
    category: str
    message: str
    share: Decimal


class SummaryResponse(BaseModel):
    user_id: str
    region: str
    kind: str
    window: WindowBody
    event_count: int
    total_kg: Decimal
    by_source: dict[str, Decimal]
    shares: dict[str, Decimal]
    area_average_kg: Decimal
    tips: list[TipBody]


class ReloadResponse(BaseModel):
    reloaded: bool
    registry_version: int


class HealthResponse(BaseModel):
    status: str
    service: str
    version: str
