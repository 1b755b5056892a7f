"""Trip distance and footprint engine.

Distance comes either from a GPS trace (summed great-circle legs on a sphere,
R = 6371.0 km) or from a declared value. Footprint is distance times the
registry factor for the "mode:fuel" travel variant. The distance provider is
pluggable so a road-routing backend can replace the built-in trace summation.
"""

import math
from dataclasses import dataclass, field
from datetime import datetime
from decimal import Decimal
from typing import Optional, Protocol, Sequence

from .errors import InvariantViolation, TraceTooShort
from .factors import Category, FactorRegistry

EARTH_RADIUS_KM = 6371.0


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise InvariantViolation("coordinates must be finite")
        if not -90.0 <= self.lat <= 90.0:
            raise InvariantViolation(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise InvariantViolation(f"longitude out of range: {self.lon}")


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in km on a sphere of radius 6371.0 km."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2) ** 2
    return EARTH_RADIUS_KM * 2 * math.asin(math.sqrt(min(1.0, h)))


def trace_distance_km(trace: Sequence[GeoPoint]) -> float:
    """Sum of great-circle leg lengths over consecutive trace points."""
    if len(trace) < 2:
        raise TraceTooShort(f"trace needs at least 2 points, got {len(trace)}")
    return sum(haversine_km(p, q) for p, q in zip(trace, trace[1:]))


class DistanceProvider(Protocol):
    """Turns a GPS trace into a ride distance; swap in a routing API here."""

    def distance_km(self, trace: Sequence[GeoPoint]) -> float: ...


class HaversineTraceProvider:
    """Default provider: straight summation of the trace's great-circle legs."""

    def distance_km(self, trace: Sequence[GeoPoint]) -> float:
        return trace_distance_km(trace)


@dataclass(frozen=True)
class TripRequest:
    user_id: str
    mode: str
    fuel: str
    timestamp: datetime
    trace: Optional[tuple[GeoPoint, ...]] = None
    declared_distance_km: Optional[Decimal] = None

    def __post_init__(self):
        has_trace = self.trace is not None
        has_declared = self.declared_distance_km is not None
        if has_trace == has_declared:
            raise InvariantViolation(
                "exactly one of trace or declared_distance_km must be present"
            )
        if has_trace and len(self.trace) < 2:
            raise InvariantViolation("trace must contain at least 2 points")
        if has_declared:
            if not self.declared_distance_km.is_finite() or self.declared_distance_km < 0:
                raise InvariantViolation(
                    f"declared distance must be non-negative and finite, got {self.declared_distance_km}"
                )

    @property
    def variant(self) -> str:
        return f"{self.mode}:{self.fuel}".lower()


@dataclass(frozen=True)
class TripRecord:
    request: TripRequest
    distance_km: Decimal
    footprint_kg: Decimal


@dataclass(frozen=True)
class AlternativeSuggestion:
    mode: str
    fuel: str
    footprint_kg: Decimal
    savings_kg: Decimal


def _decimal_from_float(x: float) -> Decimal:
    # repr round-trips floats exactly and keeps the ledger values readable
    return Decimal(repr(x))


def compute_trip(
    request: TripRequest,
    registry: FactorRegistry,
    provider: Optional[DistanceProvider] = None,
) -> TripRecord:
    """Resolve distance, then footprint = distance_km x factor(travel, mode:fuel)."""
    factor = registry.lookup(Category.TRAVEL, request.variant)
    if request.trace is not None:
        provider = provider or HaversineTraceProvider()
        distance = _decimal_from_float(provider.distance_km(request.trace))
    else:
        distance = request.declared_distance_km
    return TripRecord(
        request=request,
        distance_km=distance,
        footprint_kg=distance * factor.kg_co2e_per_unit,
    )


def _split_variant(variant: str) -> tuple[str, str]:
    mode, _, fuel = variant.partition(":")
    return mode, fuel


def suggest_alternatives(
    record: TripRecord, registry: FactorRegistry
) -> list[AlternativeSuggestion]:
    """Every travel variant strictly cheaper over the same distance, ascending.

    Ties on footprint break lexicographically by the "mode:fuel" variant.
    Zero-distance trips yield nothing: every variant costs exactly 0 there.
    """
    results = []
    for factor in registry.variants(Category.TRAVEL):
        footprint = record.distance_km * factor.kg_co2e_per_unit
        if footprint < record.footprint_kg:
            mode, fuel = _split_variant(factor.key.variant)
            results.append(
                (
                    footprint,
                    factor.key.variant,
                    AlternativeSuggestion(
                        mode=mode,
                        fuel=fuel,
                        footprint_kg=footprint,
                        savings_kg=record.footprint_kg - footprint,
                    ),
                )
            )
    results.sort(key=lambda t: (t[0], t[1]))
    return [s for _, _, s in results]
