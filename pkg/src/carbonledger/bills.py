"""Electricity bill text -> total cost -> kWh -> kgCO2e.

Input is already-extracted text (OCR happens upstream and is not our concern).
The total is found by a fixed line grammar; the last matching line wins because
real bills print subtotals before the payable amount. Cost divides by the
regional tariff into kWh (3 decimal places, half-up), then a grid-intensity
factor turns kWh into kilograms.
"""

import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping

from .errors import (
    InvalidFactor,
    InvariantViolation,
    MalformedRow,
    DuplicateKey,
    RegionUnknown,
    TotalNotFound,
)
from .factors import Category, FactorRegistry, iter_csv_rows, parse_plain_decimal

TARIFF_CSV_HEADER = "region,tariff_per_kwh"

_LABELS = [
    "total amount due",
    "total amount",
    "grand total",
    "amount due",
    "net amount",
    "total",
]

# Whole line: label, optional ':', optional currency symbol, digits with
# optional ',' thousands groups, optional 2-decimal fraction.
_TOTAL_LINE = re.compile(
    r"^\s*(?:" + "|".join(re.escape(l) for l in _LABELS) + r")\s*:?\s*"
    r"[₹$€£¥]?\s*"
    r"(?P<whole>\d{1,3}(?:,\d{3})+|\d+)(?P<frac>\.\d{2})?\s*$",
    re.IGNORECASE,
)

_KWH_QUANTUM = Decimal("0.001")


def normalize_region(region: str) -> str:
    r = region.strip().lower()
    if not r:
        raise InvariantViolation("region must be non-empty")
    return r


@dataclass(frozen=True)
class BillText:
    lines: tuple[str, ...]
    region: str

    def __post_init__(self):
        object.__setattr__(self, "region", normalize_region(self.region))

    @classmethod
    def from_text(cls, text: str, region: str) -> "BillText":
        return cls(tuple(text.splitlines()), region)


@dataclass(frozen=True)
class BillReading:
    total_cost: Decimal
    tariff_per_kwh: Decimal
    kwh: Decimal
    footprint_kg: Decimal
    region: str


def extract_total(text: BillText) -> Decimal:
    """Amount from the last line matching `<label> <amount>`; separators stripped."""
    amount = None
    for line in text.lines:
        m = _TOTAL_LINE.match(line)
        if m:
            amount = Decimal(m.group("whole").replace(",", "") + (m.group("frac") or ""))
    if amount is None:
        raise TotalNotFound("no line matches a recognized total label")
    return amount


class TariffTable:
    """Region -> price per kWh, both normalized at load time."""

    def __init__(self, tariffs: Mapping[str, Decimal]):
        self._tariffs = dict(tariffs)

    def __len__(self) -> int:
        return len(self._tariffs)

    def get(self, region: str) -> Decimal:
        try:
            return self._tariffs[normalize_region(region)]
        except KeyError:
            raise RegionUnknown(f"no tariff for region {region!r}") from None

    def regions(self) -> list[str]:
        return sorted(self._tariffs)


def load_tariffs(csv_text: str) -> TariffTable:
    tariffs: dict[str, Decimal] = {}
    for line_no, fields in iter_csv_rows(csv_text, TARIFF_CSV_HEADER):
        if len(fields) != 2:
            raise MalformedRow(line_no, f"expected 2 columns, got {len(fields)}")
        raw_region, raw_tariff = fields
        try:
            region = normalize_region(raw_region)
        except InvariantViolation as exc:
            raise MalformedRow(line_no, exc.message) from None
        try:
            tariff = parse_plain_decimal(raw_tariff)
        except ValueError:
            raise MalformedRow(line_no, f"unparseable decimal {raw_tariff.strip()!r}") from None
        if tariff <= 0:
            raise InvalidFactor(f"line {line_no}: tariff must be positive, got {tariff}")
        if region in tariffs:
            raise DuplicateKey(f"line {line_no}: duplicate region {region}")
        tariffs[region] = tariff
    return TariffTable(tariffs)


def cost_to_kwh(total_cost: Decimal, region: str, tariffs: TariffTable) -> Decimal:
    """total_cost / tariff, rounded to 3 decimal places half-up."""
    tariff = tariffs.get(region)
    return (total_cost / tariff).quantize(_KWH_QUANTUM, rounding=ROUND_HALF_UP)


def bill_footprint(
    text: BillText, tariffs: TariffTable, registry: FactorRegistry
) -> BillReading:
    """Full pipeline: extract total, invert tariff, apply grid intensity."""
    total_cost = extract_total(text)
    tariff = tariffs.get(text.region)
    kwh = cost_to_kwh(total_cost, text.region, tariffs)
    grid = registry.lookup(Category.ELECTRICITY, f"grid:{text.region}")
    return BillReading(
        total_cost=total_cost,
        tariff_per_kwh=tariff,
        kwh=kwh,
        footprint_kg=kwh * grid.kg_co2e_per_unit,
        region=text.region,
    )
