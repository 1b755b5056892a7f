"""Emission-factor registry: the kgCO2e-per-unit lookup table everything else uses.

Factors are keyed by (category, variant); the variant string is normalized to
lowercase on ingest and lookups are case-insensitive. Registries are immutable:
mutation returns a fresh registry with version bumped by one, so a shared
reference can be swapped atomically under concurrent readers.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Iterable, Mapping

from .errors import (
    DuplicateKey,
    FactorNotFound,
    InvalidFactor,
    InvariantViolation,
    MalformedRow,
    UnknownCategory,
    UnknownUnit,
)

CSV_HEADER = "category,variant,unit,kg_co2e_per_unit,source_note"

# Plain decimals only: no exponents, no locale separators, no leading '+'.
_PLAIN_DECIMAL = re.compile(r"-?[0-9]+(\.[0-9]+)?$")


class Category(str, Enum):
    TRAVEL = "travel"
    FOOD_INGREDIENT = "food_ingredient"
    ELECTRICITY = "electricity"
    PRODUCT = "product"


class Unit(str, Enum):
    KM = "km"
    KG = "kg"
    KWH = "kWh"
    ITEM = "item"


_UNIT_BY_LOWER = {u.value.lower(): u for u in Unit}


def parse_plain_decimal(text: str) -> Decimal:
    """Parse a plain decimal literal; raises ValueError on anything else."""
    text = text.strip()
    if not _PLAIN_DECIMAL.match(text):
        raise ValueError(f"not a plain decimal: {text!r}")
    return Decimal(text)


def normalize_variant(variant: str) -> str:
    """Lowercase and trim a variant key; rejects empty or internal whitespace."""
    v = variant.strip().lower()
    if not v:
        raise InvariantViolation("variant must be non-empty")
    if any(c.isspace() for c in v):
        raise InvariantViolation(f"variant must not contain whitespace: {variant!r}")
    return v


@dataclass(frozen=True)
class FactorKey:
    category: Category
    variant: str
    unit: Unit

    def __post_init__(self):
        object.__setattr__(self, "variant", normalize_variant(self.variant))


@dataclass(frozen=True)
class EmissionFactor:
    key: FactorKey
    kg_co2e_per_unit: Decimal
    source_note: str = ""

    def __post_init__(self):
        value = self.kg_co2e_per_unit
        if not isinstance(value, Decimal):
            raise InvalidFactor(f"factor value must be a Decimal, got {type(value).__name__}")
        if not value.is_finite():
            raise InvalidFactor(f"factor value must be finite, got {value}")
        if value < 0:
            raise InvalidFactor(f"factor value must be non-negative, got {value}")


class FactorRegistry:
    """Immutable map (category, variant) -> EmissionFactor with a version counter."""

    def __init__(self, entries: Mapping[tuple[Category, str], EmissionFactor], version: int = 1):
        self._entries = dict(entries)
        self.version = version

    def __len__(self) -> int:
        return len(self._entries)

    def lookup(self, category: Category | str, variant: str) -> EmissionFactor:
        """Case-insensitive lookup; raises FactorNotFound when absent."""
        cat = Category(category)
        key = (cat, variant.strip().lower())
        try:
            return self._entries[key]
        except KeyError:
            raise FactorNotFound(cat.value, key[1]) from None

    def contains(self, category: Category | str, variant: str) -> bool:
        try:
            self.lookup(category, variant)
            return True
        except FactorNotFound:
            return False

    def upsert(self, factor: EmissionFactor) -> "FactorRegistry":
        """Return a new registry with the factor inserted/replaced, version + 1."""
        entries = dict(self._entries)
        entries[(factor.key.category, factor.key.variant)] = factor
        return FactorRegistry(entries, self.version + 1)

    def list(self) -> list[EmissionFactor]:
        """All entries in canonical (category, variant) order."""
        return [
            self._entries[k]
            for k in sorted(self._entries, key=lambda k: (k[0].value, k[1]))
        ]

    def variants(self, category: Category | str) -> list[EmissionFactor]:
        """All entries of one category, ascending by variant."""
        cat = Category(category)
        return [f for f in self.list() if f.key.category is cat]


def _parse_row(line_no: int, fields: list[str]) -> EmissionFactor:
    if len(fields) != 5:
        raise MalformedRow(line_no, f"expected 5 columns, got {len(fields)}")
    raw_category, raw_variant, raw_unit, raw_value, source_note = fields

    cat_text = raw_category.strip().lower()
    try:
        category = Category(cat_text)
    except ValueError:
        raise UnknownCategory(f"line {line_no}: unknown category {raw_category.strip()!r}") from None

    unit = _UNIT_BY_LOWER.get(raw_unit.strip().lower())
    if unit is None:
        raise UnknownUnit(f"line {line_no}: unknown unit {raw_unit.strip()!r}")

    try:
        variant = normalize_variant(raw_variant)
    except InvariantViolation as exc:
        raise MalformedRow(line_no, exc.message) from None

    try:
        value = parse_plain_decimal(raw_value)
    except ValueError:
        raise MalformedRow(line_no, f"unparseable decimal {raw_value.strip()!r}") from None
    if value < 0:
        raise InvalidFactor(f"line {line_no}: negative factor {value}")

    return EmissionFactor(FactorKey(category, variant, unit), value, source_note.strip())


def iter_csv_rows(csv_text: str, header: str) -> Iterable[tuple[int, list[str]]]:
    """Yield (line_no, fields) for each data row; validates the header line.

    One row per line; '#'-prefixed and blank lines are skipped. Quoted fields
    may contain commas but not newlines.
    """
    lines = csv_text.split("\n")
    header_seen = False
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if not header_seen:
            if stripped != header:
                raise MalformedRow(line_no, f"expected header {header!r}")
            header_seen = True
            continue
        fields = next(csv.reader([line]))
        yield line_no, fields
    if not header_seen:
        raise MalformedRow(0, f"missing header {header!r}")


def load_factors(csv_text: str) -> FactorRegistry:
    """Build a registry from CSV text; duplicate (category, variant) is an error."""
    entries: dict[tuple[Category, str], EmissionFactor] = {}
    for line_no, fields in iter_csv_rows(csv_text, CSV_HEADER):
        factor = _parse_row(line_no, fields)
        map_key = (factor.key.category, factor.key.variant)
        if map_key in entries:
            raise DuplicateKey(
                f"line {line_no}: duplicate key ({map_key[0].value}, {map_key[1]})"
            )
        entries[map_key] = factor
    return FactorRegistry(entries, version=1)


def dump_factors(registry: FactorRegistry) -> str:
    """Serialize a registry back to CSV in canonical (category, variant) order."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    out.write(CSV_HEADER + "\n")
    for factor in registry.list():
        writer.writerow(
            [
                factor.key.category.value,
                factor.key.variant,
                factor.key.unit.value,
                str(factor.kg_co2e_per_unit),
                factor.source_note,
            ]
        )
    return out.getvalue()


def lookup(registry: FactorRegistry, category: Category | str, variant: str) -> EmissionFactor:
    return registry.lookup(category, variant)


def upsert_factor(registry: FactorRegistry, factor: EmissionFactor) -> FactorRegistry:
    return registry.upsert(factor)
