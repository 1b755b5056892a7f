"""Retail barcode validation (EAN-13 / UPC-A) and product catalog.

UPC-A codes are folded into EAN-13 by a leading zero, which leaves the GS1
mod-10 checksum intact. The catalog maps validated codes to products and ranks
strictly-lower-footprint alternatives within a category.
"""

import csv
import io
from dataclasses import dataclass
from decimal import Decimal
from typing import Mapping

from .errors import (
    BadLength,
    ChecksumMismatch,
    DuplicateKey,
    InvalidFactor,
    MalformedRow,
    NonDigitInput,
    ProductNotFound,
)
from .factors import iter_csv_rows, parse_plain_decimal
from .ranking import rank_lower_footprint

CATALOG_CSV_HEADER = "barcode,name,category,footprint_kg"


def _weighted_sum(digits: str) -> int:
    # GS1 weights 1,3,1,3,... from the left over the first 12 digits
    return sum(int(d) * (1 if i % 2 == 0 else 3) for i, d in enumerate(digits[:12]))


def check_digit(first12: str) -> str:
    """Check digit making the 13-digit code's weighted sum divisible by 10."""
    if len(first12) != 12:
        raise BadLength(f"expected 12 digits, got {len(first12)}")
    if not first12.isdigit():
        raise NonDigitInput(f"non-digit characters in {first12!r}")
    return str((10 - _weighted_sum(first12) % 10) % 10)


def validate(digits: str) -> bool:
    """True iff digits is a 13-digit string passing the GS1 mod-10 check."""
    if len(digits) != 13 or not digits.isdigit():
        return False
    return (_weighted_sum(digits) + int(digits[12])) % 10 == 0


@dataclass(frozen=True)
class Barcode:
    digits: str

    def __post_init__(self):
        if not self.digits.isdigit():
            raise NonDigitInput(f"non-digit characters in {self.digits!r}")
        if len(self.digits) != 13:
            raise BadLength(f"expected 13 digits, got {len(self.digits)}")
        if not validate(self.digits):
            raise ChecksumMismatch(f"mod-10 check failed for {self.digits}")

    def __str__(self) -> str:
        return self.digits


def parse_barcode(raw: str) -> Barcode:
    """Trim, accept EAN-13 as-is or UPC-A (12 digits) with a leading zero."""
    text = raw.strip()
    if not text or not text.isdigit():
        raise NonDigitInput(f"barcode must be decimal digits, got {raw!r}")
    if len(text) == 12:
        text = "0" + text
    elif len(text) != 13:
        raise BadLength(f"expected 12 or 13 digits, got {len(text)}")
    return Barcode(text)


@dataclass(frozen=True)
class Product:
    barcode: Barcode
    name: str
    category: str
    footprint_kg: Decimal

    def __post_init__(self):
        object.__setattr__(self, "category", self.category.strip().lower())
        if self.footprint_kg < 0 or not self.footprint_kg.is_finite():
            raise InvalidFactor(
                f"product footprint must be non-negative and finite, got {self.footprint_kg}"
            )


class Catalog:
    """Immutable barcode -> Product map with a derived per-category index."""

    def __init__(self, products: Mapping[str, Product]):
        self._products = dict(products)
        self._by_category: dict[str, list[Product]] = {}
        for product in self._products.values():
            self._by_category.setdefault(product.category, []).append(product)
        for items in self._by_category.values():
            items.sort(key=lambda p: p.barcode.digits)

    def __len__(self) -> int:
        return len(self._products)

    def lookup(self, code: Barcode) -> Product:
        try:
            return self._products[code.digits]
        except KeyError:
            raise ProductNotFound(code.digits) from None

    def in_category(self, category: str) -> list[Product]:
        return list(self._by_category.get(category.strip().lower(), []))

    def all_products(self) -> list[Product]:
        return sorted(self._products.values(), key=lambda p: p.barcode.digits)

    def alternatives(self, item: Product, limit: int = 4) -> list[Product]:
        """Up to `limit` same-category products with strictly lower footprint.

        Ascending by footprint, ties broken by barcode digits; the item itself
        never appears (its footprint is not strictly below its own).
        """
        candidates = [
            p for p in self.in_category(item.category) if p.barcode != item.barcode
        ]
        return rank_lower_footprint(
            candidates,
            reference_footprint=item.footprint_kg,
            footprint=lambda p: p.footprint_kg,
            tiebreak=lambda p: p.barcode.digits,
            limit=limit,
        )


def load_catalog(csv_text: str) -> Catalog:
    """Parse `barcode,name,category,footprint_kg` rows into a catalog."""
    products: dict[str, Product] = {}
    for line_no, fields in iter_csv_rows(csv_text, CATALOG_CSV_HEADER):
        if len(fields) != 4:
            raise MalformedRow(line_no, f"expected 4 columns, got {len(fields)}")
        raw_code, name, category, raw_footprint = fields
        code = parse_barcode(raw_code)
        if not category.strip():
            raise MalformedRow(line_no, "empty category")
        try:
            footprint = parse_plain_decimal(raw_footprint)
        except ValueError:
            raise MalformedRow(line_no, f"unparseable decimal {raw_footprint.strip()!r}") from None
        if code.digits in products:
            raise DuplicateKey(f"line {line_no}: duplicate barcode {code.digits}")
        products[code.digits] = Product(code, name.strip(), category, footprint)
    return Catalog(products)


def dump_catalog(catalog: Catalog) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    out.write(CATALOG_CSV_HEADER + "\n")
    for product in catalog.all_products():
        writer.writerow(
            [product.barcode.digits, product.name, product.category, str(product.footprint_kg)]
        )
    return out.getvalue()


def lookup_product(catalog: Catalog, code: Barcode) -> Product:
    return catalog.lookup(code)


def alternatives(catalog: Catalog, item: Product, limit: int = 4) -> list[Product]:
    return catalog.alternatives(item, limit)
