"""Shared error taxonomy.

Every domain error carries a stable machine-readable ``code`` slug; the HTTP
layer maps these onto {code, message, detail} bodies without inspecting
messages.
"""

from typing import Any


class DomainError(Exception):
    """Base class for all domain-level failures."""

    code = "domain_error"

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail = detail


class InvariantViolation(DomainError):
    """A domain type's invariant was violated by caller input."""

    code = "invariant_violation"


# --- registry / CSV ingestion ---------------------------------------------

class MalformedRow(DomainError):
    code = "malformed_row"

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}", line_no=line_no)
        self.line_no = line_no


class DuplicateKey(DomainError):
    code = "duplicate_key"


class UnknownCategory(DomainError):
    code = "unknown_category"


class UnknownUnit(DomainError):
    code = "unknown_unit"


class InvalidFactor(DomainError):
    code = "invalid_factor"


class FactorNotFound(DomainError):
    code = "factor_not_found"

    def __init__(self, category: str, variant: str):
        super().__init__(
            f"no emission factor for ({category}, {variant})",
            category=category,
            variant=variant,
        )
        self.category = category
        self.variant = variant


# --- trips ------------------------------------------------------------------

class TraceTooShort(DomainError):
    code = "trace_too_short"


# --- barcodes ----------------------------------------------------------------

class NonDigitInput(DomainError):
    code = "non_digit_input"


class BadLength(DomainError):
    code = "bad_length"


class ChecksumMismatch(DomainError):
    code = "checksum_mismatch"


class ProductNotFound(DomainError):
    code = "product_not_found"

    def __init__(self, code_digits: str):
        super().__init__(f"no product for barcode {code_digits}", barcode=code_digits)
        self.barcode = code_digits


# --- menus -------------------------------------------------------------------

class ItemNotFound(DomainError):
    code = "item_not_found"


class MenuNotFound(DomainError):
    code = "menu_not_found"


# --- bills -------------------------------------------------------------------

class TotalNotFound(DomainError):
    code = "total_not_found"


class RegionUnknown(DomainError):
    code = "region_unknown"


# --- journal -----------------------------------------------------------------

class EntryNotFound(DomainError):
    code = "entry_not_found"


class EntryImmutable(DomainError):
    code = "entry_immutable"


class InvalidQuantity(DomainError):
    code = "invalid_quantity"


# --- ledger ------------------------------------------------------------------

class DuplicateEventId(DomainError):
    code = "duplicate_event_id"


class InvalidEvent(DomainError):
    code = "invalid_event"


class EmptyRegion(DomainError):
    code = "empty_region"


# --- users / auth --------------------------------------------------------------

class DuplicateUser(DomainError):
    code = "duplicate_user"


class BadCredentials(DomainError):
    code = "bad_credentials"


class UserNotFound(DomainError):
    code = "user_not_found"
