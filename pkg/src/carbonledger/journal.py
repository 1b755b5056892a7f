"""Per-user grocery journal: CRUD plus a purchase step that commits to the ledger.

Create/update/delete ops append to a JSON-lines journal log. Purchases are NOT
logged here: the ledger event (which carries the entry id in its detail) is the
single committing write, and recovery re-marks entries purchased by scanning
the ledger. A crash can therefore never double-commit or half-commit a
purchase: either the event line exists or it does not.
"""

import threading
import uuid
from dataclasses import dataclass, replace
from datetime import datetime
from decimal import Decimal
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional

from .barcodes import Barcode, Catalog
from .errors import (
    EntryImmutable,
    EntryNotFound,
    InvalidQuantity,
    InvariantViolation,
)
from .jsonl import append_line, replay_lines
from .ledger import (
    EventSource,
    FootprintEvent,
    LedgerStore,
    format_rfc3339,
    parse_rfc3339,
    utc_now,
)


class EntryState(str, Enum):
    PENDING = "pending"
    PURCHASED = "purchased"


@dataclass(frozen=True)
class JournalEntry:
    entry_id: str
    user_id: str
    label: str
    barcode: Optional[Barcode]
    quantity: int
    footprint_kg_each: Decimal
    state: EntryState
    created_at: datetime
    updated_at: datetime

    def __post_init__(self):
        if self.quantity < 1:
            raise InvalidQuantity(f"quantity must be >= 1, got {self.quantity}")
        if self.footprint_kg_each < 0 or not self.footprint_kg_each.is_finite():
            raise InvariantViolation(
                f"footprint_kg_each must be non-negative and finite, got {self.footprint_kg_each}"
            )
        if self.updated_at < self.created_at:
            raise InvariantViolation("updated_at must not precede created_at")

    @property
    def total_kg(self) -> Decimal:
        return self.quantity * self.footprint_kg_each


def _entry_to_obj(entry: JournalEntry) -> dict[str, Any]:
    return {
        "entry_id": entry.entry_id,
        "user_id": entry.user_id,
        "label": entry.label,
        "barcode": entry.barcode.digits if entry.barcode else None,
        "quantity": entry.quantity,
        "footprint_kg_each": str(entry.footprint_kg_each),
        "created_at": format_rfc3339(entry.created_at),
        "updated_at": format_rfc3339(entry.updated_at),
    }


def _entry_from_obj(obj: Mapping[str, Any]) -> JournalEntry:
    return JournalEntry(
        entry_id=obj["entry_id"],
        user_id=obj["user_id"],
        label=obj["label"],
        barcode=Barcode(obj["barcode"]) if obj.get("barcode") else None,
        quantity=obj["quantity"],
        footprint_kg_each=Decimal(obj["footprint_kg_each"]),
        state=EntryState.PENDING,
        created_at=parse_rfc3339(obj["created_at"]),
        updated_at=parse_rfc3339(obj["updated_at"]),
    )


class JournalStore:
    """In-memory journal with an append-only ops log for create/update/delete."""

    def __init__(self, path: Optional[Path] = None, fsync: bool = True):
        self._path = Path(path) if path is not None else None
        self._fsync = fsync
        self._lock = threading.Lock()
        self._entries: dict[str, JournalEntry] = {}
        if self._path is not None and self._path.exists():
            self._replay()

    # --- persistence ---------------------------------------------------------

    def _replay(self) -> None:
        for op in replay_lines(self._path):
            kind = op["op"]
            if kind in ("create", "update"):
                entry = _entry_from_obj(op["entry"])
                self._entries[entry.entry_id] = entry
            elif kind == "delete":
                self._entries.pop(op["entry_id"], None)
            else:
                raise InvariantViolation(f"unknown journal op {kind!r}")

    def _log(self, obj: dict[str, Any]) -> None:
        if self._path is not None:
            append_line(self._path, obj, self._fsync)

    def recover_purchases(self, ledger: LedgerStore) -> None:
        """Re-mark purchased entries from ledger purchase events (crash-safe replay)."""
        with self._lock:
            for user_id in ledger.user_ids():
                for event in ledger.events_for(user_id):
                    if event.source is not EventSource.PURCHASE:
                        continue
                    entry_id = event.detail.get("entry_id")
                    if entry_id and entry_id in self._entries:
                        entry = self._entries[entry_id]
                        self._entries[entry_id] = replace(
                            entry,
                            state=EntryState.PURCHASED,
                            updated_at=max(event.occurred_at, entry.created_at),
                        )

    # --- CRUD -----------------------------------------------------------------

    def create_entry(
        self,
        user_id: str,
        label: str,
        barcode: Optional[Barcode],
        quantity: int,
        catalog: Catalog,
        footprint_kg_each: Optional[Decimal] = None,
        now: Optional[datetime] = None,
    ) -> JournalEntry:
        """New pending entry; footprint resolved from the catalog when a barcode is given."""
        if quantity < 1:
            raise InvalidQuantity(f"quantity must be >= 1, got {quantity}")
        if barcode is not None:
            each = catalog.lookup(barcode).footprint_kg
        else:
            each = footprint_kg_each if footprint_kg_each is not None else Decimal(0)
        ts = now or utc_now()
        entry = JournalEntry(
            entry_id=str(uuid.uuid4()),
            user_id=user_id,
            label=label,
            barcode=barcode,
            quantity=quantity,
            footprint_kg_each=each,
            state=EntryState.PENDING,
            created_at=ts,
            updated_at=ts,
        )
        with self._lock:
            self._entries[entry.entry_id] = entry
            self._log({"op": "create", "entry": _entry_to_obj(entry)})
        return entry

    def get(self, entry_id: str) -> JournalEntry:
        try:
            return self._entries[entry_id]
        except KeyError:
            raise EntryNotFound(f"no journal entry {entry_id}") from None

    def list_for(self, user_id: str) -> list[JournalEntry]:
        entries = [e for e in self._entries.values() if e.user_id == user_id]
        entries.sort(key=lambda e: (e.created_at, e.entry_id))
        return entries

    def update_entry(
        self,
        entry_id: str,
        patch: Mapping[str, Any],
        catalog: Catalog,
        now: Optional[datetime] = None,
    ) -> JournalEntry:
        """Apply label/quantity/barcode fields; re-resolve footprint on barcode change."""
        unknown = set(patch) - {"label", "quantity", "barcode"}
        if unknown:
            raise InvariantViolation(f"unpatchable fields: {sorted(unknown)}")
        with self._lock:
            entry = self.get(entry_id)
            if entry.state is not EntryState.PENDING:
                raise EntryImmutable(f"entry {entry_id} is already purchased")
            changes: dict[str, Any] = {}
            if "label" in patch:
                changes["label"] = patch["label"]
            if "quantity" in patch:
                quantity = patch["quantity"]
                if quantity < 1:
                    raise InvalidQuantity(f"quantity must be >= 1, got {quantity}")
                changes["quantity"] = quantity
            if "barcode" in patch and patch["barcode"] is not None:
                barcode: Barcode = patch["barcode"]
                changes["barcode"] = barcode
                changes["footprint_kg_each"] = catalog.lookup(barcode).footprint_kg
            ts = now or utc_now()
            updated = replace(entry, updated_at=max(ts, entry.created_at), **changes)
            self._entries[entry_id] = updated
            self._log({"op": "update", "entry": _entry_to_obj(updated)})
            return updated

    def delete_entry(self, entry_id: str) -> None:
        with self._lock:
            if entry_id not in self._entries:
                raise EntryNotFound(f"no journal entry {entry_id}")
            del self._entries[entry_id]
            self._log({"op": "delete", "entry_id": entry_id})

    def purchase_entry(
        self,
        entry_id: str,
        ledger: LedgerStore,
        now: Optional[datetime] = None,
    ) -> FootprintEvent:
        """Commit quantity x footprint to the ledger and freeze the entry.

        The ledger append is the commit point; a second purchase raises
        EntryImmutable and appends nothing.
        """
        with self._lock:
            entry = self.get(entry_id)
            if entry.state is not EntryState.PENDING:
                raise EntryImmutable(f"entry {entry_id} is already purchased")
            occurred = now or utc_now()
            detail: dict[str, Any] = {
                "entry_id": entry.entry_id,
                "label": entry.label,
                "quantity": entry.quantity,
                "kg_each": str(entry.footprint_kg_each),
            }
            if entry.barcode is not None:
                detail["barcode"] = entry.barcode.digits
            event = FootprintEvent(
                event_id=str(uuid.uuid4()),
                user_id=entry.user_id,
                source=EventSource.PURCHASE,
                kg_co2e=entry.total_kg,
                occurred_at=occurred,
                detail=detail,
            )
            ledger.append(event)
            self._entries[entry_id] = replace(
                entry,
                state=EntryState.PURCHASED,
                updated_at=max(occurred, entry.created_at),
            )
            return event
