"""Append-only footprint event ledger, period totals, leaderboards, tips.

Events land in a JSON-lines log (one object per line, kg values as decimal
strings so replay is exact) and an in-memory index rebuilt on startup. Totals
sum Decimal values in (occurred_at, event_id) order; with decimal arithmetic
the per-source split of a window total is conserved exactly.

Windows are UTC: weekly = ISO week (Monday 00:00 inclusive to next Monday
exclusive), monthly = calendar month. Leaderboards sort ascending (least
footprint wins) with competition ranking for ties.
"""

import bisect
import json
import threading
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from decimal import Decimal
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional

from .errors import (
    DuplicateEventId,
    EmptyRegion,
    InvalidEvent,
    InvariantViolation,
)
from .jsonl import append_line, replay_lines


def parse_rfc3339(text: str) -> datetime:
    """RFC 3339 timestamp -> aware UTC datetime ('Z' accepted, py3.10-safe)."""
    dt = datetime.fromisoformat(text.replace("Z", "+00:00").replace("z", "+00:00"))
    if dt.tzinfo is None:
        raise InvariantViolation(f"timestamp must carry a UTC offset: {text!r}")
    return dt.astimezone(timezone.utc)


def format_rfc3339(dt: datetime) -> str:
    """Canonical UTC serialization with trailing Z; stable across round trips."""
    if dt.tzinfo is None:
        raise InvariantViolation("naive datetimes are not accepted")
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


class EventSource(str, Enum):
    TRIP = "trip"
    MEAL = "meal"
    ELECTRICITY = "electricity"
    PURCHASE = "purchase"


@dataclass(frozen=True)
class FootprintEvent:
    event_id: str
    user_id: str
    source: EventSource
    kg_co2e: Decimal
    occurred_at: datetime
    detail: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.event_id:
            raise InvalidEvent("event_id must be non-empty")
        if not self.user_id:
            raise InvalidEvent("user_id must be non-empty")
        if not isinstance(self.kg_co2e, Decimal) or not self.kg_co2e.is_finite():
            raise InvalidEvent(f"kg_co2e must be a finite decimal, got {self.kg_co2e!r}")
        if self.kg_co2e < 0:
            raise InvalidEvent(f"kg_co2e must be non-negative, got {self.kg_co2e}")
        if self.occurred_at.tzinfo is None:
            raise InvalidEvent("occurred_at must be timezone-aware")

    @property
    def sort_key(self) -> tuple[datetime, str]:
        return (self.occurred_at, self.event_id)


class PeriodKind(str, Enum):
    WEEKLY = "weekly"
    MONTHLY = "monthly"


@dataclass(frozen=True)
class Period:
    kind: PeriodKind
    anchor: date

    def window(self) -> tuple[datetime, datetime]:
        """Half-open UTC window [start, end) containing the anchor date."""
        if self.kind is PeriodKind.WEEKLY:
            monday = self.anchor - timedelta(days=self.anchor.weekday())
            start = datetime(monday.year, monday.month, monday.day, tzinfo=timezone.utc)
            return start, start + timedelta(days=7)
        start = datetime(self.anchor.year, self.anchor.month, 1, tzinfo=timezone.utc)
        if self.anchor.month == 12:
            end = datetime(self.anchor.year + 1, 1, 1, tzinfo=timezone.utc)
        else:
            end = datetime(self.anchor.year, self.anchor.month + 1, 1, tzinfo=timezone.utc)
        return start, end


@dataclass(frozen=True)
class LeaderboardEntry:
    user_id: str
    total_kg: Decimal
    rank: int


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    display_name: str
    region: str
    api_token_hash: str = ""

    def __post_init__(self):
        object.__setattr__(self, "region", self.region.strip().lower())
        if not self.user_id:
            raise InvariantViolation("user_id must be non-empty")
        if not self.region:
            raise InvariantViolation("region must be non-empty")


@dataclass(frozen=True)
class Tip:
    category: str
    message: str
    share: Decimal


def _event_to_obj(event: FootprintEvent) -> dict[str, Any]:
    return {
        "event_id": event.event_id,
        "user_id": event.user_id,
        "source": event.source.value,
        "kg_co2e": str(event.kg_co2e),
        "occurred_at": format_rfc3339(event.occurred_at),
        "detail": dict(event.detail),
    }


def _event_from_obj(obj: Mapping[str, Any]) -> FootprintEvent:
    return FootprintEvent(
        event_id=obj["event_id"],
        user_id=obj["user_id"],
        source=EventSource(obj["source"]),
        kg_co2e=Decimal(obj["kg_co2e"]),
        occurred_at=parse_rfc3339(obj["occurred_at"]),
        detail=obj.get("detail") or {},
    )


class LedgerStore:
    """Single-writer append-only store; reads see a consistent snapshot.

    With a path, every append is flushed (and fsynced unless disabled) before
    the call returns; reopening the same path replays the log. Without a path
    the store is memory-only, for tests and ephemeral use.
    """

    def __init__(self, path: Optional[Path] = None, fsync: bool = True):
        self._path = Path(path) if path is not None else None
        self._fsync = fsync
        self._lock = threading.Lock()
        self._by_id: dict[str, FootprintEvent] = {}
        self._by_user: dict[str, list[FootprintEvent]] = {}
        if self._path is not None and self._path.exists():
            self._replay()

    def _replay(self) -> None:
        for obj in replay_lines(self._path):
            self._index(_event_from_obj(obj))

    def _index(self, event: FootprintEvent) -> None:
        self._by_id[event.event_id] = event
        user_events = self._by_user.setdefault(event.user_id, [])
        bisect.insort(user_events, event, key=lambda e: e.sort_key)

    def append(self, event: FootprintEvent) -> FootprintEvent:
        """Validate freshness, write durably, then index; returns the event."""
        with self._lock:
            if event.event_id in self._by_id:
                raise DuplicateEventId(f"event id {event.event_id} already appended")
            if self._path is not None:
                append_line(self._path, _event_to_obj(event), self._fsync)
            self._index(event)
            return event

    def __len__(self) -> int:
        return len(self._by_id)

    def user_ids(self) -> list[str]:
        return sorted(self._by_user)

    def events_for(self, user_id: str, period: Optional[Period] = None) -> list[FootprintEvent]:
        """User's events in (occurred_at, event_id) order, optionally windowed."""
        events = list(self._by_user.get(user_id, []))
        if period is None:
            return events
        start, end = period.window()
        return [e for e in events if start <= e.occurred_at < end]

    def user_total(self, user_id: str, period: Period) -> Decimal:
        """Exact sum of kg over the user's events inside the window; 0 if none."""
        total = Decimal(0)
        for event in self.events_for(user_id, period):
            total += event.kg_co2e
        return total

    def totals_by_source(self, user_id: str, period: Period) -> dict[EventSource, Decimal]:
        totals = {source: Decimal(0) for source in EventSource}
        for event in self.events_for(user_id, period):
            totals[event.source] += event.kg_co2e
        return totals


def append_event(store: LedgerStore, event: FootprintEvent) -> FootprintEvent:
    return store.append(event)


def user_total(store: LedgerStore, user_id: str, period: Period) -> Decimal:
    return store.user_total(user_id, period)


def leaderboard(
    store: LedgerStore,
    profiles: Iterable[UserProfile],
    period: Period,
    scope: Optional[Iterable[str]] = None,
) -> list[LeaderboardEntry]:
    """Ascending totals over profiles in scope; competition ranking on ties.

    Users without events count at 0; users in scope without a profile are
    skipped. Ties display in user_id order and share the lower rank, with the
    following rank skipped (1, 1, 3, ...).
    """
    scope_set = None if scope is None else set(scope)
    rows = [
        (store.user_total(p.user_id, period), p.user_id)
        for p in profiles
        if scope_set is None or p.user_id in scope_set
    ]
    rows.sort()
    entries: list[LeaderboardEntry] = []
    for i, (total, uid) in enumerate(rows):
        if i > 0 and total == rows[i - 1][0]:
            rank = entries[-1].rank
        else:
            rank = i + 1
        entries.append(LeaderboardEntry(user_id=uid, total_kg=total, rank=rank))
    return entries


def area_average(
    store: LedgerStore,
    profiles: Iterable[UserProfile],
    region: str,
    period: Period,
) -> Decimal:
    """Mean user_total over all profiles in the region, zero-total users included."""
    r = region.strip().lower()
    totals = [store.user_total(p.user_id, period) for p in profiles if p.region == r]
    if not totals:
        raise EmptyRegion(f"no profiles in region {region!r}")
    acc = Decimal(0)
    for t in totals:
        acc += t
    return acc / Decimal(len(totals))


# shares are reported (and threshold-compared) at 12 decimal places
_SHARE_QUANTUM = Decimal("1E-12")


def source_shares(
    store: LedgerStore, user_id: str, period: Period
) -> dict[EventSource, Decimal]:
    """Each source's fraction of the user's period total, quantized to 12 dp.

    All zero when the user has no events in the window.
    """
    by_source = store.totals_by_source(user_id, period)
    total = Decimal(0)
    for v in by_source.values():
        total += v
    shares = {}
    for source, kg in by_source.items():
        if total == 0 or kg == 0:
            shares[source] = Decimal(0)
        else:
            shares[source] = (kg / total).quantize(_SHARE_QUANTUM)
    return shares


@dataclass(frozen=True)
class TipsConfig:
    threshold: Decimal
    messages: Mapping[str, str]
    onboarding: str

    def __post_init__(self):
        missing = [s.value for s in EventSource if s.value not in self.messages]
        if missing:
            raise InvariantViolation(f"tips config missing messages for {missing}")


def load_tips(json_text: str) -> TipsConfig:
    data = json.loads(json_text, parse_float=Decimal)
    threshold = data["threshold"]
    if not isinstance(threshold, Decimal):
        threshold = Decimal(str(threshold))
    return TipsConfig(
        threshold=threshold,
        messages=dict(data["messages"]),
        onboarding=data["onboarding"],
    )


def personalized_tips(
    store: LedgerStore, user_id: str, period: Period, config: TipsConfig
) -> list[Tip]:
    """A tip per source whose share of the period total exceeds the threshold.

    Ordered by descending share (category name breaks exact ties); with no
    events at all, a single onboarding tip comes back instead.
    """
    if store.user_total(user_id, period) == 0:
        return [Tip(category="onboarding", message=config.onboarding, share=Decimal(0))]
    tips = []
    for source, share in source_shares(store, user_id, period).items():
        if share > config.threshold:
            tips.append(Tip(category=source.value, message=config.messages[source.value], share=share))
    tips.sort(key=lambda t: (-t.share, t.category))
    return tips
