"""Generic "strictly better alternatives" ranking.

Shared by the barcode catalog and the menu recommender: keep candidates in the
same category whose footprint is strictly lower than the reference, ascending
by footprint with a caller-supplied tie-break, truncated to a limit.
"""

from decimal import Decimal
from typing import Callable, Iterable, TypeVar

from .errors import InvariantViolation

T = TypeVar("T")


def rank_lower_footprint(
    candidates: Iterable[T],
    *,
    reference_footprint: Decimal,
    footprint: Callable[[T], Decimal],
    tiebreak: Callable[[T], str],
    limit: int,
) -> list[T]:
    if limit < 1:
        raise InvariantViolation(f"limit must be >= 1, got {limit}")
    better = [c for c in candidates if footprint(c) < reference_footprint]
    better.sort(key=lambda c: (footprint(c), tiebreak(c)))
    return better[:limit]
