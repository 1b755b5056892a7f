from decimal import Decimal

import pytest
from hypothesis import given, strategies as st

from carbonledger import errors
from carbonledger.factors import (
    CSV_HEADER,
    Category,
    EmissionFactor,
    FactorKey,
    Unit,
    dump_factors,
    load_factors,
    lookup,
    parse_plain_decimal,
    upsert_factor,
)

HEADER_ONLY = CSV_HEADER + "\n"


def row(category="travel", variant="car:petrol", unit="km", value="0.192", note="seed"):
    return f"{category},{variant},{unit},{value},{note}"


def test_header_only_gives_empty_registry_version_1():
    registry = load_factors(HEADER_ONLY)
    assert len(registry) == 0
    assert registry.version == 1


def test_two_valid_rows():
    text = HEADER_ONLY + row() + "\n" + row(variant="bus:diesel", value="0.105") + "\n"
    registry = load_factors(text)
    assert len(registry) == 2
    assert registry.lookup("travel", "car:petrol").kg_co2e_per_unit == Decimal("0.192")


def test_duplicate_key_detected_at_first_duplicate_row():
    # independent row-scan oracle: first line whose (category, variant) repeats
    rows = [
        row(),
        row(variant="bus:diesel", value="0.105"),
        row(value="0.2"),  # duplicate of line 2's key, file line 4
    ]
    seen = set()
    first_dup_line = None
    for i, r in enumerate(rows, start=2):
        key = tuple(r.split(",")[:2])
        if key in seen:
            first_dup_line = i
            break
        seen.add(key)
    assert first_dup_line == 4

    with pytest.raises(errors.DuplicateKey) as exc_info:
        load_factors(HEADER_ONLY + "\n".join(rows) + "\n")
    assert "line 4" in str(exc_info.value)
    assert "car:petrol" in str(exc_info.value)


def test_variant_normalized_to_lowercase_on_ingest():
    registry = load_factors(HEADER_ONLY + row(variant="CAR:Petrol") + "\n")
    assert registry.lookup("travel", "car:petrol").key.variant == "car:petrol"


def test_lookup_round_trip_and_case_insensitive(registry):
    factor = registry.lookup("travel", "car:petrol")
    assert registry.lookup("travel", "CAR:PETROL") == factor
    assert lookup(registry, Category.TRAVEL, "Car:Petrol") == factor


def test_lookup_absent_variant():
    registry = load_factors(HEADER_ONLY)
    with pytest.raises(errors.FactorNotFound):
        registry.lookup("travel", "hoverboard:fusion")


def test_upsert_insert_then_lookup(registry):
    factor = EmissionFactor(
        FactorKey(Category.TRAVEL, "tram:electric", Unit.KM), Decimal("0.029"), "seed"
    )
    updated = upsert_factor(registry, factor)
    assert updated.lookup("travel", "tram:electric") == factor
    with pytest.raises(errors.FactorNotFound):
        registry.lookup("travel", "tram:electric")  # original untouched


def test_upsert_existing_key_replaces_value_same_size(registry):
    size = len(registry)
    factor = EmissionFactor(
        FactorKey(Category.TRAVEL, "car:petrol", Unit.KM), Decimal("0.2"), "rev"
    )
    updated = registry.upsert(factor)
    assert len(updated) == size
    assert updated.lookup("travel", "car:petrol").kg_co2e_per_unit == Decimal("0.2")


def test_upsert_bumps_version_by_one(registry):
    before = registry.version
    factor = EmissionFactor(
        FactorKey(Category.PRODUCT, "mug", Unit.ITEM), Decimal("1.0"), ""
    )
    assert registry.upsert(factor).version == before + 1


def test_negative_factor_rejected():
    with pytest.raises(errors.InvalidFactor):
        load_factors(HEADER_ONLY + row(value="-0.1") + "\n")
    with pytest.raises(errors.InvalidFactor):
        EmissionFactor(FactorKey(Category.TRAVEL, "x", Unit.KM), Decimal("-1"))


def test_non_finite_factor_rejected():
    with pytest.raises(errors.InvalidFactor):
        EmissionFactor(FactorKey(Category.TRAVEL, "x", Unit.KM), Decimal("NaN"))


def test_wrong_column_count_is_malformed_row():
    with pytest.raises(errors.MalformedRow) as exc_info:
        load_factors(HEADER_ONLY + "travel,car:petrol,km,0.192\n")
    assert exc_info.value.line_no == 2


@pytest.mark.parametrize("bad", ["1e3", "0x1f", "1,5", "1.5.2", "", " ", "+1.5"])
def test_exotic_decimals_rejected(bad):
    with pytest.raises(errors.MalformedRow):
        load_factors(HEADER_ONLY + row(value=bad) + "\n")


def test_plain_decimal_parser():
    assert parse_plain_decimal("0.192") == Decimal("0.192")
    assert parse_plain_decimal(" 12 ") == Decimal("12")
    with pytest.raises(ValueError):
        parse_plain_decimal("1E2")


def test_unknown_category_and_unit():
    with pytest.raises(errors.UnknownCategory):
        load_factors(HEADER_ONLY + row(category="aviation") + "\n")
    with pytest.raises(errors.UnknownUnit):
        load_factors(HEADER_ONLY + row(unit="miles") + "\n")


def test_comment_and_blank_lines_skipped():
    text = "# factor seed file\n\n" + HEADER_ONLY + "# comment\n" + row() + "\n\n"
    assert len(load_factors(text)) == 1


def test_variant_with_inner_whitespace_rejected():
    with pytest.raises(errors.MalformedRow):
        load_factors(HEADER_ONLY + row(variant="car petrol") + "\n")


def test_missing_header_rejected():
    with pytest.raises(errors.MalformedRow):
        load_factors("travel,car:petrol,km,0.192,seed\n")


def test_registry_size_counts_distinct_pairs(registry):
    pairs = {(f.key.category, f.key.variant) for f in registry.list()}
    assert len(registry) == len(pairs)


_variants = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyz0123456789:-_", min_size=1, max_size=12
)
_values = st.decimals(
    min_value=Decimal("0"), max_value=Decimal("9999"), allow_nan=False, places=4
)
_notes = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc")), max_size=20
).map(lambda s: s.replace("\n", " ").strip())


@st.composite
def registries(draw):
    entries = draw(
        st.dictionaries(
            st.tuples(st.sampled_from(list(Category)), _variants),
            st.tuples(st.sampled_from(list(Unit)), _values, _notes),
            max_size=25,
        )
    )
    reg = load_factors(CSV_HEADER + "\n")
    for (category, variant), (unit, value, note) in entries.items():
        reg = reg.upsert(EmissionFactor(FactorKey(category, variant, unit), value, note))
    return reg


@given(registries())
def test_dump_then_load_is_idempotent(reg):
    printed = dump_factors(reg)
    reloaded = load_factors(printed)
    assert dump_factors(reloaded) == printed
    assert len(reloaded) == len(reg)
    for factor in reg.list():
        again = reloaded.lookup(factor.key.category, factor.key.variant)
        assert again.kg_co2e_per_unit == factor.kg_co2e_per_unit
