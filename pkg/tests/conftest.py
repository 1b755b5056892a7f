from decimal import Decimal

import pytest

from carbonledger.barcodes import Barcode, Catalog, Product, check_digit
from carbonledger.factors import load_factors


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): marks a test as one acceptance criterion"
    )
    config._acceptance_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("acceptance")
    if marker:
        item.config._acceptance_results.append((marker.args[0], report.passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed in results:
        terminalreporter.write_line(f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'}")

FACTORS_CSV = """\
category,variant,unit,kg_co2e_per_unit,source_note
travel,car:petrol,km,0.192,seed
travel,car:diesel,km,0.171,seed
travel,bus:diesel,km,0.105,seed
travel,train:electric,km,0.041,seed
travel,walk:none,km,0,seed
travel,cycle:none,km,0,seed
food_ingredient,beef,kg,27.0,seed
food_ingredient,rice,kg,2.7,seed
food_ingredient,chicken,kg,6.9,seed
food_ingredient,lentils,kg,0.9,seed
food_ingredient,potato,kg,0.3,seed
electricity,grid:in-ka,kWh,0.82,seed
electricity,grid:in-mh,kWh,0.79,seed
product,t-shirt,item,2.1,seed
"""


@pytest.fixture
def registry():
    return load_factors(FACTORS_CSV)


def make_barcode(prefix12: str) -> Barcode:
    """Valid 13-digit barcode from any 12-digit prefix."""
    return Barcode(prefix12 + check_digit(prefix12))


def make_product(prefix12: str, name: str, category: str, footprint: str) -> Product:
    return Product(make_barcode(prefix12), name, category, Decimal(footprint))


@pytest.fixture
def catalog():
    products = [
        make_product("100000000001", "oat drink", "beverages", "0.4"),
        make_product("100000000002", "soy drink", "beverages", "0.5"),
        make_product("100000000003", "dairy milk", "beverages", "1.3"),
        make_product("100000000004", "cola", "beverages", "0.6"),
        make_product("200000000001", "lentil pack", "staples", "0.9"),
        make_product("200000000002", "white rice", "staples", "2.7"),
        make_product("200000000003", "brown rice", "staples", "2.5"),
    ]
    return Catalog({p.barcode.digits: p for p in products})
