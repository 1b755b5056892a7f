"""Carbon-footprint accounting: emission factors, activity engines, event ledger."""

__version__ = "0.1.0"
