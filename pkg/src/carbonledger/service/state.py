"""Mutable service state: loaded tables plus the three durable stores.

Fixture tables (factors, catalog, tariffs, menus, tips) are immutable objects
behind plain attributes; reload builds fresh ones and swaps the references
atomically. Ledger, journal and user stores serialize their own writes.
"""

import threading

from ..barcodes import Catalog, load_catalog
from ..bills import TariffTable, load_tariffs
from ..factors import FactorRegistry, load_factors
from ..journal import JournalStore
from ..ledger import LedgerStore, TipsConfig, load_tips
from ..menus import Menu, load_menus
from ..users import UserStore, load_or_create_pepper
from .config import ServiceConfig


class AppState:
    def __init__(self, config: ServiceConfig):
        config.validate()
        self.config = config
        self._reload_lock = threading.Lock()

        self.registry: FactorRegistry
        self.catalog: Catalog
        self.tariffs: TariffTable
        self.menus: dict[str, Menu]
        self.tips: TipsConfig
        self._load_tables()

        self.ledger = LedgerStore(config.events_log, fsync=config.fsync)
        self.journal = JournalStore(config.journal_log, fsync=config.fsync)
        self.journal.recover_purchases(self.ledger)
        pepper = load_or_create_pepper(config.pepper_file)
        self.users = UserStore(pepper, config.users_log, fsync=config.fsync)

    def _load_tables(self) -> None:
        config = self.config
        registry = load_factors(config.factors_csv.read_text(encoding="utf-8"))
        catalog = load_catalog(config.catalog_csv.read_text(encoding="utf-8"))
        tariffs = load_tariffs(config.tariffs_csv.read_text(encoding="utf-8"))
        menus = dict(load_menus(config.menus_json.read_text(encoding="utf-8")))
        tips = load_tips(config.tips_config.read_text(encoding="utf-8"))
        # parse everything first, then publish: a bad file never half-applies
        self.registry = registry
        self.catalog = catalog
        self.tariffs = tariffs
        self.menus = menus
        self.tips = tips

    def reload_tables(self) -> None:
        with self._reload_lock:
            self._load_tables()
