"""Service configuration: ports, data dir, and the five fixture tables.

Table paths default to the CSV/JSON seeds bundled with the package; the data
dir holds everything the service writes (event log, journal log, users log,
token pepper). Startup fails fast if any configured table is unreadable.
"""

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path


class ConfigError(Exception):
    pass


def _bundled(name: str) -> Path:
    return Path(str(resources.files("carbonledger") / "data" / name))


@dataclass
class ServiceConfig:
    listen_port: int = 8800
    data_dir: Path = Path("carbonledger-data")
    factors_csv: Path = field(default_factory=lambda: _bundled("factors.csv"))
    catalog_csv: Path = field(default_factory=lambda: _bundled("catalog.csv"))
    tariffs_csv: Path = field(default_factory=lambda: _bundled("tariffs.csv"))
    menus_json: Path = field(default_factory=lambda: _bundled("menus.json"))
    tips_config: Path = field(default_factory=lambda: _bundled("tips.json"))
    fsync: bool = True

    def __post_init__(self):
        self.data_dir = Path(self.data_dir)
        for attr in ("factors_csv", "catalog_csv", "tariffs_csv", "menus_json", "tips_config"):
            setattr(self, attr, Path(getattr(self, attr)))

    def validate(self) -> None:
        for attr in ("factors_csv", "catalog_csv", "tariffs_csv", "menus_json", "tips_config"):
            path = getattr(self, attr)
            if not (path.is_file() and os.access(path, os.R_OK)):
                raise ConfigError(f"{attr} is not a readable file: {path}")
        self.data_dir.mkdir(parents=True, exist_ok=True)

    @property
    def events_log(self) -> Path:
        return self.data_dir / "events.jsonl"

    @property
    def journal_log(self) -> Path:
        return self.data_dir / "journal.jsonl"

    @property
    def users_log(self) -> Path:
        return self.data_dir / "users.jsonl"

    @property
    def pepper_file(self) -> Path:
        return self.data_dir / "token-pepper"
