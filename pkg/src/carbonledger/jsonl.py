"""Append-only JSON-lines files with torn-tail recovery.

A crash mid-append leaves an unparseable final line; replay truncates it and
warns, because the write never committed. Bad JSON anywhere else is real
damage and raises. Appends flush (and fsync unless disabled) before returning.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Iterator

logger = logging.getLogger(__name__)


def append_line(path: Path, obj: dict[str, Any], fsync: bool = True) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")
        fh.flush()
        if fsync:
            os.fsync(fh.fileno())


def replay_lines(path: Path) -> Iterator[dict[str, Any]]:
    """Yield one parsed object per line; recover from a torn trailing line."""
    raw = path.read_bytes()
    lines = raw.splitlines(keepends=True)
    offset = 0
    for i, line in enumerate(lines):
        if not line.strip():
            offset += len(line)
            continue
        try:
            obj = json.loads(line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            if any(l.strip() for l in lines[i + 1 :]):
                raise
            logger.warning(
                "truncating corrupt trailing line in %s (%d bytes kept)", path, offset
            )
            with open(path, "r+b") as fh:
                fh.truncate(offset)
            return
        yield obj
        offset += len(line)
