"""Append-only JSON-lines store of computed s-numbers."""

from __future__ import annotations

import fcntl
import json
import os
from pathlib import Path

from . import __version__
from .partitions import TypeList, format_partition_list

ENV_VAR = "REALSNUM_CACHE"


def cache_key(types: TypeList) -> str:
    """Order-independent key: s-numbers do not depend on the order of the entries."""
    return f"{types.degree}:{format_partition_list(sorted(types.entries, reverse=True))}"


class SNumberCache:
    def __init__(self, path: str | os.PathLike | None):
        self.path = Path(path) if path else None
        self._data: dict[str, int] = {}
        self._loaded = False

    @classmethod
    def from_env(cls, path: str | None = None) -> "SNumberCache":
        return cls(path or os.environ.get(ENV_VAR))

    def _load(self):
        if self._loaded:
            return
        self._loaded = True
        if self.path is None or not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    continue  # tolerate a torn last line
                if rec.get("version") == __version__:
                    self._data[rec["key"]] = int(rec["s"])

    def get(self, types: TypeList) -> int | None:
        self._load()
        return self._data.get(cache_key(types))

    def put(self, types: TypeList, value: int):
        self._load()
        key = cache_key(types)
        if self._data.get(key) == value:
            return
        self._data[key] = value
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        line = json.dumps({"key": key, "s": value, "version": __version__}) + "\n"
        with open(self.path, "a", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.write(line)
                fh.flush()
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def s_number(self, types: TypeList, compute) -> int:
        hit = self.get(types)
        if hit is not None:
            return hit
        value = compute(types)
        self.put(types, value)
        return value
