"""On-disk JSON result cache keyed by a canonical query string."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

ENV_VAR = "HALO_CACHE_DIR"


def canonical_query(query: dict) -> str:
    return json.dumps(query, sort_keys=True, separators=(",", ":"))


class ResultCache:
    """One JSON file per query; writes are atomic renames, so concurrent readers never see partial files."""

    def __init__(self, directory: str | os.PathLike):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_env(cls, directory: str | None = None) -> ResultCache | None:
        directory = directory or os.environ.get(ENV_VAR)
        return cls(directory) if directory else None

    def _path(self, key: str) -> Path:
        return self.dir / (hashlib.sha256(key.encode()).hexdigest()[:32] + ".json")

    def get(self, query: dict):
        key = canonical_query(query)
        path = self._path(key)
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            return None
        if data.get("query") != key:
            return None
        return data.get("result")

    def put(self, query: dict, result) -> None:
        key = canonical_query(query)
        path = self._path(key)
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump({"query": key, "result": result}, fh, sort_keys=True)
        os.replace(tmp, path)
