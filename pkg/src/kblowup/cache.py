"""Content-addressed on-disk cache for computed series."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .algebra.lamseries import LamSeries
from .errors import CacheCorrupt

FORMAT_VERSION = 1
ENV_VAR = "KBLOWUP_CACHE"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class CacheRecord:
    version: int
    key: dict
    payload: str
    digest: str

    def series(self) -> LamSeries:
        return LamSeries.from_json(json.loads(self.payload))


def cache_root(flag: str | None = None) -> Path | None:
    root = flag or os.environ.get(ENV_VAR)
    return Path(root) if root else None


class SeriesCache:
    def __init__(self, root):
        self.root = Path(root)

    def path(self, key: dict) -> Path:
        return self.root / f"{digest(canonical_json(key))}.json"

    def store(self, key: dict, series: LamSeries) -> CacheRecord:
        payload = canonical_json(series.to_json())
        rec = CacheRecord(FORMAT_VERSION, dict(key), payload, digest(payload))
        text = canonical_json({"version": rec.version, "key": rec.key, "payload": rec.payload, "digest": rec.digest})
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return rec

    def load(self, key: dict) -> CacheRecord | None:
        """The stored record, or None on a miss (absent file or older format)."""
        p = self.path(key)
        if not p.exists():
            return None
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise CacheCorrupt(f"{p}: unreadable record") from e
        if data.get("version") != FORMAT_VERSION:
            return None
        if data.get("key") != key:
            raise CacheCorrupt(f"{p}: key mismatch")
        payload = data.get("payload", "")
        if digest(payload) != data.get("digest"):
            raise CacheCorrupt(f"{p}: digest mismatch")
        return CacheRecord(data["version"], data["key"], payload, data["digest"])

    def get_or_compute(self, key: dict, compute) -> LamSeries:
        rec = self.load(key)
        if rec is not None:
            return rec.series()
        series = compute()
        self.store(key, series)
        return series


def cache_io(root, key: dict, payload: LamSeries | None = None):
    """Store ``payload`` under ``key`` when given, otherwise load (None on a miss)."""
    c = SeriesCache(root)
    if payload is not None:
        return c.store(key, payload)
    return c.load(key)
