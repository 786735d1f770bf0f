"""On-disk cache of computed spaces, keyed by a hash of the resolved job spec.

Each entry stores its spec, the spec hash and a hash of the payload; entries
whose hashes do not verify are treated as misses.  Writes go to a temporary
file in the cache directory and are moved into place with ``os.replace``.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def spec_hash(spec: dict) -> str:
    return hashlib.sha256(canonical_json({"v": FORMAT_VERSION, "spec": spec}).encode()).hexdigest()


def payload_hash(payload) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


class Cache:
    def __init__(self, directory: str | os.PathLike | None):
        self.dir = Path(directory) if directory else None
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)

    @property
    def enabled(self) -> bool:
        return self.dir is not None

    def _path(self, kind: str, key: str) -> Path:
        return self.dir / ("%s-%s.json" % (kind, key[:32]))

    def get(self, kind: str, spec: dict):
        if not self.enabled:
            return None
        key = spec_hash(spec)
        path = self._path(kind, key)
        try:
            entry = json.loads(path.read_text())
        except FileNotFoundError:
            return None
        except (OSError, ValueError):
            log.warning("unreadable cache entry %s; recomputing", path)
            return None
        if entry.get("spec_hash") != key or entry.get("payload_hash") != payload_hash(entry.get("payload")):
            log.warning("cache entry %s failed hash verification; recomputing", path)
            return None
        return entry["payload"]

    def put(self, kind: str, spec: dict, payload) -> None:
        if not self.enabled:
            return
        key = spec_hash(spec)
        entry = {"spec": spec, "spec_hash": key, "payload": payload, "payload_hash": payload_hash(payload)}
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(canonical_json(entry))
            os.replace(tmp, self._path(kind, key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
