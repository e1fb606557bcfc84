"""Content-addressed JSON cache for expensive invariant tensors."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

__all__ = ["Cache", "content_key"]

ENV_VAR = "ZESTLAB_CACHE"
DEFAULT_DIR = ".zestlab-cache"


def content_key(fields: dict) -> str:
    blob = json.dumps(fields, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class Cache:
    """Files live at ``<root>/<kind>/<sha256>.json``; writes are atomic renames."""

    def __init__(self, root: str | os.PathLike | None = None, enabled: bool = True):
        self.root = Path(root or os.environ.get(ENV_VAR) or DEFAULT_DIR)
        self.enabled = enabled

    def path(self, kind: str, fields: dict) -> Path:
        return self.root / kind / f"{content_key(fields)}.json"

    def get(self, kind: str, fields: dict):
        if not self.enabled:
            return None
        path = self.path(kind, fields)
        try:
            with open(path) as fh:
                record = json.load(fh)
        except FileNotFoundError:
            return None
        except (OSError, json.JSONDecodeError) as exc:
            raise RuntimeError(f"cache entry {path} is unreadable: {exc}") from exc
        if record.get("key") != fields:
            return None
        return record["value"]

    def put(self, kind: str, fields: dict, value) -> Path:
        path = self.path(kind, fields)
        if not self.enabled:
            return path
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump({"key": fields, "value": value}, fh, sort_keys=True)
        os.replace(tmp, path)
        return path
