"""On-disk cache of instantiated operators.

Entries are JSON files named by a hash of (model digest, canonical
expression text, n, mode, slack).  Each file stores the serialized matrix
together with a checksum of its payload; an entry whose checksum does not
match is treated as missing and rewritten.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from .operators import ConcreteOperator, OperatorExpr, instantiate
from .parser import to_text
from .surface import SurfaceModel

log = logging.getLogger(__name__)

FORMAT = 1


def cache_key(model: SurfaceModel, expr_text: str, n: int, slack: int = 0) -> str:
    blob = json.dumps({"model": model.digest(), "expr": expr_text, "n": n, "mode": model.mode.value,
                       "slack": slack, "format": FORMAT}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _checksum(payload: dict) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def atomic_write(path: Path, text: str) -> None:
    """Write to a temporary file in the same directory, then rename over ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class OperatorCache:
    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.hits = 0
        self.misses = 0
        self.corrupt = 0

    def path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def load(self, model: SurfaceModel, key: str) -> ConcreteOperator | None:
        path = self.path(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
            payload = entry["payload"]
            if entry.get("checksum") != _checksum(payload):
                raise ValueError("checksum mismatch")
            return ConcreteOperator.from_dict(model, payload)
        except (ValueError, KeyError, TypeError) as err:
            log.warning("discarding corrupt cache entry %s (%s)", path.name, err)
            self.corrupt += 1
            return None

    def store(self, key: str, op: ConcreteOperator) -> None:
        payload = op.to_dict()
        entry = {"checksum": _checksum(payload), "payload": payload}
        atomic_write(self.path(key), json.dumps(entry, sort_keys=True))

    def get(self, expr: OperatorExpr, model: SurfaceModel, n: int, slack: int = 0) -> ConcreteOperator:
        """The cached matrix of ``expr`` on weight n, computing and storing it on a miss."""
        key = cache_key(model, to_text(expr), n, slack)
        op = self.load(model, key)
        if op is not None:
            self.hits += 1
            return op
        self.misses += 1
        op = instantiate(expr, model, n, slack)
        self.store(key, op)
        return op
