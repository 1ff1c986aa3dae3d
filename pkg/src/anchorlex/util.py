"""Small shared helpers: atomic writes, digests, canonical JSON."""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile


def atomic_write_text(path: str, text: str, encoding: str = "utf-8") -> None:
    """Write via temp file + rename so readers never see a partial file."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding=encoding, newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def canonical_json(obj: object) -> str:
    """Deterministic JSON: sorted keys, no trailing whitespace games."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def round_half_up(x: float) -> int:
    """round() is banker's; split bookkeeping wants plain .5-goes-up."""
    return int(math.floor(x + 0.5))
