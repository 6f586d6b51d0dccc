"""Deterministic derivation of independent RNG seeds.

Hashing keeps derived streams stable across processes and platforms
(Python's built-in hash is salted per process, so it cannot be used here).
"""

from __future__ import annotations

import hashlib


def derive_seed(*parts) -> int:
    """A 64-bit seed deterministically derived from the given parts."""
    text = "\x1f".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
