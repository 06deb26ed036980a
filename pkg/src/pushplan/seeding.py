"""Stable seed derivation for nested experiments.

``hash()`` is salted per process, so reproducible sub-seeds are derived by
hashing the textual key parts instead.  The same parts always give the same
seed, on any platform and in any process.
"""

from __future__ import annotations

import hashlib


def derive_seed(*parts: object) -> int:
    """Deterministically mix ``parts`` into a 63-bit seed."""
    h = hashlib.sha256()
    for p in parts:
        h.update(repr(p).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest()[:8], "big") >> 1
