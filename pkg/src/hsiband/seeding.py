"""Deterministic seed derivation for nested, parallelizable experiments."""

from __future__ import annotations

import hashlib


def derive_seed(*parts: object) -> int:
    """Stable 64-bit seed from a path of context labels.

    Hashing the joined labels gives every nested context (repetition,
    epoch, individual, fold) an independent stream whose value does not
    depend on evaluation order or worker scheduling.
    """
    text = "/".join(str(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")
