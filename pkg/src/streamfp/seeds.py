"""Deterministic seed derivation.

Experiments fan one recorded seed out into independent streams (language
construction, nonmember draws, per-query points).  Derivation goes
through SHA-256 of a label path, so the same seed and labels give the
same child seed on every platform and run, and results never depend on
the order in which the streams are consumed.
"""

from __future__ import annotations

import hashlib
import random

__all__ = ["derive_seed", "derived_rng"]


def derive_seed(seed: int, *labels: object) -> int:
    text = "streamfp/" + repr(int(seed)) + "/" + "/".join(repr(x) for x in labels)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def derived_rng(seed: int, *labels: object) -> random.Random:
    return random.Random(derive_seed(seed, *labels))
