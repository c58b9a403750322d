"""Shared test helpers."""

from __future__ import annotations


class FixedRng:
    """A stand-in RNG returning preset getrandbits values in order."""

    def __init__(self, *values: int):
        self._values = list(values)

    def getrandbits(self, _k: int) -> int:
        return self._values.pop(0)
