"""Bitmask helpers shared by the set-image searches.

Point sets are encoded as Python ints (bit ``i`` set iff point ``i`` is a
member). Mapping a set through a total map is done byte-by-byte with
precomputed lookup tables.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def to_mask(points: Iterable[int]) -> int:
    mask = 0
    for p in points:
        mask |= 1 << p
    return mask


def from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class MaskMapper:
    """Image of a point set under a map ``images`` (``i -> images[i]``)."""

    __slots__ = ("tables", "nbytes")

    def __init__(self, images: Sequence[int]):
        n = len(images)
        self.nbytes = (n + 7) // 8
        self.tables = []
        for b in range(self.nbytes):
            table = [0] * 256
            base = 8 * b
            for byte in range(1, 256):
                low = byte & -byte
                bit = low.bit_length() - 1
                p = base + bit
                img = (1 << images[p]) if p < n else 0
                table[byte] = table[byte ^ low] | img
            self.tables.append(table)

    def __call__(self, mask: int) -> int:
        out = 0
        for table in self.tables:
            if not mask:
                break
            out |= table[mask & 0xFF]
            mask >>= 8
        return out
