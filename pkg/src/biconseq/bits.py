"""Small bitmask helpers."""

from __future__ import annotations

from typing import Iterator


def submasks(m: int) -> Iterator[int]:
    """All submasks of ``m``, starting with ``m`` itself and ending with 0."""
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


def bits_of(m: int) -> Iterator[int]:
    """Positions of set bits, ascending."""
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


def popcount(m: int) -> int:
    return bin(m).count("1")


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0
