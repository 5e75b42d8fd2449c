"""Bitmask helpers for subsets of {0..n-1}.

Subsets of element indices are stored as ints, bit i set iff element i is a
member.  The canonical order on subsets is (cardinality, membership vector),
the membership vector being read left to right from element 0.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def elements_of(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def members(mask: int) -> tuple[int, ...]:
    return tuple(elements_of(mask))


def has(mask: int, i: int) -> bool:
    return bool((mask >> i) & 1)


def canon_key(mask: int, n: int) -> tuple[int, tuple[int, ...]]:
    """Sort key: cardinality first, then the membership vector lexicographically."""
    return (mask.bit_count(), tuple((mask >> i) & 1 for i in range(n)))


def subset_str(mask: int, names: tuple[str, ...]) -> str:
    return "{" + ",".join(names[i] for i in elements_of(mask)) + "}"
