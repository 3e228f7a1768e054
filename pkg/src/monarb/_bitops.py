"""Bitset helpers.

Vertex sets and adjacency rows are plain Python ints used as bitsets
(bit j set <=> vertex j present).  Arbitrary-precision ints make the
same code work for any order; a packed numpy path exists in core for
the large-order bulk operations.
"""

from __future__ import annotations

from typing import Iterator


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices) -> int:
    """Bitset from an iterable of vertex indices."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def full_mask(n: int) -> int:
    return (1 << n) - 1
