"""Integer-backed interpretations.

Bit ``i`` of a mask stands for the ``i``-th atom of a universe, so the
numeric value of a mask is the canonical encoding used for ordering.
"""

from typing import FrozenSet, Iterable, Iterator, List, Mapping, Sequence


def popcount(x: int) -> int:
    return bin(x).count("1")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def submasks(mask: int) -> Iterator[int]:
    """Yield every submask of ``mask`` in ascending numeric order, ``0`` and ``mask`` included."""
    x = 0
    while True:
        yield x
        if x == mask:
            return
        x = (x - mask) & mask


def proper_submasks_desc(mask: int) -> Iterator[int]:
    """Yield the proper submasks of ``mask`` from the largest down to ``0``."""
    if mask == 0:
        return
    x = (mask - 1) & mask
    while True:
        yield x
        if x == 0:
            return
        x = (x - 1) & mask


def bit_indices(mask: int) -> List[int]:
    indices = []
    bit = 0
    while mask:
        if mask & 1:
            indices.append(bit)
        mask >>= 1
        bit += 1
    return indices


def mask_of(names: Iterable[str], index: Mapping[str, int]) -> int:
    """Encode atom names; raises KeyError for names outside ``index``."""
    mask = 0
    for name in names:
        mask |= 1 << index[name]
    return mask


def names_of(mask: int, universe: Sequence[str]) -> FrozenSet[str]:
    return frozenset(universe[i] for i in bit_indices(mask))
