"""Set partition enumeration.

Partitions are yielded as tuples of blocks, each block a tuple of items in
input order, blocks ordered by their first item.
"""
from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterator, Optional, Sequence, Tuple

Block = Tuple
Partition = Tuple[Block, ...]


def set_partitions(
    items: Sequence,
    k: Optional[int] = None,
    size_ok: Optional[Callable[[int], bool]] = None,
) -> Iterator[Partition]:
    """All set partitions of ``items``.

    ``k`` fixes the number of blocks; ``size_ok`` restricts block sizes.
    Each partition is produced exactly once: the block holding the first
    remaining item is chosen, then the rest is partitioned recursively.
    """
    items = tuple(items)
    if k is not None and (k < 0 or k > len(items)):
        return
    yield from _partitions(items, k, size_ok)


def _partitions(items, k, size_ok):
    n = len(items)
    if n == 0:
        if k is None or k == 0:
            yield ()
        return
    if k is not None:
        if k == 0:
            return
        max_size = n - (k - 1)
    else:
        max_size = n
    first, rest = items[0], items[1:]
    for size in range(1, max_size + 1):
        if size_ok is not None and not size_ok(size):
            continue
        for others in combinations(range(len(rest)), size - 1):
            block = (first,) + tuple(rest[i] for i in others)
            chosen = set(others)
            remaining = tuple(x for i, x in enumerate(rest) if i not in chosen)
            sub_k = None if k is None else k - 1
            for tail in _partitions(remaining, sub_k, size_ok):
                yield (block,) + tail


def bell_number(n: int) -> int:
    """Bell number via the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]
