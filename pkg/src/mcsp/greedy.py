"""Greedy baseline: repeatedly take a longest block compatible with the current selection."""
from __future__ import annotations

from .blocks import BlockSet, enumerate_blocks
from .core import CommonBlock, Instance, Partition


def greedy_select(n: int, blocks: BlockSet, cover1: bytes | None = None,
                  cover2: bytes | None = None) -> list[CommonBlock]:
    """One pass over ``blocks`` in canonical order, keeping each block that still fits.

    ``cover1``/``cover2`` mark positions that are already taken (default: none).

    A block rejected once can never fit later (coverage only grows), so the
    first fitting block in canonical order is always a longest compatible
    block, ties going to the smallest k1 and then the smallest k2.
    """
    c1 = bytearray(n) if cover1 is None else bytearray(cover1)
    c2 = bytearray(n) if cover2 is None else bytearray(cover2)
    out = []
    covered = c1.count(1)
    for b in blocks:
        ln = len(b.text)
        lo1, lo2 = b.k1 - 1, b.k2 - 1
        if c1.find(1, lo1, lo1 + ln) != -1 or c2.find(1, lo2, lo2 + ln) != -1:
            continue
        c1[lo1:lo1 + ln] = b"\x01" * ln
        c2[lo2:lo2 + ln] = b"\x01" * ln
        out.append(b)
        covered += ln
        if covered == n:
            break
    return out


def greedy_partition(inst: Instance, blocks: BlockSet | None = None) -> Partition:
    if blocks is None:
        blocks = enumerate_blocks(inst)
    return Partition.from_blocks(inst, greedy_select(inst.n, blocks))
