"""Enumeration and filtering of common blocks."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence, overload

import numpy as np

from .core import CommonBlock, Instance, InstanceFormatError, Partition, canonical_key


@dataclass(frozen=True)
class BlockSet(Sequence[CommonBlock]):
    """An ordered collection of common blocks.

    ``ids`` holds the 1-based canonical index of each block in the complete
    block set of its instance, so subsets keep stable variable names.
    """

    blocks: tuple[CommonBlock, ...]
    ids: tuple[int, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.ids):
            raise ValueError("blocks and ids differ in length")

    @classmethod
    def from_blocks(cls, blocks: Iterable[CommonBlock]) -> BlockSet:
        """Canonically order ``blocks`` and number them 1..m."""
        ordered = tuple(sorted(set(blocks), key=canonical_key))
        return cls(ordered, tuple(range(1, len(ordered) + 1)))

    def __len__(self) -> int:
        return len(self.blocks)

    @overload
    def __getitem__(self, i: int) -> CommonBlock: ...
    @overload
    def __getitem__(self, i: slice) -> BlockSet: ...

    def __getitem__(self, i):
        if isinstance(i, slice):
            return BlockSet(self.blocks[i], self.ids[i])
        return self.blocks[i]

    def __iter__(self) -> Iterator[CommonBlock]:
        return iter(self.blocks)

    def __contains__(self, b: object) -> bool:
        return b in self.id_of

    @property
    def m(self) -> int:
        return len(self.blocks)

    @cached_property
    def id_of(self) -> dict[CommonBlock, int]:
        return dict(zip(self.blocks, self.ids))

    @cached_property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(k1, k2, length) as int arrays, for vectorised filters."""
        m = len(self.blocks)
        k1 = np.fromiter((b.k1 for b in self.blocks), dtype=np.int64, count=m)
        k2 = np.fromiter((b.k2 for b in self.blocks), dtype=np.int64, count=m)
        ln = np.fromiter((len(b.text) for b in self.blocks), dtype=np.int64, count=m)
        return k1, k2, ln

    def select(self, mask: np.ndarray) -> BlockSet:
        idx = np.flatnonzero(mask)
        return BlockSet(tuple(self.blocks[i] for i in idx), tuple(self.ids[i] for i in idx))


def lce_table(s1: str, s2: str) -> np.ndarray:
    """``T[i, j]`` = length of the longest common prefix of ``s1[i:]`` and ``s2[j:]`` (0-based)."""
    n1, n2 = len(s1), len(s2)
    a = np.fromiter(map(ord, s1), dtype=np.int64, count=n1)
    b = np.fromiter(map(ord, s2), dtype=np.int64, count=n2)
    dtype = np.int16 if max(n1, n2) < 2**15 else np.int32
    table = np.zeros((n1 + 1, n2 + 1), dtype=dtype)
    for i in range(n1 - 1, -1, -1):
        row = table[i + 1, 1:] + 1
        row[b != a[i]] = 0
        table[i, :n2] = row
    return table[:n1, :n2]


def enumerate_blocks(inst: Instance) -> BlockSet:
    """All common blocks of ``inst`` in canonical order (longest first, then k1, then k2)."""
    table = lce_table(inst.s1, inst.s2)
    s1 = inst.s1
    out: list[CommonBlock] = []
    for length in range(int(table.max()), 0, -1):
        # nonzero() walks row-major, i.e. ascending k1 then ascending k2
        ii, jj = np.nonzero(table >= length)
        out.extend(
            CommonBlock(s1[i:i + length], i + 1, j + 1)
            for i, j in zip(ii.tolist(), jj.tolist())
        )
    return BlockSet(tuple(out), tuple(range(1, len(out) + 1)))


def filter_min_length(blocks: BlockSet, l: int) -> BlockSet:
    """Blocks whose string has length at least ``l``, order preserved."""
    if l < 1:
        raise ValueError(f"minimum length must be >= 1, got {l}")
    if l == 1:
        return blocks
    return blocks.select(blocks.arrays[2] >= l)


def l_max(blocks: BlockSet) -> int:
    """Length of the longest block, i.e. the largest l with a non-empty filtered set."""
    if len(blocks) == 0:
        raise ValueError("l_max of an empty block set is undefined")
    return int(blocks.arrays[2].max())


def _free_interval(cover: bytes, starts: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    prefix = np.concatenate(([0], np.cumsum(np.frombuffer(cover, dtype=np.uint8), dtype=np.int64)))
    return prefix[starts - 1 + lengths] - prefix[starts - 1] == 0


def compatible_blocks(blocks: BlockSet, partial: Partition) -> BlockSet:
    """Blocks that can extend ``partial`` without overlapping it in either string."""
    if not partial.blocks:
        return blocks
    k1, k2, ln = blocks.arrays
    ok = _free_interval(partial.cover1, k1, ln) & _free_interval(partial.cover2, k2, ln)
    return blocks.select(ok)


@dataclass(frozen=True)
class LengthHistogram:
    counts: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def fraction(self, length: int) -> float:
        total = self.total
        return self.counts.get(length, 0) / total if total else 0.0

    def to_csv(self) -> str:
        lines = ["length,count"]
        lines += [f"{k},{v}" for k, v in sorted(self.counts.items())]
        return "\n".join(lines) + "\n"


def length_histogram(blocks: BlockSet) -> LengthHistogram:
    if len(blocks) == 0:
        return LengthHistogram({})
    return LengthHistogram(dict(sorted(Counter(blocks.arrays[2].tolist()).items())))


def dump_blocks(blocks: Iterable[CommonBlock]) -> str:
    return "".join(f"{b.text}\t{b.k1}\t{b.k2}\n" for b in blocks)


def parse_block_dump(text: str) -> list[CommonBlock]:
    """Inverse of :func:`dump_blocks`. Blank lines and ``#`` comments are ignored."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InstanceFormatError(f"line {lineno}: expected 'text k1 k2', got {raw!r}")
        try:
            out.append(CommonBlock(parts[0], int(parts[1]), int(parts[2])))
        except ValueError:
            raise InstanceFormatError(f"line {lineno}: positions must be integers, got {raw!r}") from None
    return out
