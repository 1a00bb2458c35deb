"""Instances, common blocks and partitions for the minimum common string partition problem.

All positions are 1-based. A block ``(text, k1, k2)`` occupies positions
``k1 .. k1+len-1`` of ``s1`` and ``k2 .. k2+len-1`` of ``s2``.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence


class MCSPError(Exception):
    """Base class for all errors raised by this package."""


class UnrelatedStringsError(MCSPError, ValueError):
    pass


class InstanceFormatError(MCSPError, ValueError):
    pass


class InvalidPartitionError(MCSPError, ValueError):
    pass


def is_related(s1: str, s2: str) -> bool:
    """True iff both strings have the same length and the same symbol counts."""
    return len(s1) == len(s2) and Counter(s1) == Counter(s2)


@dataclass(frozen=True)
class Instance:
    s1: str
    s2: str

    def __post_init__(self):
        if not self.s1 or not self.s2:
            raise InstanceFormatError("input strings must be non-empty")
        if not is_related(self.s1, self.s2):
            raise UnrelatedStringsError(
                f"strings are not related (lengths {len(self.s1)}/{len(self.s2)}, "
                "or differing symbol counts)"
            )

    @property
    def n(self) -> int:
        return len(self.s1)

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(self.s1)

    @classmethod
    def from_text(cls, text: str) -> Instance:
        lines = text.splitlines()
        if lines and lines[-1] == "":
            lines.pop()
        if len(lines) != 2:
            raise InstanceFormatError(f"expected exactly two lines, got {len(lines)}")
        for line in lines:
            if not line:
                raise InstanceFormatError("empty line in instance file")
            if any(ch.isspace() or not ch.isprintable() for ch in line):
                raise InstanceFormatError("instance strings must be printable and contain no whitespace")
        return cls(lines[0], lines[1])

    @classmethod
    def read(cls, path: str | Path) -> Instance:
        return cls.from_text(Path(path).read_text())

    def to_text(self) -> str:
        return f"{self.s1}\n{self.s2}\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())


class CommonBlock(NamedTuple):
    """A substring ``text`` found at ``k1`` in s1 and at ``k2`` in s2 (1-based)."""

    text: str
    k1: int
    k2: int

    @property
    def length(self) -> int:
        return len(self.text)

    @property
    def end1(self) -> int:
        """Last s1 position covered (inclusive)."""
        return self.k1 + len(self.text) - 1

    @property
    def end2(self) -> int:
        return self.k2 + len(self.text) - 1

    def overlaps(self, other: CommonBlock) -> bool:
        """True if the two blocks share a position in s1 or in s2."""
        return (
            self.k1 <= other.end1 and other.k1 <= self.end1
        ) or (self.k2 <= other.end2 and other.k2 <= self.end2)

    def is_block_of(self, inst: Instance) -> bool:
        n, t = inst.n, self.text
        return (
            len(t) >= 1
            and 1 <= self.k1 <= n - len(t) + 1
            and 1 <= self.k2 <= n - len(t) + 1
            and inst.s1[self.k1 - 1:self.k1 - 1 + len(t)] == t
            and inst.s2[self.k2 - 1:self.k2 - 1 + len(t)] == t
        )


def canonical_key(b: CommonBlock) -> tuple[int, int, int]:
    """Sort key: longest first, then by s1 start, then by s2 start."""
    return (-len(b.text), b.k1, b.k2)


@dataclass(frozen=True)
class Partition:
    """A set of pairwise non-overlapping common blocks of one instance.

    ``cover1``/``cover2`` are 0/1 masks over 0-based positions. Use
    :meth:`from_blocks` to build one; it rejects overlaps.
    """

    n: int
    blocks: tuple[CommonBlock, ...]
    cover1: bytes = field(repr=False)
    cover2: bytes = field(repr=False)

    @classmethod
    def from_blocks(cls, inst: Instance, blocks: Iterable[CommonBlock]) -> Partition:
        n = inst.n
        c1, c2 = bytearray(n), bytearray(n)
        chosen = sorted(set(blocks), key=lambda b: (b.k1, b.k2, -b.length))
        for b in chosen:
            if not b.is_block_of(inst):
                raise InvalidPartitionError(f"{tuple(b)} is not a common block of the instance")
            lo1, lo2, ln = b.k1 - 1, b.k2 - 1, b.length
            if c1.find(1, lo1, lo1 + ln) != -1:
                raise InvalidPartitionError(f"{tuple(b)} overlaps another block in s1")
            if c2.find(1, lo2, lo2 + ln) != -1:
                raise InvalidPartitionError(f"{tuple(b)} overlaps another block in s2")
            c1[lo1:lo1 + ln] = b"\x01" * ln
            c2[lo2:lo2 + ln] = b"\x01" * ln
        return cls(n, tuple(chosen), bytes(c1), bytes(c2))

    @classmethod
    def empty(cls, inst: Instance) -> Partition:
        return cls(inst.n, (), bytes(inst.n), bytes(inst.n))

    @property
    def covered_len(self) -> int:
        return sum(b.length for b in self.blocks)

    @property
    def is_complete(self) -> bool:
        return self.covered_len == self.n

    def __len__(self) -> int:
        return len(self.blocks)

    def __contains__(self, b: object) -> bool:
        return b in self.blocks

    def extended(self, inst: Instance, extra: Iterable[CommonBlock]) -> Partition:
        return Partition.from_blocks(inst, [*self.blocks, *extra])

    def substrings(self) -> list[str]:
        return sorted(b.text for b in self.blocks)


class PartitionStatus(enum.Enum):
    COMPLETE = "Complete"
    PARTIAL = "Partial"
    INVALID = "Invalid"


@dataclass(frozen=True)
class Validation:
    status: PartitionStatus
    size: int = 0
    reason: str = ""

    def __bool__(self) -> bool:
        return self.status is not PartitionStatus.INVALID


def check_blocks(inst: Instance, blocks: Sequence[CommonBlock]) -> Validation:
    """Classify a block selection as complete, partial or invalid (with the first violation)."""
    n = inst.n
    c1, c2 = bytearray(n), bytearray(n)
    total = 0
    for b in blocks:
        if not b.is_block_of(inst):
            return Validation(PartitionStatus.INVALID, len(blocks), f"{tuple(b)} is not a common block")
        lo1, lo2, ln = b.k1 - 1, b.k2 - 1, b.length
        bad1 = c1.find(1, lo1, lo1 + ln) != -1
        bad2 = c2.find(1, lo2, lo2 + ln) != -1
        if bad1 or bad2:
            where = " and ".join(s for s, bad in (("s1", bad1), ("s2", bad2)) if bad)
            return Validation(PartitionStatus.INVALID, len(blocks), f"overlap in {where} at block {tuple(b)}")
        c1[lo1:lo1 + ln] = b"\x01" * ln
        c2[lo2:lo2 + ln] = b"\x01" * ln
        total += ln
    if total == n:
        return Validation(PartitionStatus.COMPLETE, len(blocks))
    return Validation(PartitionStatus.PARTIAL, len(blocks))


def validate_partition(inst: Instance, blocks: Sequence[CommonBlock], sel: Iterable[int]) -> Validation:
    """Validate the selection ``sel`` of 1-based indices into ``blocks``.

    Raises IndexError for an index outside ``1..len(blocks)``.
    """
    chosen = []
    for i in sorted(set(sel)):
        if not 1 <= i <= len(blocks):
            raise IndexError(f"block index {i} out of range 1..{len(blocks)}")
        chosen.append(blocks[i - 1])
    return check_blocks(inst, chosen)


def singleton_partition(inst: Instance) -> Partition:
    """Pair every s1 letter with the leftmost unused equal letter of s2."""
    free: dict[str, list[int]] = {}
    for j in range(inst.n, 0, -1):
        free.setdefault(inst.s2[j - 1], []).append(j)
    blocks = [CommonBlock(ch, i, free[ch].pop()) for i, ch in enumerate(inst.s1, start=1)]
    return Partition.from_blocks(inst, blocks)
