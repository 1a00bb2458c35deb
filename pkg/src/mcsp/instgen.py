"""Seeded random generator for related string pairs.

``s1`` takes each symbol independently and uniformly from the alphabet;
``s2`` is a uniformly random permutation of ``s1``. Both steps draw from one
``random.Random(seed)`` stream (Mersenne Twister): ``rng.choice`` per position
for ``s1``, then ``rng.shuffle`` (Fisher-Yates) on the symbols of ``s1``.
"""
from __future__ import annotations

import random
from pathlib import Path
from typing import Sequence

from .core import Instance

DNA = "ACGT"
DEFAULT_SEED = 12345


def generate_instance(n: int, alphabet: Sequence[str] = DNA, seed: int = DEFAULT_SEED) -> Instance:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    symbols = list(dict.fromkeys(alphabet))
    if not symbols:
        raise ValueError("alphabet must be non-empty")
    rng = random.Random(seed)
    s1 = [rng.choice(symbols) for _ in range(n)]
    s2 = list(s1)
    rng.shuffle(s2)
    return Instance("".join(s1), "".join(s2))


def instance_filename(n: int, seed: int) -> str:
    return f"rand_{n}_{seed}.txt"


def write_instance(inst: Instance, directory: str | Path, seed: int) -> Path:
    path = Path(directory) / instance_filename(inst.n, seed)
    inst.write(path)
    return path
