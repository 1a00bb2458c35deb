"""Two-phase heuristic.

Phase 1 packs as much of both strings as possible with blocks of length at
least ``l`` (max-coverage model); phase 2 completes that partial solution
optimally using only the blocks still compatible with it. ``sweep_l`` runs
the pair for every ``l`` in ``[2, l_max]`` and keeps the best.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .blocks import BlockSet, compatible_blocks, enumerate_blocks, filter_min_length, l_max
from .core import Instance, Partition, singleton_partition
from .greedy import greedy_select
from .model import default_weight_constant
from .solver import SolveResult, SolverConfig, SolveStatus, solve_max_coverage, solve_min_partition

log = logging.getLogger(__name__)

DEFAULT_PER_SOLVE = SolverConfig(stop_after_first_feasible_at_s=50.0)
LARGE_INSTANCE_L = 5


@dataclass(frozen=True)
class HeuristicConfig:
    l: int | None = None  # None: sweep over [2, l_max]
    per_solve: SolverConfig = DEFAULT_PER_SOLVE
    workers: int = 1


@dataclass
class TwoPhaseResult:
    l: int
    phase1: SolveResult
    phase2: SolveResult
    phase1_blockset_size: int
    phase2_blockset_size: int
    time_s: float

    @property
    def partition(self) -> Partition:
        return self.phase2.partition

    @property
    def objective(self) -> int:
        return self.phase2.objective

    def to_record(self) -> dict:
        return {
            "l": self.l,
            "phase1_blockset_size": self.phase1_blockset_size,
            "phase2_blockset_size": self.phase2_blockset_size,
            "phase1_proven_optimal": self.phase1.proven_optimal,
            "phase2_proven_optimal": self.phase2.proven_optimal,
            "phase1_covered_len": self.phase1.partition.covered_len,
            "objective": self.objective,
            "time_s": round(self.time_s, 6),
        }


def _check_l(blocks: BlockSet, l: int) -> None:
    top = l_max(blocks)
    if not 2 <= l <= top:
        raise ValueError(f"l must lie in [2, l_max={top}], got {l}")


def run_phase1(inst: Instance, blocks: BlockSet, l: int, cfg: SolverConfig = DEFAULT_PER_SOLVE) -> SolveResult:
    """Solve the max-coverage model over blocks of length >= l; ``.partition`` is S_ph1."""
    _check_l(blocks, l)
    long_blocks = filter_min_length(blocks, l)
    res = solve_max_coverage(inst, long_blocks, default_weight_constant(inst), cfg)
    if not res.partition.blocks:
        log.warning("phase 1 (l=%d) returned an empty selection; phase 2 degenerates to the exact model", l)
    return res


def phase2_blocks(blocks: BlockSet, s_ph1: Partition) -> BlockSet:
    """S_ph1 together with every block compatible with it, in canonical order."""
    ext = compatible_blocks(blocks, s_ph1)
    if not s_ph1.blocks:
        return ext
    forced = [(blocks.id_of[b], b) for b in s_ph1.blocks]
    merged = sorted([*zip(ext.ids, ext.blocks), *forced])
    return BlockSet(tuple(b for _, b in merged), tuple(i for i, _ in merged))


def run_phase2(inst: Instance, blocks: BlockSet, s_ph1: Partition, cfg: SolverConfig = DEFAULT_PER_SOLVE) -> SolveResult:
    """Best completion of ``s_ph1``; ``.partition`` is complete and contains S_ph1."""
    b_ph2 = phase2_blocks(blocks, s_ph1)
    res = solve_min_partition(inst, b_ph2, s_ph1.blocks, cfg)
    if res.partition is None:
        # Interrupted before the first dive finished. The uncovered parts of
        # s1 and s2 hold the same letters, so a greedy fill always completes.
        log.warning("phase 2 stopped without a solution; completing S_ph1 greedily")
        rest = greedy_select(inst.n, compatible_blocks(blocks, s_ph1), s_ph1.cover1, s_ph1.cover2)
        part = s_ph1.extended(inst, rest)
        res = replace(res, status=SolveStatus.FEASIBLE_TIME_LIMIT, partition=part, objective=len(part),
                      time_first_s=res.time_total_s, time_best_s=res.time_total_s)
    res.extra["phase2_blockset_size"] = len(b_ph2)
    return res


def two_phase(inst: Instance, l: int, cfg: HeuristicConfig = HeuristicConfig(),
              blocks: BlockSet | None = None) -> TwoPhaseResult:
    t0 = time.perf_counter()
    if blocks is None:
        blocks = enumerate_blocks(inst)
    p1 = run_phase1(inst, blocks, l, cfg.per_solve)
    p2 = run_phase2(inst, blocks, p1.partition, cfg.per_solve)
    return TwoPhaseResult(
        l, p1, p2, p1.block_count, p2.extra["phase2_blockset_size"], time.perf_counter() - t0
    )


@dataclass
class SweepReport:
    entries: list[TwoPhaseResult]
    total_time_s: float
    block_count_total: int
    fallback: Partition | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def best(self) -> TwoPhaseResult | None:
        if not self.entries:
            return None
        return min(self.entries, key=lambda e: (e.objective, e.l))

    @property
    def partition(self) -> Partition:
        best = self.best
        return self.fallback if best is None else best.partition

    @property
    def objective(self) -> int:
        return len(self.partition)

    def to_dict(self) -> dict:
        best = self.best
        return {
            "entries": [e.to_record() for e in self.entries],
            "best_l": None if best is None else best.l,
            "objective": self.objective,
            "total_time_s": self.total_time_s,
            "block_count_total": self.block_count_total,
            "warnings": self.warnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        fields = ["l", "phase1_blockset_size", "phase2_blockset_size", "phase1_proven_optimal",
                  "phase2_proven_optimal", "phase1_covered_len", "objective", "time_s"]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for e in self.entries:
            w.writerow(e.to_record())
        return buf.getvalue()


def _two_phase_job(args) -> TwoPhaseResult:
    inst, l, cfg, blocks = args
    return two_phase(inst, l, cfg, blocks)


def sweep_l(inst: Instance, cfg: HeuristicConfig = HeuristicConfig(), blocks: BlockSet | None = None) -> SweepReport:
    """Run the two-phase heuristic for every l in [2, l_max] (or only ``cfg.l`` if set)."""
    t0 = time.perf_counter()
    if blocks is None:
        blocks = enumerate_blocks(inst)
    top = l_max(blocks)
    ls = [cfg.l] if cfg.l is not None else list(range(2, top + 1))
    if not ls:
        msg = f"l_max={top} < 2: no l to sweep, returning the singleton partition"
        log.warning(msg)
        return SweepReport([], time.perf_counter() - t0, len(blocks), singleton_partition(inst), [msg])
    jobs = [(inst, l, cfg, blocks) for l in ls]
    if cfg.workers > 1 and len(ls) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            entries = list(pool.map(_two_phase_job, jobs))
    else:
        entries = [_two_phase_job(j) for j in jobs]
    return SweepReport(entries, time.perf_counter() - t0, len(blocks))
