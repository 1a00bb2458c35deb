"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the PASS/FAIL lines
bypass output capture) or ``python tests/test_acceptance.py``.
"""
import random
import statistics
import time

import pytest

from conftest import EX_LISTED, EX_M1, EX_M2
from oracles import best_packing, compatible
from mcsp.blocks import enumerate_blocks, filter_min_length, l_max, length_histogram
from mcsp.core import Instance, Partition, PartitionStatus, canonical_key, check_blocks
from mcsp.greedy import greedy_partition
from mcsp.heuristic import HeuristicConfig, run_phase2, sweep_l, two_phase
from mcsp.instgen import DEFAULT_SEED, DNA, generate_instance
from mcsp.model import build_ilp_orig
from mcsp.solver import SolverConfig, SolveStatus, brute_force_optimal, solve_max_coverage, solve_min_partition


@pytest.fixture
def verdict(capsys):
    def report(criterion: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        assert ok, detail
    return report


def test_criterion_1_golden_example(verdict):
    t0 = time.perf_counter()
    inst = Instance("AGACTG", "ACTAGG")
    B = enumerate_blocks(inst)
    blocks_ok = list(B) == sorted(EX_LISTED, key=canonical_key) and len(B) == 14
    model = build_ilp_orig(inst, B)
    rows = {c.name: {v for v, _ in c.terms} for c in model.constraints}
    matrix_ok = all(
        rows[f"{tag}_{j + 1}"] == {f"x{B.id_of[blk]}" for blk, bits in zip(EX_LISTED, mat) if bits[j] == "1"}
        for tag, mat in (("s1", EX_M1), ("s2", EX_M2)) for j in range(6)
    )
    exact = solve_min_partition(inst, B)
    exact_ok = (exact.status is SolveStatus.PROVEN_OPTIMAL and exact.objective == 3
                and check_blocks(inst, exact.partition.blocks).status is PartitionStatus.COMPLETE)
    greedy = len(greedy_partition(inst, B))
    sweep = sweep_l(inst, blocks=B).objective
    elapsed = time.perf_counter() - t0
    ok = blocks_ok and matrix_ok and exact_ok and greedy == 3 and sweep == 3 and elapsed < 1.0
    verdict("1", ok, f"blocks={blocks_ok} M1/M2={matrix_ok} exact={exact.objective} greedy={greedy} "
                     f"sweep={sweep} time={elapsed:.3f}s (<1s)")


def test_criterion_2_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    mismatches, total = [], 0
    for n in (6, 8, 10, 12):
        for alphabet in ("AB", "ACGT"):
            for seed in range(100):
                inst = generate_instance(n, alphabet, seed)
                r = solve_min_partition(inst, enumerate_blocks(inst))
                total += 1
                if r.status is not SolveStatus.PROVEN_OPTIMAL or r.objective != brute_force_optimal(inst):
                    mismatches.append((n, alphabet, seed))
    elapsed = time.perf_counter() - t0
    verdict("2", not mismatches and elapsed < 300,
            f"{total - len(mismatches)}/{total} proven optimal and equal to brute force, "
            f"time={elapsed:.1f}s (<300s)")


def test_criterion_3_block_set_scale(verdict):
    t0 = time.perf_counter()
    m = len(enumerate_blocks(generate_instance(1000, DNA, DEFAULT_SEED)))
    elapsed = time.perf_counter() - t0
    verdict("3", 317_000 <= m <= 351_000 and elapsed < 60,
            f"|B|={m} in [317000, 351000], time={elapsed:.2f}s (<60s)")


def test_criterion_4_length_one_fraction(verdict):
    fracs = [length_histogram(enumerate_blocks(generate_instance(400, DNA, seed))).fraction(1)
             for seed in range(10)]
    mean = statistics.mean(fracs)
    verdict("4", 0.70 <= mean <= 0.80, f"mean length-1 fraction {mean:.4f} in [0.70, 0.80]")


def test_criterion_5_block_reduction(verdict):
    inst = generate_instance(800, DNA, DEFAULT_SEED)
    B = enumerate_blocks(inst)
    r = two_phase(inst, 5, HeuristicConfig(l=5), B)
    ratio = (r.phase1_blockset_size + r.phase2_blockset_size) / len(B)
    ok = ratio <= 0.10 and r.partition.is_complete
    verdict("5", ok, f"(|B>=5|={r.phase1_blockset_size} + |B_ph2|={r.phase2_blockset_size}) / "
                     f"|B|={len(B)} = {ratio:.4f} (<=0.10), objective {r.objective}")


def test_criterion_6_phase1_dominance(verdict):
    rng = random.Random(6)
    checked, failures, seed = 0, [], 0
    while checked < 50:
        seed += 1
        inst = generate_instance(rng.randint(4, 10), rng.choice(["AB", "ACGT"]), seed)
        B = enumerate_blocks(inst)
        if l_max(B) < 2:
            continue
        L = filter_min_length(B, 2)
        r = solve_max_coverage(inst, L)
        checked += 1
        if not r.proven_optimal or (r.partition.covered_len, len(r.partition)) != best_packing(L):
            failures.append(seed)
    verdict("6", not failures, f"{checked - len(failures)}/{checked} instances: max coverage, then "
                               "fewest blocks, equal to the exhaustive subset oracle")


def test_criterion_7_phase2_feasibility(verdict):
    rng = random.Random(7)
    failures = 0
    for trial in range(1000):
        inst = generate_instance(rng.randint(1, 40), rng.choice(["AB", "ACGT", "ABCDEFGH"]), trial)
        B = enumerate_blocks(inst)
        pool = list(B)
        rng.shuffle(pool)
        forced = []
        for blk in pool[: rng.randint(0, 12)]:
            if compatible([blk], forced):
                forced.append(blk)
        s_ph1 = Partition.from_blocks(inst, forced)
        part = run_phase2(inst, B, s_ph1, SolverConfig(stop_after_first_feasible_at_s=1.0)).partition
        if part is None or not part.is_complete or not set(forced) <= set(part.blocks):
            failures += 1
    verdict("7", failures == 0, f"{1000 - failures}/1000 phase-2 results complete and containing S_ph1")


def test_criterion_8_anytime_limits(verdict):
    inst = generate_instance(600, DNA, DEFAULT_SEED)
    r = solve_min_partition(inst, enumerate_blocks(inst), cfg=SolverConfig(time_limit_s=5.0))
    valid = r.partition is not None and check_blocks(inst, r.partition.blocks).status is PartitionStatus.COMPLETE
    ok = r.status is SolveStatus.FEASIBLE_TIME_LIMIT and valid and r.bound <= r.objective
    verdict("8", ok, f"status={r.status.value} valid_incumbent={valid} bound={r.bound} <= "
                     f"objective={r.objective}, time={r.time_total_s:.2f}s")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
