"""Time-limited branch and bound for the two model shapes, and a brute-force oracle.

Both searches are depth first and branch on the leftmost undecided position
of ``s1``. Coverage is tracked with 0/1 ``bytearray`` masks so the overlap
test for a candidate block is a single ``find`` call.

Before the tree search, an incumbent is improved by window re-optimisation:
the selected blocks touching a window of ``s1`` (or ``s2``) are removed and
the hole is re-solved exactly by the same search under a node budget. The
tree search then starts from that incumbent, so it only prunes better.
The max-coverage solve is additionally seeded by a Lagrangian relaxation of
its ``s2`` rows, which also supplies an upper bound.
"""
from __future__ import annotations

import enum
import math
import time
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .core import CommonBlock, Instance, MCSPError, Partition
from .model import MAXIMIZE, MINIMIZE, default_weight_constant

BRUTE_FORCE_MAX_N = 14


class InfeasibleError(MCSPError):
    pass


class SolveStatus(str, enum.Enum):
    PROVEN_OPTIMAL = "ProvenOptimal"
    FEASIBLE_TIME_LIMIT = "FeasibleTimeLimit"
    NO_SOLUTION_TIME_LIMIT = "NoSolutionTimeLimit"


@dataclass(frozen=True)
class SolverConfig:
    """Stopping rules and search options for a single solve.

    The search stops when ``time_limit_s`` has elapsed, or once
    ``stop_after_first_feasible_at_s`` has elapsed *and* an incumbent exists.
    ``node_limit`` caps the tree search independently of the machine.
    ``improve`` enables the primal heuristics: window re-optimisation of the
    incumbent (``window`` positions per hole, ``window_nodes`` nodes per
    re-solve) and, for max coverage, ``lagrangian_iterations`` subgradient
    steps.
    Nothing in the search is randomised; ``deterministic`` is only reported.
    """

    time_limit_s: float | None = None
    stop_after_first_feasible_at_s: float | None = None
    node_limit: int | None = None
    improve: bool = True
    window: int = 24
    window_nodes: int = 400
    lagrangian_iterations: int = 300
    deterministic: bool = True

    def __post_init__(self):
        for name in ("time_limit_s", "stop_after_first_feasible_at_s", "node_limit"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative, got {v}")
        if self.window < 1 or self.window_nodes < 1:
            raise ValueError("window and window_nodes must be positive")
        if self.lagrangian_iterations < 0:
            raise ValueError("lagrangian_iterations must be non-negative")

    def to_dict(self) -> dict:
        return {
            "time_limit_s": self.time_limit_s,
            "stop_after_first_feasible_at_s": self.stop_after_first_feasible_at_s,
            "node_limit": self.node_limit,
            "improve": self.improve,
            "deterministic": self.deterministic,
        }


@dataclass
class SolveResult:
    status: SolveStatus
    sense: str
    partition: Partition | None
    objective: int | None
    bound: float
    time_first_s: float | None
    time_best_s: float | None
    time_total_s: float
    nodes: int = 0
    block_count: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def gap(self) -> float | None:
        """``|incumbent - bound| / max(|incumbent|, 1)``; None without an incumbent."""
        if self.objective is None or math.isinf(self.bound):
            return None
        if self.status is SolveStatus.PROVEN_OPTIMAL:
            return 0.0
        return abs(self.objective - self.bound) / max(abs(self.objective), 1)

    @property
    def proven_optimal(self) -> bool:
        return self.status is SolveStatus.PROVEN_OPTIMAL

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "sense": self.sense,
            "objective": self.objective,
            "bound": None if math.isinf(self.bound) else self.bound,
            "gap": self.gap,
            "time_first_s": self.time_first_s,
            "time_best_s": self.time_best_s,
            "time_total_s": self.time_total_s,
            "nodes": self.nodes,
            "block_count_total": self.block_count,
            "blocks": [] if self.partition is None else [
                {"text": b.text, "k1": b.k1, "k2": b.k2} for b in self.partition.blocks
            ],
        }


class _Clock:
    """Shared deadline plus a node counter; ``sub`` gives a budgeted child."""

    def __init__(self, cfg: SolverConfig, t0: float | None = None, node_limit: int | None = None):
        self.cfg = cfg
        self.t0 = time.perf_counter() if t0 is None else t0
        self.nodes = 0
        self.node_limit = cfg.node_limit if node_limit is None else node_limit
        self.parent: _Clock | None = None

    def sub(self, nodes: int) -> _Clock:
        child = _Clock(self.cfg, self.t0, nodes)
        child.parent = self
        return child

    def elapsed(self) -> float:
        return time.perf_counter() - self.t0

    def tick(self) -> None:
        self.nodes += 1
        if self.parent is not None:
            self.parent.nodes += 1

    def out_of_time(self, have_incumbent: bool) -> bool:
        cfg = self.cfg
        if cfg.time_limit_s is None and cfg.stop_after_first_feasible_at_s is None:
            return False
        t = self.elapsed()
        if cfg.time_limit_s is not None and t >= cfg.time_limit_s:
            return True
        return (
            have_incumbent
            and cfg.stop_after_first_feasible_at_s is not None
            and t >= cfg.stop_after_first_feasible_at_s
        )

    def should_stop(self, have_incumbent: bool) -> bool:
        if self.node_limit is not None and self.nodes >= self.node_limit:
            return True
        return self.out_of_time(have_incumbent)


class _Incumbent:
    def __init__(self, clock: _Clock, blocks=None, value=None):
        self.clock = clock
        self.blocks: list[CommonBlock] | None = None if blocks is None else list(blocks)
        self.value = value
        self.t_first = self.t_best = None
        if blocks is not None:
            self.t_first = self.t_best = clock.elapsed()

    def update(self, blocks, value) -> None:
        self.blocks, self.value = list(blocks), value
        self.t_best = self.clock.elapsed()
        if self.t_first is None:
            self.t_first = self.t_best


def _by_start(n: int, blocks: Iterable[CommonBlock], attr: str = "k1") -> list[list[CommonBlock]]:
    out: list[list[CommonBlock]] = [[] for _ in range(n)]
    for b in blocks:
        out[getattr(b, attr) - 1].append(b)
    for lst in out:
        lst.sort(key=lambda b: (-len(b.text), b.k2, b.k1))
    return out


def _max_len_from(n: int, blocks: Iterable[CommonBlock], attr: str) -> list[int]:
    out = [0] * n
    for b in blocks:
        k = getattr(b, attr) - 1
        if len(b.text) > out[k]:
            out[k] = len(b.text)
    return out


def _set(cover: bytearray, lo: int, ln: int, val: bytes) -> None:
    cover[lo:lo + ln] = val * ln


def _covers(n: int, blocks: Iterable[CommonBlock]) -> tuple[bytearray, bytearray]:
    c1, c2 = bytearray(n), bytearray(n)
    for b in blocks:
        _set(c1, b.k1 - 1, len(b.text), b"\x01")
        _set(c2, b.k2 - 1, len(b.text), b"\x01")
    return c1, c2


def _fits(b: CommonBlock, c1: bytearray, c2: bytearray) -> bool:
    ln = len(b.text)
    return c1.find(1, b.k1 - 1, b.k1 - 1 + ln) == -1 and c2.find(1, b.k2 - 1, b.k2 - 1 + ln) == -1


def _window_holes(n: int, window: int):
    """(string, lo, hi) windows, alternating s1 and s2, half-overlapping."""
    step = max(1, window // 2)
    for a in range(0, n, step):
        yield 1, a, min(n, a + window)
        yield 2, a, min(n, a + window)


def _hole(n: int, current: list[CommonBlock], side: int, lo: int, hi: int, keep_always=frozenset()):
    """Split ``current`` into kept blocks and blocks removed by the window."""
    keep, removed = [], []
    for b in current:
        start, end = (b.k1 - 1, b.end1) if side == 1 else (b.k2 - 1, b.end2)
        if start < hi and end > lo and b not in keep_always:
            removed.append(b)
        else:
            keep.append(b)
    return keep, removed


def _candidates(by1, by2, c1, c2, removed, side, lo, hi) -> list[CommonBlock]:
    """Blocks that fit the hole: start inside the freed span of one string and fit both masks."""
    idx = by1 if side == 1 else by2
    for b in removed:
        start, end = (b.k1 - 1, b.end1) if side == 1 else (b.k2 - 1, b.end2)
        lo, hi = min(lo, start), max(hi, end)
    return [b for p in range(lo, hi) for b in idx[p] if _fits(b, c1, c2)]


# -- minimum partition ---------------------------------------------------------

def _tiling_bound(cover: bytearray, maxlen: list[int]) -> float:
    """Fewest blocks that can tile every uncovered run, ignoring the other string.

    From position ``q`` a block may end anywhere in ``q+1 .. q+maxlen[q]``,
    so each run is a minimum-jumps problem solved greedily. Returns ``inf``
    when some run cannot be tiled at all.
    """
    n = len(cover)
    total = 0
    i = cover.find(0)
    while i != -1:
        j = cover.find(1, i)
        if j == -1:
            j = n
        jumps, cur_end, far = 0, i, i
        for q in range(i, j):
            reach = q + maxlen[q]
            if reach > far:
                far = reach
            if q == cur_end:
                if far <= q:
                    return math.inf
                jumps += 1
                cur_end = far
                if cur_end >= j:
                    break
        total += jumps
        i = cover.find(0, j) if j < n else -1
    return total


def _min_search(n: int, blocks: Sequence[CommonBlock], cover1: bytearray, cover2: bytearray,
                chosen: list[CommonBlock], inc: _Incumbent, clock: _Clock,
                first_only: bool = False) -> tuple[bool, float]:
    """Depth-first search completing ``chosen``; returns (interrupted, bound)."""
    covered = n - cover1.count(0)
    by_start = _by_start(n, blocks)
    maxlen1 = _max_len_from(n, blocks, "k1")
    maxlen2 = _max_len_from(n, blocks, "k2")
    longest = max(maxlen1, default=0)
    best_val = math.inf if inc.value is None else inc.value

    def lower_bound() -> float:
        count = len(chosen)
        rest = n - covered
        if rest == 0:
            return count
        if not longest:
            return math.inf
        simple = count - (-rest // longest)
        return max(simple, count + _tiling_bound(cover1, maxlen1), count + _tiling_bound(cover2, maxlen2))

    def frame(p: int, lb: float) -> list:
        end = cover1.find(1, p)
        # [position, candidates, next index, placed block, lower bound, free run in s1]
        return [p, by_start[p], 0, None, lb, (n if end == -1 else end) - p]

    if covered == n:
        if len(chosen) < best_val:
            inc.update(chosen, len(chosen))
        return False, len(chosen)
    root_lb = lower_bound()
    if root_lb >= best_val:
        return False, best_val
    stack = [frame(cover1.find(0), root_lb)]
    while stack:
        if clock.should_stop(inc.value is not None):
            return True, min([best_val, *(f[4] for f in stack)])
        fr = stack[-1]
        placed = fr[3]
        if placed is not None:
            ln = len(placed.text)
            _set(cover1, placed.k1 - 1, ln, b"\x00")
            _set(cover2, placed.k2 - 1, ln, b"\x00")
            chosen.pop()
            covered -= ln
            fr[3] = None
        if fr[4] >= best_val:
            stack.pop()
            continue
        cands, i, run = fr[1], fr[2], fr[5]
        nxt = None
        while i < len(cands):
            b = cands[i]
            i += 1
            ln = len(b.text)
            if ln <= run and cover2.find(1, b.k2 - 1, b.k2 - 1 + ln) == -1:
                nxt = b
                break
        fr[2] = i
        if nxt is None:
            stack.pop()
            continue

        clock.tick()
        ln = len(nxt.text)
        _set(cover1, nxt.k1 - 1, ln, b"\x01")
        _set(cover2, nxt.k2 - 1, ln, b"\x01")
        chosen.append(nxt)
        covered += ln
        fr[3] = nxt
        if covered == n:
            if len(chosen) < best_val:
                best_val = len(chosen)
                inc.update(chosen, best_val)
                if first_only:  # leaves the masks dirty; callers pass copies
                    return True, min(f[4] for f in stack)
            continue
        lb = lower_bound()
        if lb >= best_val:
            continue
        stack.append(frame(cover1.find(0, fr[0]), lb))
    return False, best_val


def _improve_min(n: int, blocks: Sequence[CommonBlock], forced: frozenset, inc: _Incumbent,
                 clock: _Clock, cfg: SolverConfig) -> None:
    by1 = _by_start(n, blocks, "k1")
    by2 = _by_start(n, blocks, "k2")
    improved = True
    while improved:
        improved = False
        for side, lo, hi in _window_holes(n, cfg.window):
            if clock.out_of_time(True):
                return
            keep, removed = _hole(n, inc.blocks, side, lo, hi, forced)
            if len(removed) < 2:
                continue
            c1, c2 = _covers(n, keep)
            cands = _candidates(by1, by2, c1, c2, removed, side, lo, hi)
            before = inc.value
            _min_search(n, cands, c1, c2, keep, inc, clock.sub(cfg.window_nodes))
            if inc.value < before:
                improved = True


def solve_min_partition(
    inst: Instance,
    blocks: Sequence[CommonBlock],
    forced: Iterable[CommonBlock] = (),
    cfg: SolverConfig = SolverConfig(),
    initial: Partition | None = None,
) -> SolveResult:
    """Minimise the number of blocks in a complete partition that contains ``forced``.

    Branches on the leftmost uncovered ``s1`` position over the blocks
    starting there (longest first, then ascending k2). The lower bound is the
    number of selected blocks plus the largest of ``ceil(uncovered / longest
    block)`` and two tiling relaxations, one per string.
    """
    clock = _Clock(cfg)
    n = inst.n
    base = Partition.from_blocks(inst, forced)
    inc = _Incumbent(clock)
    if initial is not None:
        if not initial.is_complete:
            raise ValueError("initial solution must be a complete partition")
        if not set(base.blocks) <= set(initial.blocks):
            raise ValueError("initial solution must contain every forced block")
        inc.update(initial.blocks, len(initial.blocks))

    def run(first_only: bool) -> tuple[bool, float]:
        c1, c2 = bytearray(base.cover1), bytearray(base.cover2)
        return _min_search(n, blocks, c1, c2, list(base.blocks), inc, clock, first_only)

    interrupted, bound = False, math.inf
    if inc.value is None:
        interrupted, bound = run(first_only=True)
        if not interrupted and inc.value is None:
            raise InfeasibleError("no complete partition containing the forced blocks exists over this block set")
    if cfg.improve and inc.value is not None and not clock.should_stop(True):
        _improve_min(n, blocks, frozenset(base.blocks), inc, clock, cfg)
    if not clock.should_stop(inc.value is not None):
        interrupted, bound = run(first_only=False)
    else:
        interrupted = True
        bound = min(bound, math.inf if inc.value is None else inc.value)

    if inc.value is None:
        if not interrupted:
            raise InfeasibleError("search exhausted without a complete partition")
        status = SolveStatus.NO_SOLUTION_TIME_LIMIT
    elif not interrupted or bound >= inc.value:
        status, bound = SolveStatus.PROVEN_OPTIMAL, inc.value
    else:
        status = SolveStatus.FEASIBLE_TIME_LIMIT
    return SolveResult(
        status, MINIMIZE, None if inc.blocks is None else Partition.from_blocks(inst, inc.blocks),
        inc.value, bound, inc.t_first, inc.t_best, clock.elapsed(), clock.nodes, len(blocks),
    )


# -- maximum coverage ----------------------------------------------------------

def _interval_packing(items: list[tuple[int, int, int]]) -> int:
    """Max total weight of pairwise disjoint intervals ``(start, length, weight)``."""
    items.sort()
    starts = [it[0] for it in items]
    best = [0] * (len(items) + 1)
    for i in range(len(items) - 1, -1, -1):
        s, ln, w = items[i]
        take = w + best[bisect_left(starts, s + ln, i + 1)]
        best[i] = take if take > best[i + 1] else best[i + 1]
    return best[0]


def _pack_bound(blocks: Sequence[CommonBlock], C: int, q: int, cover2: bytearray) -> int:
    """Best extra weight from blocks starting at s1 position >= q that fit ``cover2``.

    The smaller of two relaxations: disjointness enforced in s1 only, or in
    s2 only. ``blocks`` is sorted by k1.
    """
    s1_items, s2_items = [], []
    for b in blocks[bisect_left(blocks, q + 1, key=_k1):]:
        ln = len(b.text)
        if cover2.find(1, b.k2 - 1, b.k2 - 1 + ln) == -1:
            w = C * ln - 1
            s1_items.append((b.k1, ln, w))
            s2_items.append((b.k2, ln, w))
    if not s1_items:
        return 0
    return min(_interval_packing(s1_items), _interval_packing(s2_items))


def _k1(b: CommonBlock) -> int:
    return b.k1


def _pack_search(n: int, blocks: Sequence[CommonBlock], C: int, cover1: bytearray, cover2: bytearray,
                 chosen: list[CommonBlock], weight: int, inc: _Incumbent, clock: _Clock) -> tuple[bool, float]:
    """Depth-first max-coverage search over ``blocks``, all of which fit the given masks.

    Returns (interrupted, bound). Extends ``chosen`` (total ``weight``).
    """
    by_start = _by_start(n, blocks)
    ordered = sorted(blocks, key=_k1)
    reach1 = _covers(n, blocks)[0]
    p = reach1.find(1)
    if p == -1:
        return False, inc.value
    root_ub = weight + _pack_bound(ordered, C, p, cover2)
    if root_ub <= inc.value:
        return False, inc.value

    # frame: [p, candidates, next index, applied choice, ub, weight]
    # applied: None = nothing yet; False = position p left uncovered
    stack = [[p, by_start[p], 0, None, root_ub, weight]]
    while stack:
        if clock.should_stop(True):
            return True, max([inc.value, *(f[4] for f in stack)])
        fr = stack[-1]
        applied = fr[3]
        if applied:
            ln = len(applied.text)
            _set(cover1, applied.k1 - 1, ln, b"\x00")
            _set(cover2, applied.k2 - 1, ln, b"\x00")
            chosen.pop()
        fr[3] = None
        if applied is False or fr[4] <= inc.value:
            stack.pop()
            continue
        p, cands, i = fr[0], fr[1], fr[2]
        nxt = None
        while i < len(cands):
            b = cands[i]
            i += 1
            if cover2.find(1, b.k2 - 1, b.k2 - 1 + len(b.text)) == -1:
                nxt = b
                break
        fr[2] = i
        clock.tick()
        if nxt is not None:
            ln = len(nxt.text)
            _set(cover1, p, ln, b"\x01")
            _set(cover2, nxt.k2 - 1, ln, b"\x01")
            chosen.append(nxt)
            fr[3] = nxt
            q = p + ln
            w = fr[5] + C * ln - 1
            if w > inc.value:
                inc.update(chosen, w)
        else:
            fr[3] = False
            q = p + 1
            w = fr[5]
        # positions no candidate can cover are decided at once (left uncovered)
        q = reach1.find(1, q) if q < n else -1
        if q == -1:
            continue
        ub = w + _pack_bound(ordered, C, q, cover2)
        if ub <= inc.value:
            continue
        stack.append([q, by_start[q], 0, None, ub, w])
    return False, inc.value


def _improve_pack(n: int, blocks: Sequence[CommonBlock], C: int, inc: _Incumbent,
                  clock: _Clock, cfg: SolverConfig) -> None:
    by1 = _by_start(n, blocks, "k1")
    by2 = _by_start(n, blocks, "k2")
    improved = True
    while improved:
        improved = False
        for side, lo, hi in _window_holes(n, cfg.window):
            if clock.out_of_time(True):
                return
            keep, removed = _hole(n, inc.blocks, side, lo, hi)
            c1, c2 = _covers(n, keep)
            cands = _candidates(by1, by2, c1, c2, removed, side, lo, hi)
            if not cands:
                continue
            before = inc.value
            w = sum(C * len(b.text) - 1 for b in keep)
            _pack_search(n, cands, C, c1, c2, keep, w, inc, clock.sub(cfg.window_nodes))
            if inc.value > before:
                improved = True


def _lagrangian_pack(n: int, blocks: Sequence[CommonBlock], C: int, inc: _Incumbent,
                     clock: _Clock, max_iter: int) -> float:
    """Subgradient ascent on the s2 rows of the max-coverage model.

    With the s2 rows priced out by multipliers, what remains is a weighted
    interval-scheduling problem on s1, solved exactly by a right-to-left DP.
    Each relaxed solution is repaired into a feasible packing (its blocks by
    reduced weight, then any positive-reduced-weight block that still fits).
    Returns the best upper bound found.
    """
    m = len(blocks)
    k1 = np.fromiter((b.k1 - 1 for b in blocks), dtype=np.int64, count=m)
    k2 = np.fromiter((b.k2 - 1 for b in blocks), dtype=np.int64, count=m)
    ln = np.fromiter((len(b.text) for b in blocks), dtype=np.int64, count=m)
    w = (C * ln - 1).astype(float)
    lengths = np.unique(ln).tolist()
    groups = [np.flatnonzero(ln == L) for L in lengths]

    lam = np.zeros(n)
    best_ub, mu, stall = math.inf, 2.0, 0
    for _ in range(max_iter):
        if clock.out_of_time(True) or mu < 1e-3:
            break
        cs = np.concatenate(([0.0], np.cumsum(lam)))
        r = w - (cs[k2 + ln] - cs[k2])

        # best block of each length starting at each s1 position
        top_r, top_i = [], []
        for g in groups:
            rg, qg = r[g], k1[g]
            order = np.lexsort((rg, qg))
            qo = qg[order]
            last = np.append(qo[1:] != qo[:-1], True)
            br = np.full(n, -math.inf)
            bi = np.full(n, -1, dtype=np.int64)
            br[qo[last]] = rg[order][last]
            bi[qo[last]] = g[order][last]
            top_r.append(br.tolist())
            top_i.append(bi.tolist())
        f = [0.0] * (n + 1)
        pick = [-1] * n
        for q in range(n - 1, -1, -1):
            best, choice = f[q + 1], -1
            for br, bi, L in zip(top_r, top_i, lengths):
                v = br[q]
                if v > 0:
                    v += f[q + L]
                    if v > best:
                        best, choice = v, bi[q]
            f[q] = best
            pick[q] = choice
        relaxed, q = [], 0
        while q < n:
            i = pick[q]
            if i >= 0:
                relaxed.append(i)
                q += int(ln[i])
            else:
                q += 1

        ub = f[0] + lam.sum()
        if ub < best_ub - 1e-9:
            best_ub, stall = ub, 0
        else:
            stall += 1
            if stall >= 15:
                mu, stall = mu / 2, 0

        c1, c2 = bytearray(n), bytearray(n)
        sel, total = [], 0
        fill = np.flatnonzero(r > 0)
        fill = fill[np.lexsort((-r[fill], -ln[fill]))]
        for i in [*sorted(relaxed, key=lambda i: -r[i]), *fill.tolist()]:
            b = blocks[i]
            if _fits(b, c1, c2):
                _set(c1, b.k1 - 1, len(b.text), b"\x01")
                _set(c2, b.k2 - 1, len(b.text), b"\x01")
                sel.append(b)
                total += C * len(b.text) - 1
        if total > inc.value:
            inc.update(sel, total)
        if math.floor(best_ub + 1e-6) <= inc.value:
            break

        g = np.ones(n)
        for i in relaxed:
            g[k2[i]:k2[i] + ln[i]] -= 1
        norm = float(g @ g)
        if norm == 0:
            break
        lam = np.maximum(0.0, lam - mu * (ub - inc.value) / norm * g)
    return best_ub


def _first_pack(n: int, blocks: Sequence[CommonBlock]) -> list[CommonBlock]:
    """Left to right, place the longest fitting block at each free s1 position."""
    by_start = _by_start(n, blocks)
    c1, c2 = bytearray(n), bytearray(n)
    out = []
    p = 0
    while p < n:
        for b in by_start[p]:
            if _fits(b, c1, c2):
                _set(c1, b.k1 - 1, len(b.text), b"\x01")
                _set(c2, b.k2 - 1, len(b.text), b"\x01")
                out.append(b)
                p += len(b.text)
                break
        else:
            p += 1
    return out


def solve_max_coverage(
    inst: Instance,
    blocks: Sequence[CommonBlock],
    C: int | None = None,
    cfg: SolverConfig = SolverConfig(),
    initial: Partition | None = None,
) -> SolveResult:
    """Maximise ``sum (C*len - 1)`` over non-overlapping blocks (partial solutions allowed).

    At the leftmost undecided ``s1`` position the search either places a
    block starting there (longest first) or leaves the position uncovered.
    Upper bound at a node: current weight plus the best interval packing of
    the remaining blocks, enforcing disjointness in one string only (the
    tighter of the two). The empty selection is the root incumbent. A
    Lagrangian pass (``cfg.lagrangian_iterations``) runs first; its bound
    can close the search without any branching.
    """
    clock = _Clock(cfg)
    n = inst.n
    C = default_weight_constant(inst) if C is None else C
    if C < n + 1:
        raise ValueError(f"weight constant C={C} must be at least n+1={n + 1}")
    for b in blocks:
        if not b.is_block_of(inst):
            raise ValueError(f"{tuple(b)} is not a common block of the instance")

    def weight(sel) -> int:
        return sum(C * len(b.text) - 1 for b in sel)

    inc = _Incumbent(clock, [], 0)
    if initial is not None and weight(initial.blocks) > 0:
        inc.update(initial.blocks, weight(initial.blocks))
    dual = math.inf
    if cfg.improve and blocks:
        dive = _first_pack(n, blocks)
        if weight(dive) > inc.value:
            inc.update(dive, weight(dive))
        if cfg.lagrangian_iterations:
            dual = math.floor(_lagrangian_pack(n, blocks, C, inc, clock, cfg.lagrangian_iterations) + 1e-6)
        if dual > inc.value:
            _improve_pack(n, blocks, C, inc, clock, cfg)

    if dual <= inc.value:
        interrupted, bound = False, inc.value
    elif clock.should_stop(True):
        interrupted, bound = True, min(dual, C * n)
    else:
        interrupted, bound = _pack_search(n, blocks, C, bytearray(n), bytearray(n), [], 0, inc, clock)
        bound = min(bound, dual)
    status = SolveStatus.PROVEN_OPTIMAL
    if interrupted and bound > inc.value:
        status = SolveStatus.FEASIBLE_TIME_LIMIT
    else:
        bound = inc.value
    best = inc.blocks
    return SolveResult(
        status, MAXIMIZE, Partition.from_blocks(inst, best), inc.value, bound,
        inc.t_first, inc.t_best, clock.elapsed(), clock.nodes, len(blocks),
        {"C": C, "covered_len": sum(len(b.text) for b in best)},
    )


def brute_force_optimal(inst: Instance) -> int:
    """Exact optimum by exhaustive matching of the leftmost uncovered s1 position.

    Every block choice is tried; results for a repeated state (covered s1
    prefix, set of covered s2 positions) are memoised. Intended as a test
    oracle for ``n <= 14``.
    """
    n = inst.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got n={n}")
    s1, s2 = inst.s1, inst.s2

    @lru_cache(maxsize=None)
    def best_from(p: int, used2: int) -> float:
        if p == n:
            return 0
        out = math.inf
        for k in range(n):
            ln = 0
            while p + ln < n and k + ln < n and not used2 >> (k + ln) & 1 and s1[p + ln] == s2[k + ln]:
                ln += 1
                out = min(out, 1 + best_from(p + ln, used2 | ((1 << ln) - 1) << k))
        return out

    val = best_from(0, 0)
    if math.isinf(val):
        raise InfeasibleError("instance has no complete partition")
    return int(val)
