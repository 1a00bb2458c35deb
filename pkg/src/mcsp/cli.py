"""Command-line entry point.

Subcommands: ``gen``, ``blocks``, ``solve``, ``export-lp``, ``import-sol``
and ``bench``. Exit codes: 0 success, 1 usage, 2 unreadable input or bad
file format, 3 infeasible model or invalid solution (unrelated strings
included), 4 internal error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .blocks import (
    BlockSet,
    dump_blocks,
    enumerate_blocks,
    filter_min_length,
    l_max,
    length_histogram,
    parse_block_dump,
)
from .core import (
    Instance,
    InstanceFormatError,
    InvalidPartitionError,
    MCSPError,
    Partition,
    PartitionStatus,
    UnrelatedStringsError,
    check_blocks,
)
from .greedy import greedy_partition
from .heuristic import HeuristicConfig, phase2_blocks, sweep_l
from .instgen import DEFAULT_SEED, DNA, generate_instance, instance_filename
from .model import (
    IlpModel,
    LPFormatError,
    SolutionError,
    build_ilp_orig,
    build_ilp_ph1,
    build_ilp_ph2,
    export_lp,
    import_solution,
)
from .solver import InfeasibleError, SolverConfig, solve_min_partition

log = logging.getLogger("mcsp")

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INVALID, EXIT_INTERNAL = range(5)
EXACT_TIME_LIMIT_S = 3600.0
HEURISTIC_FIRST_FEASIBLE_S = 50.0
ALGORITHMS = ("exact", "greedy", "heuristic")
BENCH_FIELDS = ["instance", "algorithm", "value", "time_s", "time_first_s", "time_best_s",
                "gap", "block_count", "status"]


class UsageError(MCSPError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, dest: str | None) -> None:
    if dest is None or dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def _read_instance(path: str) -> Instance:
    return Instance.read(path)


def _check_complete(inst: Instance, part: Partition) -> None:
    v = check_blocks(inst, part.blocks)
    if v.status is not PartitionStatus.COMPLETE:
        raise InvalidPartitionError(f"refusing to emit solution: {v.status.value} {v.reason}".rstrip())


def _check_l(blocks: BlockSet, l: int) -> None:
    top = l_max(blocks)
    if not 2 <= l <= top:
        raise UsageError(f"--l must lie in [2, l_max={top}], got {l}")


def _round(x):
    return None if x is None else round(x, 6)


def solve_report(inst: Instance, algo: str, *, l: int | None = None, time_limit: float | None = None,
                 first_feasible_after: float | None = None, workers: int = 1) -> tuple[dict, Partition, str | None]:
    """Run one algorithm; returns (JSON report, validated partition, sweep CSV or None).

    Reported times include block enumeration. ``l=None`` for the heuristic
    means a sweep over every l in [2, l_max].
    """
    if algo not in ALGORITHMS:
        raise UsageError(f"unknown algorithm {algo!r}")
    t0 = time.perf_counter()
    blocks = enumerate_blocks(inst)
    t_enum = time.perf_counter() - t0
    params: dict = {"n": inst.n}
    status, bound, gap, t_first, t_best = "Feasible", None, None, None, None
    sweep_csv = None
    extra: dict = {}

    if algo == "exact":
        limit = EXACT_TIME_LIMIT_S if time_limit is None else time_limit
        cfg = SolverConfig(time_limit_s=limit, stop_after_first_feasible_at_s=first_feasible_after)
        params.update(cfg.to_dict())
        res = solve_min_partition(inst, blocks, cfg=cfg)
        if res.partition is None:
            raise InfeasibleError(f"no solution found within {limit} s")
        part = res.partition
        status, bound, gap = res.status.value, res.bound, res.gap
        t_first, t_best = t_enum + res.time_first_s, t_enum + res.time_best_s
        extra["nodes"] = res.nodes
    elif algo == "greedy":
        part = greedy_partition(inst, blocks)
    else:
        if l is not None:
            _check_l(blocks, l)
        first = HEURISTIC_FIRST_FEASIBLE_S if first_feasible_after is None else first_feasible_after
        per_solve = SolverConfig(time_limit_s=time_limit, stop_after_first_feasible_at_s=first)
        params.update(per_solve.to_dict())
        params.update({"l": l, "sweep": l is None, "workers": workers})
        rep = sweep_l(inst, HeuristicConfig(l=l, per_solve=per_solve, workers=workers), blocks)
        part = rep.partition
        if rep.entries:
            best = rep.best
            t_first = t_enum + rep.entries[0].time_s
            t_best = t_enum + sum(e.time_s for e in rep.entries if e.l <= best.l)
        extra["sweep"] = rep.to_dict()
        sweep_csv = rep.to_csv()

    _check_complete(inst, part)
    report = {
        "schema_version": SCHEMA_VERSION,
        "algorithm": algo,
        "params": params,
        "objective": len(part),
        "status": status,
        "bound": None if bound is None or math.isinf(bound) else bound,
        "gap": gap,
        "time_first_s": _round(t_first),
        "time_best_s": _round(t_best),
        "time_total_s": _round(time.perf_counter() - t0),
        "block_count_total": len(blocks),
        "blocks": [{"text": b.text, "k1": b.k1, "k2": b.k2} for b in part.blocks],
        **extra,
    }
    return report, part, sweep_csv


def cmd_gen(args) -> int:
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    if not args.alphabet:
        raise UsageError("--alphabet must be non-empty")
    inst = generate_instance(args.n, args.alphabet, args.seed)
    if args.out is None or args.out == "-":
        sys.stdout.write(inst.to_text())
        return EXIT_OK
    path = Path(args.out)
    if path.is_dir():
        path = path / instance_filename(args.n, args.seed)
    inst.write(path)
    print(path)
    return EXIT_OK


def cmd_blocks(args) -> int:
    if args.min_len < 1:
        raise UsageError(f"--min-len must be >= 1, got {args.min_len}")
    blocks = filter_min_length(enumerate_blocks(_read_instance(args.instance)), args.min_len)
    text = length_histogram(blocks).to_csv() if args.histogram else dump_blocks(blocks)
    _emit(text, args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    if args.algo != "heuristic" and (args.l is not None or args.sweep):
        raise UsageError("--l and --sweep apply to the heuristic only")
    if args.l is not None and args.sweep:
        raise UsageError("--l and --sweep are mutually exclusive")
    if args.csv is not None and args.algo != "heuristic":
        raise UsageError("--csv (per-l sweep table) applies to the heuristic only")
    inst = _read_instance(args.instance)
    report, part, sweep_csv = solve_report(
        inst, args.algo, l=args.l, time_limit=args.time_limit,
        first_feasible_after=args.first_feasible_after, workers=args.workers,
    )
    if args.out is not None:
        _emit(dump_blocks(part.blocks), args.out)
    if args.csv is not None:
        _emit(sweep_csv, args.csv)
    if args.json is not None:
        _emit(json.dumps(report, indent=2) + "\n", args.json)
    elif args.out != "-" and args.csv != "-":
        gap = "" if report["gap"] is None else f", gap {report['gap']:.4f}"
        print(f"{args.algo}: objective {report['objective']} ({report['status']}{gap}), "
              f"|B|={report['block_count_total']}, {report['time_total_s']:.3f} s")
    return EXIT_OK


def _build_model(inst: Instance, which: str, l: int | None, phase1: str | None) -> IlpModel:
    blocks = enumerate_blocks(inst)
    if which == "orig":
        return build_ilp_orig(inst, blocks)
    if which == "ph1":
        if l is None:
            raise UsageError("model ph1 needs --l")
        _check_l(blocks, l)
        return build_ilp_ph1(inst, filter_min_length(blocks, l))
    if phase1 is None:
        raise UsageError("model ph2 needs --phase1 <block dump of the phase-1 solution>")
    s_ph1 = Partition.from_blocks(inst, parse_block_dump(Path(phase1).read_text()))
    return build_ilp_ph2(inst, phase2_blocks(blocks, s_ph1), s_ph1.blocks)


def cmd_export_lp(args) -> int:
    model = _build_model(_read_instance(args.instance), args.model, args.l, args.phase1)
    _emit(export_lp(model), args.out)
    return EXIT_OK


def cmd_import_sol(args) -> int:
    inst = _read_instance(args.instance)
    model = _build_model(inst, args.model, args.l, args.phase1)
    part = import_solution(model, Path(args.solution).read_text())
    v = check_blocks(inst, part.blocks)
    _emit(dump_blocks(part.blocks), args.out)
    print(f"{v.status.value} selection of {len(part)} blocks covering {part.covered_len}/{inst.n}",
          file=sys.stderr)
    return EXIT_OK


def _bench_job(job) -> dict:
    path, algo, opts = job
    report, _, _ = solve_report(Instance.read(path), algo, **opts)
    return {
        "instance": Path(path).name,
        "algorithm": algo,
        "value": report["objective"],
        "time_s": report["time_total_s"],
        "time_first_s": report["time_first_s"],
        "time_best_s": report["time_best_s"],
        "gap": report["gap"],
        "block_count": report["block_count_total"],
        "status": report["status"],
    }


def _mean(xs):
    xs = [x for x in xs if x is not None and x != ""]
    return round(sum(xs) / len(xs), 6) if xs else ""


def bench_table(rows: list[dict], algos: list[str]) -> str:
    """CSV with the data rows, then one ``average`` row per algorithm that has rows."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: "" if v is None else v for k, v in r.items()})
    for algo in algos:
        mine = [r for r in rows if r["algorithm"] == algo]
        if not mine:
            continue
        w.writerow({
            "instance": "average", "algorithm": algo,
            **{k: _mean(r[k] for r in mine) for k in ("value", "time_s", "time_first_s", "time_best_s",
                                                       "gap", "block_count")},
            "status": "",
        })
    return buf.getvalue()


def cmd_bench(args) -> int:
    directory = Path(args.instance_dir)
    if not directory.is_dir():
        raise FileNotFoundError(f"not a directory: {directory}")
    algos = list(dict.fromkeys(args.algo))
    for a in algos:
        if a not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {a!r}")
    files = sorted(directory.glob("*.txt"))
    if not files:
        log.warning("no instance files (*.txt) in %s; writing an empty table", directory)
    t0 = time.perf_counter()
    budget = args.budget

    def opts(algo: str) -> dict:
        limit = args.time_limit
        if budget is not None:
            remaining = max(budget - (time.perf_counter() - t0), 0.0)
            limit = remaining if limit is None else min(limit, remaining)
        return {"l": args.l if algo == "heuristic" else None, "time_limit": limit,
                "first_feasible_after": args.first_feasible_after}

    jobs = [(str(f), a) for f in files for a in algos]
    rows: list[dict] = []
    if args.workers > 1 and jobs:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futures = [pool.submit(_bench_job, (f, a, opts(a))) for f, a in jobs]
            for fut in futures:
                rows.append(fut.result())
    else:
        for f, a in jobs:
            if budget is not None and time.perf_counter() - t0 >= budget:
                log.warning("budget of %s s exhausted after %d of %d runs; table is partial",
                            budget, len(rows), len(jobs))
                break
            rows.append(_bench_job((f, a, opts(a))))
    _emit(bench_table(rows, algos), args.csv)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mcsp", description="Minimum common string partition toolkit.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress at INFO level")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random related instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--alphabet", default=DNA, help=f"symbols to draw from (default {DNA})")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")
    g.add_argument("--out", help="file or directory (rand_<n>_<seed>.txt); default stdout")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("blocks", help="list common blocks or their length histogram")
    b.add_argument("instance")
    b.add_argument("--min-len", type=int, default=1)
    b.add_argument("--histogram", action="store_true", help="emit 'length,count' CSV")
    b.add_argument("--out")
    b.set_defaults(func=cmd_blocks)

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("instance")
    s.add_argument("--algo", choices=ALGORITHMS, default="exact")
    s.add_argument("--l", type=int, help="heuristic: single minimum block length for phase 1")
    s.add_argument("--sweep", action="store_true", help="heuristic: try every l in [2, l_max] (default)")
    s.add_argument("--time-limit", type=float,
                   help=f"seconds; exact default {EXACT_TIME_LIMIT_S:g}, heuristic per solve unlimited")
    s.add_argument("--first-feasible-after", type=float,
                   help="stop a solve once this many seconds passed and a solution exists "
                        f"(heuristic default {HEURISTIC_FIRST_FEASIBLE_S:g})")
    s.add_argument("--json", nargs="?", const="-", help="write the JSON report (default stdout)")
    s.add_argument("--csv", nargs="?", const="-", help="heuristic: write the per-l sweep table")
    s.add_argument("--out", help="write the solution as a block dump")
    s.add_argument("--workers", type=int, default=1, help="heuristic: run l values in parallel")
    s.set_defaults(func=cmd_solve)

    for name, func, helptext in (("export-lp", cmd_export_lp, "write a model in LP format"),
                                 ("import-sol", cmd_import_sol, "read an external 0/1 assignment")):
        e = sub.add_parser(name, help=helptext)
        e.add_argument("instance")
        if name == "import-sol":
            e.add_argument("solution", help="'<var> <0|1>' lines")
        e.add_argument("--model", choices=("orig", "ph1", "ph2"), default="orig")
        e.add_argument("--l", type=int, help="ph1: minimum block length")
        e.add_argument("--phase1", help="ph2: block dump of the phase-1 solution")
        e.add_argument("--out")
        e.set_defaults(func=func)

    k = sub.add_parser("bench", help="run algorithms over a directory of instances, CSV table")
    k.add_argument("instance_dir")
    k.add_argument("--algo", nargs="+", default=["greedy", "heuristic"])
    k.add_argument("--l", type=int)
    k.add_argument("--time-limit", type=float)
    k.add_argument("--first-feasible-after", type=float)
    k.add_argument("--budget", type=float, help="total seconds; later runs are skipped once exceeded")
    k.add_argument("--csv", help="output file (default stdout)")
    k.add_argument("--workers", type=int, default=1)
    k.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help and on usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("mcsp: %(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be >= 1")
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"mcsp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnrelatedStringsError, InvalidPartitionError, InfeasibleError, SolutionError) as exc:
        print(f"mcsp: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, InstanceFormatError, LPFormatError, UnicodeDecodeError) as exc:
        print(f"mcsp: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - last-resort mapping to the documented exit code
        log.debug("internal error", exc_info=True)
        print(f"mcsp: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    finally:
        log.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
