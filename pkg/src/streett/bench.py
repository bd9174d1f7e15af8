"""Scaling benchmark: wall time and engine counters over growing instance sizes.

Instances have ``n = m // 3`` vertices, ``k = 8`` pairs and ``b`` close to
``m / 10``.  The L-sets carry almost all of ``b`` while the U-sets stay small
(geometric sizes), so bad vertices actually occur and the decremental
machinery is exercised instead of a single Tarjan pass.
"""
from __future__ import annotations

import csv
import gc
import io
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .generate import random_instance
from .graph_streett import solve_graph_streett
from .mec import mec_decomposition

SUITES = ("graph-streett", "mec")
DEFAULT_SIZES = (10_000, 30_000, 100_000, 300_000, 1_000_000)
BENCH_K = 8


@dataclass
class BenchRow:
    suite: str
    n: int
    m: int
    b: int
    k: int
    rep: int
    wall_time: float
    deletions: int
    small_charges: int
    max_small_charge: int
    iterations: int
    slope: float = float("nan")


def bench_instance(suite: str, m: int, rep: int, seed: int):
    rng = random.Random(f"{seed}:{suite}:{m}:{rep}")
    p_random = 0.5 if suite == "mec" else 0.0
    return random_instance(rng, max(1, m // 3), m, BENCH_K, p_random=p_random, l_size=m // (10 * BENCH_K))


def run_case(suite: str, m: int, rep: int, seed: int) -> BenchRow:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    model, spec = bench_instance(suite, m, rep, seed)
    gc.collect()
    start = time.perf_counter()
    if suite == "graph-streett":
        res = solve_graph_streett(model, spec)
        elapsed = time.perf_counter() - start
        deletions, charges, iterations = len(res.trace), res.small_charges, res.stats.iterations
    else:
        dec = mec_decomposition(model)
        elapsed = time.perf_counter() - start
        deletions, charges, iterations = len(dec.trace), dec.small_charges, dec.rounds
    return BenchRow(
        suite=suite,
        n=model.n,
        m=model.m,
        b=spec.b,
        k=spec.k,
        rep=rep,
        wall_time=elapsed,
        deletions=deletions,
        small_charges=sum(charges),
        max_small_charge=max(charges, default=0),
        iterations=iterations,
    )


def _run_packed(args: tuple[str, int, int, int]) -> BenchRow:
    return run_case(*args)


def fit_slope(ms: Sequence[float], times: Sequence[float]) -> float:
    """Least-squares slope of log(time) against log(m)."""
    pts = [(m, t) for m, t in zip(ms, times) if m > 0 and t > 0]
    if len({m for m, _ in pts}) < 2:
        return float("nan")
    x = np.log([m for m, _ in pts])
    y = np.log([t for _, t in pts])
    return float(np.polyfit(x, y, 1)[0])


def run_bench(
    sizes: Sequence[int] = DEFAULT_SIZES,
    reps: int = 1,
    seed: int = 0,
    suites: Sequence[str] = SUITES,
    jobs: int = 1,
) -> list[BenchRow]:
    """Run every (suite, size, rep) case and attach the per-suite slope.

    The slope is fitted to the median time per size.  With ``jobs > 1`` cases
    run in worker processes, each timing itself.
    """
    cases = [(s, int(m), r, seed) for s in suites for m in sizes for r in range(reps)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_packed, cases))
    else:
        rows = [run_case(*c) for c in cases]
    for s in suites:
        mine = [r for r in rows if r.suite == s]
        by_m: dict[int, list[float]] = {}
        for r in mine:
            by_m.setdefault(r.m, []).append(r.wall_time)
        ms = sorted(by_m)
        slope = fit_slope(ms, [float(np.median(by_m[m])) for m in ms])
        for r in mine:
            r.slope = slope
    return rows


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    fields = list(BenchRow.__dataclass_fields__)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        d = asdict(r)
        d["wall_time"] = f"{r.wall_time:.6f}"
        d["slope"] = "nan" if math.isnan(r.slope) else f"{r.slope:.4f}"
        writer.writerow(d)
    return buf.getvalue()


def parse_sizes(text: str) -> list[int]:
    """``"1e4,3e4,1e5"`` to ``[10000, 30000, 100000]``."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        value = float(tok)
        if value < 1 or value != int(value):
            raise ValueError(f"bad size {tok!r}")
        out.append(int(value))
    if not out:
        raise ValueError("no sizes given")
    return out
