"""Command-line entry point: solvers, instance generator, differential checker, benchmark."""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from typing import Callable, Sequence

from . import bench as _bench
from .decmec import PureMdpGraph
from .generate import random_instance, small_instance
from .graph_streett import winning_set_graph
from .mdp_streett import winning_set_mdp
from .mec import asw_reach, mec_decomposition
from .model import MDPModel, ParseError, StreettSpec, parse_instance, serialize_instance
from .oracles import oracle_asw_reach, oracle_mdp_streett, oracle_mec, oracle_streett_graph


class UsageError(Exception):
    """Bad input detected after argument parsing; exit code 2."""


# ---------------------------------------------------------------------------
# helpers


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str) -> tuple[MDPModel, StreettSpec]:
    try:
        return parse_instance(_read_text(path))
    except ParseError as exc:
        where = f"{path}:{exc.line}: " if exc.line is not None else f"{path}: "
        raise UsageError(where + str(exc)) from None


def _line(tag: str, items: Sequence[int]) -> str:
    return " ".join([tag, *map(str, items)])


def partition_digest(mecs: Sequence[Sequence[int]]) -> str:
    """64-bit hex digest of a MEC partition given as sorted lists ordered by first member."""
    canon = ";".join(",".join(map(str, m)) for m in mecs)
    return hashlib.blake2b(canon.encode("ascii"), digest_size=8).hexdigest()


def parse_deletions(text: str, n: int) -> list[tuple[int, int]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if not toks or toks[0].startswith("#"):
            continue
        if len(toks) != 3 or toks[0] != "D":
            raise UsageError(f"deletions line {lineno}: expected 'D <u> <v>'")
        try:
            u, v = int(toks[1]), int(toks[2])
        except ValueError:
            raise UsageError(f"deletions line {lineno}: expected integers") from None
        if not (0 <= u < n and 0 <= v < n):
            raise UsageError(f"deletions line {lineno}: vertex out of range")
        out.append((u, v))
    return out


def _parse_targets(values: Sequence[str], n: int) -> list[int]:
    out = set()
    for val in values:
        for tok in val.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                t = int(tok)
            except ValueError:
                raise UsageError(f"bad target {tok!r}") from None
            if not 0 <= t < n:
                raise UsageError(f"target {t} out of range 0..{n - 1}")
            out.add(t)
    return sorted(out)


def _emit(args: argparse.Namespace, payload: dict, text: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for ln in text:
            print(ln)


# ---------------------------------------------------------------------------
# solve commands


def cmd_graph_streett(args: argparse.Namespace) -> int:
    model, spec = _load(args.instance)
    if not model.is_graph:
        raise UsageError("graph-streett needs an instance without random vertices")
    win = winning_set_graph(model, spec, seed=args.seed)
    _emit(args, {"winning": win}, [_line("WINNING", win)])
    return 0


def cmd_mdp_streett(args: argparse.Namespace) -> int:
    model, spec = _load(args.instance)
    win = winning_set_mdp(model, spec, seed=args.seed)
    _emit(args, {"winning": win}, [_line("WINNING", win)])
    return 0


def cmd_mec(args: argparse.Namespace) -> int:
    model, _ = _load(args.instance)
    dec = mec_decomposition(model, seed=args.seed)
    text = [_line("MEC", m) for m in dec.mecs] + [_line("RESIDUE", dec.residue)]
    _emit(args, {"mecs": dec.mecs, "residue": dec.residue}, text)
    return 0


def cmd_asreach(args: argparse.Namespace) -> int:
    model, _ = _load(args.instance)
    targets = _parse_targets(args.target, model.n)
    win = asw_reach(model, targets, seed=args.seed)
    _emit(args, {"winning": win}, [_line("WINNING", win)])
    return 0


def cmd_decmec(args: argparse.Namespace) -> int:
    model, _ = _load(args.instance)
    deletions = parse_deletions(_read_text(args.deletions), model.n)
    dec = PureMdpGraph(model, seed=args.seed)
    steps = []
    text = []

    def record(i: int, edge: tuple[int, int] | None) -> None:
        mecs = dec.mecs().mecs
        step = {"step": i, "edge": list(edge) if edge else None, "digest": partition_digest(mecs)}
        label = "INIT" if edge is None else f"D {edge[0]} {edge[1]}"
        text.append(f"STEP {i} {label} {step['digest']}")
        if args.verbose:
            step["mecs"] = mecs
            text.extend("  " + _line("MEC", m) for m in mecs)
        steps.append(step)

    record(0, None)
    for i, (u, v) in enumerate(deletions, start=1):
        try:
            dec.delete_player_edge(u, v)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"deletion {i}: {exc.args[0]}") from None
        record(i, (u, v))
    final = dec.mecs()
    text += [_line("MEC", m) for m in final.mecs] + [_line("RESIDUE", final.residue)]
    _emit(args, {"steps": steps, "mecs": final.mecs, "residue": final.residue}, text)
    return 0


# ---------------------------------------------------------------------------
# generator


def cmd_gen(args: argparse.Namespace) -> int:
    for name in ("n", "m", "k"):
        if getattr(args, name) < 0:
            raise UsageError(f"--{name} must be non-negative")
    if args.n == 0:
        raise UsageError("--n must be positive")
    p_random = args.p_random
    if p_random is None:
        p_random = 0.5 if args.kind == "mdp" else 0.0
    if args.kind == "graph" and p_random != 0.0:
        raise UsageError("--p-random only applies to --kind mdp")
    if not 0.0 <= p_random <= 1.0:
        raise UsageError("--p-random must lie in [0, 1]")
    if args.m > args.n * args.n:
        raise UsageError(f"infeasible: {args.m} edges requested but only {args.n * args.n} exist")
    rng = random.Random(args.seed)
    model, spec = random_instance(rng, args.n, args.m, args.k, p_random=p_random)
    text = serialize_instance(model, spec)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# differential checker

# A trial returns None on agreement, otherwise a report (instance text first).
Trial = Callable[[random.Random, int], "str | None"]


def _trial_graph(rng: random.Random, max_n: int) -> str | None:
    model, spec = small_instance(rng, max_n, mdp=False)
    fast, slow = winning_set_graph(model, spec, seed=rng.randrange(2**31)), oracle_streett_graph(model, spec)
    if fast == slow:
        return None
    return serialize_instance(model, spec) + f"# fast {fast}\n# oracle {slow}\n"


def _trial_mec(rng: random.Random, max_n: int) -> str | None:
    model, spec = small_instance(rng, max_n, mdp=True)
    fast, slow = mec_decomposition(model, seed=rng.randrange(2**31)), oracle_mec(model)
    if fast.key() == slow.key():
        return None
    return serialize_instance(model, spec) + f"# fast {fast.mecs} {fast.residue}\n# oracle {slow.mecs} {slow.residue}\n"


def _trial_asreach(rng: random.Random, max_n: int) -> str | None:
    model, spec = small_instance(rng, max_n, mdp=True)
    targets = sorted(rng.sample(range(model.n), rng.randint(0, model.n)))
    fast, slow = asw_reach(model, targets, seed=rng.randrange(2**31)), oracle_asw_reach(model, targets)
    if fast == slow:
        return None
    return serialize_instance(model, spec) + f"# targets {targets}\n# fast {fast}\n# oracle {slow}\n"


def _trial_mdp(rng: random.Random, max_n: int) -> str | None:
    model, spec = small_instance(rng, max_n, mdp=True, max_k=3)
    fast, slow = winning_set_mdp(model, spec, seed=rng.randrange(2**31)), oracle_mdp_streett(model, spec)
    if fast == slow:
        return None
    return serialize_instance(model, spec) + f"# fast {fast}\n# oracle {slow}\n"


def _trial_decmec(rng: random.Random, max_n: int) -> str | None:
    model, spec = small_instance(rng, max_n, mdp=True)
    order = [e for e in model.edges if not model.random[e[0]]]
    rng.shuffle(order)
    dec = PureMdpGraph(model, seed=rng.randrange(2**31))
    done: list[tuple[int, int]] = []
    for step in range(len(order) + 1):
        if step:
            dec.delete_player_edge(*order[step - 1])
            done.append(order[step - 1])
        got = dec.mecs()
        want = oracle_mec(dec.current_model())
        if got.key() != want.key():
            dels = "".join(f"D {u} {v}\n" for u, v in done)
            return (
                serialize_instance(model, spec)
                + f"# after {step} deletions:\n{dels}# fast {got.mecs}\n# oracle {want.mecs}\n"
            )
    return None


CHECK_SUITES: dict[str, Trial] = {
    "graph": _trial_graph,
    "mec": _trial_mec,
    "asreach": _trial_asreach,
    "mdp": _trial_mdp,
    "decmec": _trial_decmec,
}


def run_check(suite: str, trials: int, max_n: int, seed: int, out=None) -> int:
    out = out or sys.stdout
    names = list(CHECK_SUITES) if suite == "all" else [suite]
    for name in names:
        rng = random.Random(f"{seed}:{name}")
        for t in range(trials):
            report = CHECK_SUITES[name](rng, max_n)
            if report is not None:
                print(f"FAIL {name} trial {t}: counterexample follows", file=out)
                out.write(report)
                return 1
        print(f"OK {name} {trials} trials", file=out)
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    if args.max_n < 1:
        raise UsageError("--max-n must be positive")
    return run_check(args.suite, args.trials, args.max_n, args.seed)


# ---------------------------------------------------------------------------
# benchmark


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        sizes = _bench.parse_sizes(args.sizes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    suites = [s.strip() for s in args.suites.split(",") if s.strip()]
    for s in suites:
        if s not in _bench.SUITES:
            raise UsageError(f"unknown suite {s!r}; choose from {', '.join(_bench.SUITES)}")
    if args.reps < 1:
        raise UsageError("--reps must be positive")
    rows = _bench.run_bench(sizes, args.reps, args.seed, suites, jobs=args.jobs)
    text = _bench.rows_to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for s in suites:
        slope = next(r.slope for r in rows if r.suite == s)
        print(f"{s}: slope {slope:.3f}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streett", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def solver(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("instance", help="instance file, or - for stdin")
        p.add_argument("--seed", type=int, default=None, help="engine seed (does not change results)")
        p.add_argument("--json", action="store_true", help="print one JSON object")
        p.set_defaults(func=func)
        return p

    solver("graph-streett", cmd_graph_streett, "winning set of a Streett graph")
    solver("mdp-streett", cmd_mdp_streett, "almost-sure winning set of a Streett MDP")
    solver("mec", cmd_mec, "maximal end-component decomposition")
    p = solver("asreach", cmd_asreach, "almost-sure reachability")
    p.add_argument("--target", action="append", required=True, help="target vertices, comma separated or repeated")
    p = solver("decmec", cmd_decmec, "MEC decomposition under player edge deletions")
    p.add_argument("--deletions", required=True, help="file with one 'D <u> <v>' line per deletion")
    p.add_argument("--verbose", action="store_true", help="print full MEC lists per step")

    p = sub.add_parser("gen", help="seeded random instance")
    p.add_argument("--kind", choices=("graph", "mdp"), default="graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p-random", type=float, default=None, help="probability a vertex is random (mdp only, default 0.5)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="differential check of fast paths against oracles")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", choices=(*CHECK_SUITES, "all"), default="all")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", help="scaling benchmark, CSV output")
    p.add_argument("--sizes", default="1e4,3e4,1e5,3e5,1e6", help="comma-separated edge counts")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suites", default=",".join(_bench.SUITES))
    p.add_argument("--jobs", type=int, default=1, help="worker processes, one case each")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"streett: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
