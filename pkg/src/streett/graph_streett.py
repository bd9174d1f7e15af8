"""Good-component detection and winning sets for Streett objectives on graphs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .decscc import DecSccEngine, lockstep_split
from .model import MDPModel, StreettSpec, graph_reach, tarjan_sccs
from .setstruct import CostMeter, PairIndex, StreettSetStructure


@dataclass
class SearchStats:
    """Instrumentation shared by the good-component searches."""

    n: int
    k_entries: list[int] = field(default_factory=list)
    meter: CostMeter = field(default_factory=CostMeter)
    iterations: int = 0
    halving_violations: int = 0

    def __post_init__(self) -> None:
        if not self.k_entries:
            self.k_entries = [0] * self.n


@dataclass
class GraphStreettResult:
    winning: list[int]
    satisfying: list[list[int]]
    witnesses: list[list[int]]
    trace: list[tuple[int, int]]
    stats: SearchStats
    small_charges: list[int]


# Called after every outer iteration with the queue contents; test hook.
Observer = Callable[[DecSccEngine, Sequence[StreettSetStructure]], None]


def _search(
    engine: DecSccEngine,
    pairs: PairIndex,
    vertices: Sequence[int],
    stats: SearchStats,
    observer: Observer | None = None,
) -> list[int] | None:
    """GoodComp on the strongly connected subgraph spanned by ``vertices``.

    ``engine`` must contain no edges leaving ``vertices`` that matter to the
    search; removing a vertex deletes every live edge incident to it.
    """
    owner: dict[int, StreettSetStructure] = {}
    root = StreettSetStructure(vertices, pairs, stats.meter)
    for v in vertices:
        owner[v] = root
    root.live_edges = sum(
        1 for v in vertices for e in engine.out_edges(v) if owner.get(engine.dst[e]) is root
    )
    root.sccs.insert(engine.rep(vertices[0]))
    queue = deque([root])

    while queue:
        stats.iterations += 1
        cur = queue.popleft()
        while cur.bad:
            bad = sorted(cur.bad)
            for b in bad:
                cur.sccs.discard(engine.rep(b))
            doomed = engine.incident_edges(bad)
            inside = 0
            for e in doomed:
                if owner.get(engine.src[e]) is cur and owner.get(engine.dst[e]) is cur:
                    inside += 1
            cur.live_edges -= inside
            cur.remove(bad)
            for b in bad:
                del owner[b]
            for h in engine.delete_announce_ids(doomed):
                if owner.get(h.min) is cur:
                    cur.sccs.insert(h)

        if cur.live_edges >= 1:
            handles = list(cur.sccs)
            if len(handles) == 1 and len(handles[0]) == len(cur):
                if observer is not None:
                    observer(engine, list(queue) + [cur])
                return sorted(cur.members)
            small, _ = lockstep_split(handles, len(cur))
            small.sort(key=lambda h: h.min)

            split_off = []
            for h in small:
                if 2 * len(h) > len(cur):
                    stats.halving_violations += 1
                split_off.extend(h.members)
            split_set = set(split_off)
            crossing = 0
            for e in engine.incident_edges(split_off):
                if owner.get(engine.src[e]) is cur and owner.get(engine.dst[e]) is cur:
                    crossing += 1
            cur.live_edges -= crossing

            for h in small:
                members = h.vertices()
                part = StreettSetStructure(members, pairs, stats.meter)
                for v in members:
                    owner[v] = part
                    stats.k_entries[v] += 1
                part.live_edges = sum(
                    1 for v in members for e in engine.out_edges(v) if owner.get(engine.dst[e]) is part
                )
                part.sccs.insert(h)
                cur.sccs.erase(h)
                queue.append(part)
            if len(cur.sccs):
                cur.remove(sorted(split_set))
                queue.append(cur)
        if observer is not None:
            observer(engine, list(queue))
    return None


def good_component(
    scc: Sequence[int],
    model: MDPModel,
    spec: StreettSpec,
    *,
    seed: int | None = None,
    stats: SearchStats | None = None,
) -> list[int] | None:
    """Return a good component inside the strongly connected set ``scc``, or ``None``.

    A good component is a non-trivial strongly connected subgraph that, for
    every pair, avoids ``L_j`` or meets ``U_j``.
    """
    scc = sorted(scc)
    if not scc:
        return None
    inside = set(scc)
    edges = [(u, v) for u in scc for v in model.succ[u] if v in inside]
    engine = DecSccEngine(model.n, edges, seed)
    return _search(engine, PairIndex(spec, model.n), scc, stats or SearchStats(model.n))


def solve_graph_streett(
    model: MDPModel,
    spec: StreettSpec,
    *,
    seed: int | None = None,
    observer: Observer | None = None,
) -> GraphStreettResult:
    """Winning set on a graph: label SCCs holding a good component, then take
    everything that can reach a labelled SCC."""
    if not model.is_graph:
        raise ValueError("graph Streett solver needs a model without random vertices")
    sccs = tarjan_sccs(model)
    comp_of = [0] * model.n
    for i, c in enumerate(sccs):
        for v in c:
            comp_of[v] = i
    edges = [(u, v) for u, v in model.edges if comp_of[u] == comp_of[v]]
    engine = DecSccEngine(model.n, edges, seed)
    pairs = PairIndex(spec, model.n)
    stats = SearchStats(model.n)

    satisfying, witnesses = [], []
    for c in sccs:
        if not model.is_nontrivial(c):
            continue
        found = _search(engine, pairs, c, stats, observer)
        if found is not None:
            satisfying.append(c)
            witnesses.append(found)
    targets = [v for c in satisfying for v in c]
    return GraphStreettResult(
        winning=graph_reach(model, targets),
        satisfying=satisfying,
        witnesses=witnesses,
        trace=engine.deletion_trace(),
        stats=stats,
        small_charges=engine.small_charges,
    )


def winning_set_graph(model: MDPModel, spec: StreettSpec, *, seed: int | None = None) -> list[int]:
    return solve_graph_streett(model, spec, seed=seed).winning


def deletion_trace(model: MDPModel, spec: StreettSpec, *, seed: int | None = None) -> list[tuple[int, int]]:
    """Edges deleted from the decremental SCC engine, in order, during one solve."""
    return solve_graph_streett(model, spec, seed=seed).trace
