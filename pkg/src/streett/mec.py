"""Maximal end-component decomposition and almost-sure reachability."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .decscc import DecSccEngine
from .model import MDPModel, graph_reach, random_attractor


@dataclass
class MecDecomposition:
    """Disjoint MECs (each sorted, ordered by smallest member) plus the vertices in no MEC."""

    mecs: list[list[int]]
    residue: list[int]
    rounds: int = 0
    small_charges: list[int] = field(default_factory=list, repr=False)
    trace: list[tuple[int, int]] = field(default_factory=list, repr=False)

    def key(self) -> tuple:
        return tuple(tuple(m) for m in self.mecs), tuple(self.residue)

    def mec_of(self, n: int) -> list[int]:
        """Vertex to MEC index, ``-1`` for residue vertices."""
        out = [-1] * n
        for i, m in enumerate(self.mecs):
            for v in m:
                out[v] = i
        return out


def engine_attractor(
    engine: DecSccEngine, random: tuple[bool, ...], targets: Iterable[int], within=None
) -> list[int]:
    """Random attractor over the engine's live edges, optionally confined to ``within(v)``."""
    in_attr: set[int] = set()
    queue = deque()
    for t in targets:
        if t not in in_attr:
            in_attr.add(t)
            queue.append(t)
    remaining: dict[int, int] = {}
    src = engine.src
    while queue:
        v = queue.popleft()
        for e in engine.in_edges(v):
            u = src[e]
            if u in in_attr or (within is not None and not within(u)):
                continue
            if random[u]:
                in_attr.add(u)
                queue.append(u)
                continue
            left = remaining.get(u)
            if left is None:
                if within is None:
                    left = engine.live_out[u]
                else:
                    left = sum(1 for f in engine.out_edges(u) if within(engine.dst[f]))
            left -= 1
            remaining[u] = left
            if left == 0:
                in_attr.add(u)
                queue.append(u)
    return sorted(in_attr)


def mec_decomposition(
    model: MDPModel, *, include_trivial: bool = False, seed: int | None = None
) -> MecDecomposition:
    """Peel bottom SCCs: each is a MEC; remove its random attractor and ask the
    decremental engine which components became bottom.

    With ``include_trivial`` every player-1 vertex outside the non-trivial
    MECs is reported as a singleton MEC as well.
    """
    engine = DecSccEngine.from_model(model, seed)
    removed = bytearray(model.n)
    queue = sorted(
        (h for h in engine.components() if h.out_count == 0), key=lambda h: h.min
    )
    mecs: list[list[int]] = []
    rounds = 0
    while queue:
        rounds += 1
        base: list[int] = []
        for h in queue:
            members = h.vertices()
            if model.is_nontrivial(members):
                mecs.append(members)
            base.extend(members)
        attr = engine_attractor(engine, model.random, base)
        for v in attr:
            removed[v] = 1
        announced = engine.delete_announce_no_outgoing_ids(engine.incident_edges(attr))
        queue = [h for h in announced if not removed[h.min]]
    in_mec = bytearray(model.n)
    for c in mecs:
        for v in c:
            in_mec[v] = 1
    if include_trivial:
        # a lone player-1 vertex is an end-component by itself
        for v in range(model.n):
            if not in_mec[v] and not model.random[v]:
                mecs.append([v])
                in_mec[v] = 1
    mecs.sort(key=lambda c: c[0])
    return MecDecomposition(
        mecs=mecs,
        residue=[v for v in range(model.n) if not in_mec[v]],
        rounds=rounds,
        small_charges=engine.small_charges,
        trace=engine.deletion_trace(),
    )


@dataclass
class Quotient:
    model: MDPModel
    node_of: list[int]
    groups: list[list[int]]


def mec_quotient(model: MDPModel, decomposition: MecDecomposition, targets: Iterable[int]) -> Quotient:
    """Collapse every MEC disjoint from ``targets`` into one player-1 node.

    Nodes are numbered by smallest member.  Self-loops of collapsed MECs are
    dropped and parallel edges merged.
    """
    tset = set(targets)
    group_of = [-1] * model.n
    groups: list[list[int]] = []
    collapsed: list[bool] = []
    for mec in decomposition.mecs:
        if tset.isdisjoint(mec):
            for v in mec:
                group_of[v] = len(groups)
            groups.append(mec)
            collapsed.append(True)
    for v in range(model.n):
        if group_of[v] == -1:
            group_of[v] = len(groups)
            groups.append([v])
            collapsed.append(False)
    order = sorted(range(len(groups)), key=lambda g: groups[g][0])
    renum = [0] * len(groups)
    for new, old in enumerate(order):
        renum[old] = new
    node_of = [renum[group_of[v]] for v in range(model.n)]
    groups = [groups[old] for old in order]
    collapsed = [collapsed[old] for old in order]

    owner = [not c and model.random[g[0]] for g, c in zip(groups, collapsed)]
    edges = set()
    for u, v in model.edges:
        a, b = node_of[u], node_of[v]
        if a == b and collapsed[a]:
            continue
        edges.add((a, b))
    q = MDPModel(len(groups), owner, sorted(edges), allow_random_sinks=True)
    return Quotient(q, node_of, groups)


@dataclass
class AswResult:
    winning: list[int]
    iterations: int
    mec_rounds: int


def solve_asw_reach(model: MDPModel, targets: Iterable[int], *, seed: int | None = None) -> AswResult:
    """Almost-sure reachability: make targets absorbing, collapse MECs, then
    iterate the safety fixpoint on the quotient."""
    tset = sorted(set(targets))
    for t in tset:
        if not 0 <= t < model.n:
            raise ValueError(f"target {t} out of range")
    absorbing = model.make_absorbing(tset)
    dec = mec_decomposition(absorbing, seed=seed)
    quo = mec_quotient(absorbing, dec, tset)
    q = quo.model
    qtargets = sorted({quo.node_of[t] for t in tset})
    alive = set(range(q.n))
    iterations = 0
    while True:
        reach = set(graph_reach(q, qtargets, within=alive))
        outside = alive - reach
        if not outside:
            break
        iterations += 1
        alive -= set(random_attractor(q, alive, outside))
    winning = [v for v in range(model.n) if quo.node_of[v] in alive]
    return AswResult(winning, iterations, dec.rounds)


def asw_reach(model: MDPModel, targets: Iterable[int], *, seed: int | None = None) -> list[int]:
    return solve_asw_reach(model, targets, seed=seed).winning
