"""Brute-force reference implementations.

These only use the static primitives of :mod:`streett.model` (Tarjan,
reachability, attractors), never the decremental engines, so agreement with
the fast paths is independent evidence.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .mec import MecDecomposition
from .model import MDPModel, StreettSpec, graph_reach, random_attractor, tarjan_sccs

MAX_ENUM_N = 14


def _bad_vertices(vertices: Sequence[int], spec: StreettSpec) -> list[int]:
    inside = set(vertices)
    bad = set()
    for lo, up in spec.pairs:
        if inside.isdisjoint(up):
            bad.update(v for v in lo if v in inside)
    return sorted(bad)


def _pairs_hold(vertices: Iterable[int], spec: StreettSpec) -> bool:
    inside = set(vertices)
    return all(inside.isdisjoint(lo) or not inside.isdisjoint(up) for lo, up in spec.pairs)


# ---------------------------------------------------------------------------
# graphs


def good_components_static(model: MDPModel, spec: StreettSpec) -> list[list[int]]:
    """Good components found by repeatedly deleting bad vertices and recomputing SCCs."""
    found = []
    work = [c for c in tarjan_sccs(model)]
    while work:
        comp = work.pop()
        if not model.is_nontrivial(comp):
            continue
        bad = _bad_vertices(comp, spec)
        if not bad:
            found.append(comp)
            continue
        rest = sorted(set(comp) - set(bad))
        if rest:
            work.extend(tarjan_sccs(model, rest))
    return sorted(found)


def oracle_streett_graph(model: MDPModel, spec: StreettSpec) -> list[int]:
    if not model.is_graph:
        raise ValueError("graph oracle needs a model without random vertices")
    targets = [v for c in good_components_static(model, spec) for v in c]
    return graph_reach(model, targets)


# ---------------------------------------------------------------------------
# MECs


def oracle_mec(model: MDPModel, include_trivial: bool = False) -> MecDecomposition:
    """Static MEC decomposition: mark bottom SCCs, remove their random attractor,
    recompute SCCs from scratch, repeat."""
    alive = set(range(model.n))
    mecs = []
    while alive:
        comps = tarjan_sccs(model, alive)
        comp_of = {}
        for i, c in enumerate(comps):
            for v in c:
                comp_of[v] = i
        bottoms = [
            c
            for i, c in enumerate(comps)
            if all(w not in alive or comp_of[w] == i for v in c for w in model.succ[v])
        ]
        base = []
        for c in bottoms:
            if model.is_nontrivial(c):
                mecs.append(c)
            base.extend(c)
        alive -= set(random_attractor(model, alive, base))
    inside = {v for c in mecs for v in c}
    if include_trivial:
        mecs.extend([v] for v in range(model.n) if v not in inside and not model.random[v])
        inside = {v for c in mecs for v in c}
    mecs.sort(key=lambda c: c[0])
    return MecDecomposition(mecs, [v for v in range(model.n) if v not in inside])


def mecs_within(model: MDPModel, vertices: Iterable[int]) -> list[list[int]]:
    """Non-trivial MECs of ``model`` that lie inside ``vertices``."""
    inside = set(vertices)
    leaking = [
        v for v in inside if model.random[v] and any(w not in inside for w in model.succ[v])
    ]
    if leaking:
        inside -= set(random_attractor(model, inside, leaking))
    if not inside:
        return []
    sub, glob = model.induced(inside)
    return [[glob[x] for x in c] for c in oracle_mec(sub).mecs]


def oracle_asw_reach(model: MDPModel, targets: Iterable[int]) -> list[int]:
    """Direct fixpoint: drop everything that cannot reach the targets together
    with its random attractor, until nothing changes."""
    tset = sorted(set(targets))
    absorbing = model.make_absorbing(tset)
    alive = set(range(model.n))
    while True:
        reach = set(graph_reach(absorbing, tset, within=alive))
        outside = alive - reach
        if not outside:
            return sorted(alive)
        alive -= set(random_attractor(absorbing, alive, outside))


def _good_in(model: MDPModel, spec: StreettSpec, mec: list[int]) -> list[int] | None:
    work = [mec]
    while work:
        comp = work.pop()
        bad = _bad_vertices(comp, spec)
        if not bad:
            return comp
        rest = set(comp) - set(bad)
        if rest:
            work.extend(mecs_within(model, rest))
    return None


def good_end_components_static(model: MDPModel, spec: StreettSpec) -> list[tuple[list[int], list[int]]]:
    """``(mec, witness)`` for every MEC containing a good end-component."""
    out = []
    for mec in oracle_mec(model).mecs:
        w = _good_in(model, spec, mec)
        if w is not None:
            out.append((mec, w))
    return out


def oracle_mdp_streett(model: MDPModel, spec: StreettSpec) -> list[int]:
    targets = [v for mec, _ in good_end_components_static(model, spec) for v in mec]
    return oracle_asw_reach(model, targets)


# ---------------------------------------------------------------------------
# exponential ground truth


def _masks(model: MDPModel) -> tuple[list[int], list[int]]:
    succ = [0] * model.n
    pred = [0] * model.n
    for u, v in model.edges:
        succ[u] |= 1 << v
        pred[v] |= 1 << u
    return succ, pred


def _closure(start: int, adj: list[int], within: int) -> int:
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= adj[low.bit_length() - 1]
            f ^= low
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def enumerate_end_components(model: MDPModel, max_n: int = MAX_ENUM_N) -> list[list[int]]:
    """Every non-trivial end-component, by checking all vertex subsets."""
    if model.n > max_n:
        raise ValueError(f"subset enumeration limited to n <= {max_n}, got {model.n}")
    succ, pred = _masks(model)
    random_mask = sum(1 << v for v in range(model.n) if model.random[v])
    out = []
    for x in range(1, 1 << model.n):
        r = x & random_mask
        closed = True
        while r:
            low = r & -r
            if succ[low.bit_length() - 1] & ~x:
                closed = False
                break
            r ^= low
        if not closed:
            continue
        first = (x & -x).bit_length() - 1
        if x == 1 << first:
            if not succ[first] >> first & 1:
                continue
        elif _closure(first, succ, x) != x or _closure(first, pred, x) != x:
            continue
        out.append([v for v in range(model.n) if x >> v & 1])
    return out


def enumerate_good_end_components(model: MDPModel, spec: StreettSpec, max_n: int = MAX_ENUM_N) -> list[list[int]]:
    return [x for x in enumerate_end_components(model, max_n) if _pairs_hold(x, spec)]


def brute_force_winning_graph(model: MDPModel, spec: StreettSpec) -> list[int]:
    targets = {v for x in enumerate_good_end_components(model, spec) for v in x}
    return graph_reach(model, targets)


def brute_force_winning_mdp(model: MDPModel, spec: StreettSpec) -> list[int]:
    targets = {v for x in enumerate_good_end_components(model, spec) for v in x}
    return oracle_asw_reach(model, targets)


def maximal_sets(sets: list[list[int]]) -> list[list[int]]:
    as_sets = [frozenset(s) for s in sets]
    keep = [s for s, fs in zip(sets, as_sets) if not any(fs < other for other in as_sets)]
    return sorted(keep, key=lambda c: c[0])


def has_good_end_component(model: MDPModel, spec: StreettSpec) -> bool:
    """Exhaustive for small models, static recursion otherwise."""
    if model.n <= MAX_ENUM_N:
        return bool(enumerate_good_end_components(model, spec))
    return bool(good_end_components_static(model, spec))
