import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import graph, instances, log_bound, m1, spec
from streett.generate import small_instance
from streett.graph_streett import (
    SearchStats,
    deletion_trace,
    good_component,
    solve_graph_streett,
    winning_set_graph,
)
from streett.model import tarjan_sccs
from streett.oracles import enumerate_good_end_components, oracle_streett_graph


def _hub_instance():
    """Hub 0 (the only bad vertex) joined to four cycles.

    Removing 0 leaves the cycles {1,2,3}, {4,5,6}, {7,8,9}, {10,11}.  The
    first loses its L-vertex 1 and falls apart; {4,5,6} holds both its
    L-vertex 4 and U-vertex 5 and is reported.
    """
    edges = []
    for cyc in ([1, 2, 3], [4, 5, 6], [7, 8, 9], [10, 11]):
        edges += list(zip(cyc, cyc[1:] + cyc[:1]))
        edges += [(0, cyc[0]), (cyc[-1], 0)]
    pairs = ([4], [5]), ([7], [8]), ([1], [10]), ([0], [])
    return graph(12, edges), spec(12, *pairs)


def _is_good_component(model, sp, x):
    sub, _ = model.induced(x)
    if len(tarjan_sccs(sub)) != 1 or not model.is_nontrivial(x):
        return False
    inside = set(x)
    return all(inside.isdisjoint(lo) or not inside.isdisjoint(up) for lo, up in sp.pairs)


# -- good_component ---------------------------------------------------------------


def test_single_self_loop():
    g = graph(1, [(0, 0)])
    assert good_component([0], g, spec(1, ([0], [0]))) == [0]
    assert good_component([0], g, spec(1, ([0], []))) is None


def test_component_next_to_bad_sink():
    g = graph(3, [(0, 1), (1, 0), (1, 2), (2, 2)])
    sp = spec(3, ([2], []))
    assert good_component([0, 1], g, sp) == [0, 1]
    assert good_component([2], g, sp) is None


def test_hub_regression():
    g, sp = _hub_instance()
    snapshots = []
    res = solve_graph_streett(g, sp, observer=lambda eng, q: snapshots.append([sorted(s.members) for s in q]))
    assert res.witnesses == [[4, 5, 6]]
    assert res.winning == list(range(12)) == oracle_streett_graph(g, sp)
    # removing the hub yields four components, queued by smallest id
    assert snapshots[0] == [[1, 2, 3], [4, 5, 6], [7, 8, 9], [10, 11]]
    # the first one lost its L-vertex 1 and broke into edge-free pieces
    assert snapshots[1][:3] == [[4, 5, 6], [7, 8, 9], [10, 11]]
    assert all(len(s) == 1 for s in snapshots[1][3:])
    assert res.trace[:8] == [(0, 1), (0, 4), (0, 7), (0, 10), (3, 0), (6, 0), (9, 0), (11, 0)]
    assert set(res.trace[8:]) == {(1, 2), (3, 1)}


# -- winning sets ---------------------------------------------------------------------


def test_winning_examples():
    g = graph(2, [(0, 1), (1, 0)])
    assert winning_set_graph(g, spec(2, ([0], [1]))) == [0, 1]
    g = graph(3, [(0, 1), (1, 0), (2, 2)])
    assert winning_set_graph(g, spec(3, ([2], []))) == [0, 1]


def test_no_pairs_means_reaching_any_cycle():
    g = graph(5, [(0, 1), (1, 2), (2, 1), (3, 4)])
    assert winning_set_graph(g, spec(5)) == [0, 1, 2]


def test_trace_empty_without_bad_vertices():
    g = graph(3, [(0, 1), (1, 0), (2, 2)])
    assert deletion_trace(g, spec(3, ([0], [1]))) == []


def test_rejects_random_vertices():
    with pytest.raises(ValueError):
        winning_set_graph(m1(), spec(3))


@settings(max_examples=200, deadline=None)
@given(instances(max_n=12, max_k=4))
def test_matches_oracle(inst):
    model, sp = inst
    assert winning_set_graph(model, sp) == oracle_streett_graph(model, sp)


@settings(max_examples=150, deadline=None)
@given(instances(max_n=12, max_k=4))
def test_witnesses_are_good_components(inst):
    model, sp = inst
    res = solve_graph_streett(model, sp)
    for x in res.witnesses:
        assert _is_good_component(model, sp, x)
    assert len(res.trace) <= 2 * model.m
    assert len(set(res.trace)) == len(res.trace)


# -- invariants of the search loop -------------------------------------------------


def _per_scc(model, sp):
    for comp in tarjan_sccs(model):
        if model.is_nontrivial(comp):
            sub, glob = model.induced(comp)
            yield sub, sp.restrict(glob)


@settings(max_examples=120, deadline=None)
@given(instances(max_n=10, max_k=4))
def test_queue_keeps_every_good_component(inst):
    model, sp = inst
    for sub, sub_spec in _per_scc(model, sp):
        good = [set(x) for x in enumerate_good_end_components(sub, sub_spec)]
        states = []
        solve_graph_streett(sub, sub_spec, observer=lambda eng, q: states.append([set(s.members) for s in q]))
        for queue in states:
            for x in good:
                assert any(x <= s for s in queue)


@settings(max_examples=150, deadline=None)
@given(instances(max_n=14, max_k=4))
def test_scc_collection_matches_current_components(inst):
    model, sp = inst

    def check(engine, queue):
        for s in queue:
            live = [
                engine.edge(e)
                for v in s.members
                for e in engine.out_edges(v)
                if engine.dst[e] in s.members
            ]
            truth = tarjan_sccs(graph(model.n, live), s.members)
            held = sorted((h.vertices() for h in s.sccs), key=lambda c: c[0])
            assert held == truth
            assert s.live_edges == len(live)
            assert s.bad == s.expected_bad()

    solve_graph_streett(model, sp, observer=check)


def test_halving_and_k_entries():
    rng = random.Random(5)
    for _ in range(300):
        model, sp = small_instance(rng, 40, mdp=False)
        res = solve_graph_streett(model, sp, seed=rng.randrange(1000))
        assert res.stats.halving_violations == 0
        assert max(res.stats.k_entries, default=0) <= log_bound(model.n)
        assert max(res.small_charges, default=0) <= log_bound(model.n) + 1
        # a vertex is charged once on entry, once per split-off (construct plus
        # removal from the residue) and once when it is removed as bad
        assert res.stats.meter.total <= (model.n + sp.b) * (2 * log_bound(model.n) + 2)


@settings(max_examples=60, deadline=None)
@given(instances(max_n=14, max_k=4), st.lists(st.integers(0, 2**31), min_size=2, max_size=4))
def test_seed_independence(inst, seeds):
    model, sp = inst
    runs = [solve_graph_streett(model, sp, seed=s) for s in seeds]
    first = runs[0]
    for r in runs[1:]:
        assert r.trace == first.trace
        assert r.winning == first.winning
        assert r.witnesses == first.witnesses


def test_single_component_search_with_stats():
    g, sp = _hub_instance()
    stats = SearchStats(g.n)
    assert good_component(range(12), g, sp, stats=stats) == [4, 5, 6]
    assert stats.meter.total > 0 and stats.iterations >= 3
