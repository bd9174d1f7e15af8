import random

from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import graph, instances, log_bound, m1, mdp, spec
from streett.generate import small_instance
from streett.graph_streett import SearchStats, winning_set_graph
from streett.mdp_streett import equivalence_check_split, good_end_component, solve_mdp_streett, winning_set_mdp
from streett.mec import mec_decomposition
from streett.model import split_vertices, tarjan_sccs
from streett.oracles import enumerate_end_components, oracle_mdp_streett


def _search_each_mec(model, sp, **kw):
    split, split_spec, _ = split_vertices(model, sp)
    out = []
    for mec in mec_decomposition(model).mecs:
        image = [x for v in mec for x in (2 * v, 2 * v + 1)]
        out.append(good_end_component(image, split, split_spec, **kw))
    return out


def test_good_end_component_examples():
    two = graph(2, [(0, 1), (1, 0)])
    assert _search_each_mec(two, spec(2, ([0], [1]))) == [[0, 1]]
    leaky = mdp(3, [1], [(0, 1), (1, 0), (1, 2), (2, 2)])
    assert mec_decomposition(leaky).mecs == [[2]]
    assert _search_each_mec(leaky, spec(3, ([0], [1]))) == [[2]]


def test_no_good_end_component_when_every_cycle_is_bad():
    model = mdp(3, [1], [(0, 1), (1, 0), (1, 2), (2, 1)])
    sp = spec(3, ([1], []))
    assert _search_each_mec(model, sp) == [None]
    assert winning_set_mdp(model, sp) == []


def test_winning_examples():
    assert winning_set_mdp(m1(), spec(3)) == [0, 1, 2]
    # only the MEC {1} satisfies; the random vertex 0 cannot force reaching it
    assert winning_set_mdp(m1(), spec(3, ([2], []))) == [1]


def test_split_equivalence_examples():
    loop = graph(1, [(0, 0)])
    assert equivalence_check_split(loop, spec(1, ([0], [0])))
    bad = graph(2, [(0, 1), (1, 0)])
    assert equivalence_check_split(bad, spec(2, ([0, 1], [])))


@settings(max_examples=200, deadline=None)
@given(instances(max_n=10, mdp_kind=True, max_k=3))
def test_matches_oracle(inst):
    model, sp = inst
    assert winning_set_mdp(model, sp) == oracle_mdp_streett(model, sp)


@settings(max_examples=120, deadline=None)
@given(instances(max_n=10, max_k=3))
def test_graph_inputs_agree_with_graph_solver(inst):
    model, sp = inst
    assert winning_set_mdp(model, sp) == winning_set_graph(model, sp)


@settings(max_examples=150, deadline=None)
@given(instances(max_n=9, mdp_kind=True, max_k=3))
def test_witnesses_are_good_end_components(inst):
    model, sp = inst
    res = solve_mdp_streett(model, sp)
    ecs = {tuple(x) for x in enumerate_end_components(model)}
    for mec, x in zip(res.satisfying, res.witnesses):
        assert tuple(x) in ecs and set(x) <= set(mec)
        inside = set(x)
        assert all(inside.isdisjoint(lo) or not inside.isdisjoint(up) for lo, up in sp.pairs)
    assert res.coherence_violations == 0


@settings(max_examples=150, deadline=None)
@given(instances(max_n=10, mdp_kind=True, max_k=3))
def test_only_player_edges_are_deleted(inst):
    model, sp = inst
    split, split_spec, _ = split_vertices(model, sp)
    for mec in mec_decomposition(model).mecs:
        image = [x for v in mec for x in (2 * v, 2 * v + 1)]
        rec = {}
        good_end_component(image, split, split_spec, _record=rec)
        assert rec["random_deletions"] == 0
        assert all(u % 2 == 0 and v == u + 1 for u, v in rec["deleted"])
        assert rec["coherence_violations"] == 0
        assert len(set(rec["trace"])) == len(rec["trace"])


def test_split_sets_keep_both_halves():
    # entry and exit halves of a vertex share every non-trivial component
    rng = random.Random(2)
    for _ in range(100):
        model, sp = small_instance(rng, 12, mdp=True)
        split, _, _ = split_vertices(model, sp)
        for comp in tarjan_sccs(split):
            if len(comp) > 1:
                assert all(x ^ 1 in comp for x in comp)


def test_k_entries_bounded():
    rng = random.Random(8)
    for _ in range(200):
        model, sp = small_instance(rng, 20, mdp=True, max_k=3)
        split, split_spec, _ = split_vertices(model, sp)
        for mec in mec_decomposition(model).mecs:
            image = [x for v in mec for x in (2 * v, 2 * v + 1)]
            stats = SearchStats(len(image))
            good_end_component(image, split, split_spec, stats=stats)
            assert max(stats.k_entries, default=0) <= log_bound(len(image))


@settings(max_examples=60, deadline=None)
@given(instances(max_n=10, mdp_kind=True, max_k=3), st.lists(st.integers(0, 2**31), min_size=2, max_size=3))
def test_seed_independence(inst, seeds):
    model, sp = inst
    runs = [solve_mdp_streett(model, sp, seed=s) for s in seeds]
    for r in runs[1:]:
        assert (r.winning, r.witnesses, r.trace) == (runs[0].winning, runs[0].witnesses, runs[0].trace)


@settings(max_examples=150, deadline=None)
@given(instances(max_n=7, mdp_kind=True, max_k=3))
def test_split_equivalence_property(inst):
    model, sp = inst
    assert equivalence_check_split(model, sp)
