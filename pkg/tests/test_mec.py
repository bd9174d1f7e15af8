from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import graph, instances, log_bound, m1, mdp
from streett.mec import asw_reach, mec_decomposition, mec_quotient, solve_asw_reach
from streett.model import graph_reach, tarjan_sccs
from streett.oracles import enumerate_end_components, oracle_asw_reach, oracle_mec


def test_decomposition_examples():
    d = mec_decomposition(mdp(1, [0], [(0, 0)]))
    assert d.mecs == [[0]] and d.residue == []
    d = mec_decomposition(m1())
    assert d.mecs == [[1], [2]] and d.residue == [0]
    d = mec_decomposition(graph(3, [(0, 1), (1, 2), (2, 0)]))
    assert d.mecs == [[0, 1, 2]]


def test_trivial_mecs_only_on_request():
    g = graph(2, [(0, 1)])
    assert mec_decomposition(g).mecs == []
    assert mec_decomposition(g, include_trivial=True).mecs == [[0], [1]]
    assert oracle_mec(g, include_trivial=True).mecs == [[0], [1]]


def test_random_escape_breaks_cycle():
    # 0 <-> 1 with random 1 also leading to the sink cycle 2
    model = mdp(3, [1], [(0, 1), (1, 0), (1, 2), (2, 2)])
    d = mec_decomposition(model)
    assert d.mecs == [[2]] and d.residue == [0, 1]


@settings(max_examples=200, deadline=None)
@given(instances(max_n=14, mdp_kind=True), st.integers(0, 2**20))
def test_matches_oracle(inst, seed):
    model, _ = inst
    assert mec_decomposition(model, seed=seed).key() == oracle_mec(model).key()


@settings(max_examples=150, deadline=None)
@given(instances(max_n=12, mdp_kind=True))
def test_mecs_are_closed_components_and_residue_is_free(inst):
    model, _ = inst
    d = mec_decomposition(model)
    for mec in d.mecs:
        assert tarjan_sccs(model, mec) == [mec]
        inside = set(mec)
        assert all(w in inside for v in mec if model.random[v] for w in model.succ[v])
    in_some_ec = {v for x in enumerate_end_components(model) for v in x}
    assert in_some_ec.isdisjoint(d.residue)
    assert max(d.small_charges, default=0) <= log_bound(model.n) + 1


# -- quotient ---------------------------------------------------------------------------


def test_quotient_examples():
    dag = mdp(3, [0], [(0, 1), (1, 2)])
    q = mec_quotient(dag, mec_decomposition(dag), [])
    assert q.model == dag
    cyc = graph(3, [(0, 1), (1, 2), (2, 0)])
    q = mec_quotient(cyc, mec_decomposition(cyc), [])
    assert q.model.n == 1 and q.model.edges == []
    absorbing = m1().make_absorbing([1])
    q = mec_quotient(absorbing, mec_decomposition(absorbing), [1])
    assert q.model.n == 3 and q.groups == [[0], [1], [2]]


def test_quotient_merges_parallel_edges():
    model = graph(3, [(0, 1), (0, 2), (1, 2), (2, 1)])
    q = mec_quotient(model, mec_decomposition(model), [])
    assert q.model.edges == [(0, 1)]
    assert q.node_of == [0, 1, 1]


# -- almost-sure reachability -------------------------------------------------------


def test_asw_examples():
    assert asw_reach(m1(), [0, 1, 2]) == [0, 1, 2]
    assert asw_reach(graph(2, [(0, 1)]), [1]) == [0, 1]
    gamble = mdp(3, [0], [(0, 1), (0, 2)])
    assert 0 not in asw_reach(gamble, [1])
    choice = graph(3, [(0, 1), (0, 2)])
    assert 0 in asw_reach(choice, [1])


def test_asw_reports_fixpoint_iterations():
    res = solve_asw_reach(mdp(3, [0], [(0, 1), (0, 2)]), [1])
    assert res.winning == [1] and res.iterations >= 1 and res.mec_rounds >= 1


@settings(max_examples=200, deadline=None)
@given(instances(max_n=14, mdp_kind=True), st.data())
def test_asw_matches_oracle(inst, data):
    model, _ = inst
    targets = data.draw(st.sets(st.integers(0, model.n - 1)))
    win = asw_reach(model, targets)
    assert win == oracle_asw_reach(model, targets)
    assert set(win) <= set(graph_reach(model, targets))
