import pytest
from hypothesis import given, settings

from helpers import graph, instances, m1, mdp, spec
from streett.oracles import (
    brute_force_winning_graph,
    brute_force_winning_mdp,
    enumerate_end_components,
    maximal_sets,
    oracle_asw_reach,
    oracle_mdp_streett,
    oracle_mec,
    oracle_streett_graph,
)


def test_graph_oracle_examples():
    two = graph(2, [(0, 1), (1, 0)])
    assert oracle_streett_graph(two, spec(2, ([0], [1]))) == [0, 1]
    assert oracle_streett_graph(two, spec(2, ([0, 1], []))) == []


def test_mec_oracle_examples():
    assert oracle_mec(mdp(1, [0], [(0, 0)])).mecs == [[0]]
    d = oracle_mec(m1())
    assert d.mecs == [[1], [2]] and d.residue == [0]
    assert oracle_mec(mdp(3, [0], [(0, 1), (1, 2)])).mecs == []


def test_asw_oracle_examples():
    assert oracle_asw_reach(m1(), [0, 1, 2]) == [0, 1, 2]
    assert 0 not in oracle_asw_reach(mdp(3, [0], [(0, 1), (0, 2)]), [1])
    assert oracle_asw_reach(graph(3, [(0, 1), (1, 2)]), [2]) == [0, 1, 2]


def test_mdp_oracle_examples():
    loop = mdp(2, [1], [(0, 0), (1, 0)])
    assert oracle_mdp_streett(loop, spec(2, ([1], []))) == [0, 1]


def test_enumeration_examples():
    assert enumerate_end_components(graph(1, [(0, 0)])) == [[0]]
    assert enumerate_end_components(m1()) == [[1], [2]]
    assert enumerate_end_components(graph(3, [(0, 1), (1, 2)])) == []


def test_enumeration_size_guard():
    with pytest.raises(ValueError):
        enumerate_end_components(graph(15, []))


@settings(max_examples=150, deadline=None)
@given(instances(max_n=10, mdp_kind=True))
def test_mec_oracle_is_maximal_end_components(inst):
    model, _ = inst
    assert oracle_mec(model).mecs == maximal_sets(enumerate_end_components(model))


@settings(max_examples=150, deadline=None)
@given(instances(max_n=10, max_k=4))
def test_graph_oracle_matches_enumeration(inst):
    model, sp = inst
    assert oracle_streett_graph(model, sp) == brute_force_winning_graph(model, sp)


@settings(max_examples=150, deadline=None)
@given(instances(max_n=10, mdp_kind=True, max_k=3))
def test_mdp_oracle_matches_enumeration(inst):
    model, sp = inst
    assert oracle_mdp_streett(model, sp) == brute_force_winning_mdp(model, sp)


@settings(max_examples=100, deadline=None)
@given(instances(max_n=10, max_k=3))
def test_graph_and_mdp_oracles_agree_on_graphs(inst):
    model, sp = inst
    assert oracle_mdp_streett(model, sp) == oracle_streett_graph(model, sp)
