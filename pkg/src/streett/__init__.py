"""Streett objectives, MEC decomposition and almost-sure reachability on
explicit graphs and MDPs, built on decremental SCC maintenance."""
from .decmec import PureMdpGraph
from .decscc import DecSccEngine, SccHandle
from .graph_streett import good_component, solve_graph_streett, winning_set_graph
from .mdp_streett import equivalence_check_split, good_end_component, solve_mdp_streett, winning_set_mdp
from .mec import MecDecomposition, asw_reach, mec_decomposition, mec_quotient
from .model import (
    MDPModel,
    ParseError,
    StreettSpec,
    condense,
    graph_reach,
    parse_instance,
    random_attractor,
    serialize_instance,
    split_vertices,
    tarjan_sccs,
)

__all__ = [
    "DecSccEngine",
    "MDPModel",
    "MecDecomposition",
    "ParseError",
    "PureMdpGraph",
    "SccHandle",
    "StreettSpec",
    "asw_reach",
    "condense",
    "equivalence_check_split",
    "good_component",
    "good_end_component",
    "graph_reach",
    "mec_decomposition",
    "mec_quotient",
    "parse_instance",
    "random_attractor",
    "serialize_instance",
    "solve_graph_streett",
    "solve_mdp_streett",
    "split_vertices",
    "tarjan_sccs",
    "winning_set_graph",
    "winning_set_mdp",
]
