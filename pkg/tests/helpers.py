import math

from hypothesis import strategies as st

from streett.model import MDPModel, StreettSpec


def graph(n, edges):
    return MDPModel(n, [False] * n, edges)


def mdp(n, random_vertices, edges):
    return MDPModel(n, [v in set(random_vertices) for v in range(n)], edges)


def spec(n, *pairs):
    return StreettSpec.from_sets(pairs, n)


def log_bound(n):
    return math.ceil(math.log2(n)) if n > 1 else 0


M1_EDGES = [(0, 1), (0, 2), (1, 1), (2, 2)]


def m1():
    return mdp(3, [0], M1_EDGES)


@st.composite
def instances(draw, max_n=10, mdp_kind=False, max_k=3, max_set=3):
    """Random (model, spec); random sinks get one repair edge."""
    n = draw(st.integers(1, max_n))
    vertex = st.integers(0, n - 1)
    owner = [draw(st.booleans()) if mdp_kind else False for _ in range(n)]
    edges = set(draw(st.sets(st.tuples(vertex, vertex), max_size=3 * n)))
    for v in range(n):
        if owner[v] and not any(u == v for u, _ in edges):
            edges.add((v, draw(vertex)))
    k = draw(st.integers(0, max_k))
    pairs = [
        (draw(st.sets(vertex, max_size=max_set)), draw(st.sets(vertex, max_size=max_set)))
        for _ in range(k)
    ]
    return MDPModel(n, owner, sorted(edges)), StreettSpec.from_sets(pairs, n)
