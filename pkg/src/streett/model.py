"""Explicit-state MDP/graph model, instance text format and static graph primitives.

Vertices are the integers ``0..n-1``.  Each vertex is owned either by player 1
(``P``) or is random (``R``).  Probabilities are not stored: almost-sure
questions only depend on the support of each random vertex's distribution, so
the edge relation is the whole transition structure.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

PLAYER = "P"
RANDOM = "R"


class ParseError(ValueError):
    """Malformed instance text.  ``line`` is 1-based, or ``None`` for whole-file errors."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class MDPModel:
    """Immutable MDP with edge support only.

    A graph is the special case without random vertices.  Duplicate edges and
    out-of-range endpoints are rejected.  Random sinks are rejected unless
    ``allow_random_sinks`` is set, which is meant for working copies produced
    by deleting edges.
    """

    __slots__ = ("n", "random", "edges", "succ", "pred", "_edge_set")

    def __init__(
        self,
        n: int,
        random: Sequence[bool] | None = None,
        edges: Iterable[tuple[int, int]] = (),
        *,
        allow_random_sinks: bool = False,
    ):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        if random is None:
            random = [False] * n
        if len(random) != n:
            raise ValueError(f"ownership vector has length {len(random)}, expected {n}")
        self.random = tuple(bool(r) for r in random)

        succ: list[list[int]] = [[] for _ in range(n)]
        pred: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint out of range")
            key = u * n + v
            if key in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            succ[u].append(v)
            pred[v].append(u)
        for lst in succ:
            lst.sort()
        for lst in pred:
            lst.sort()
        self.succ = succ
        self.pred = pred
        self._edge_set = seen
        self.edges = [(u, v) for u in range(n) for v in succ[u]]

        if not allow_random_sinks:
            for v in range(n):
                if self.random[v] and not succ[v]:
                    raise ValueError(f"random vertex {v} has out-degree 0")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_graph(self) -> bool:
        return not any(self.random)

    def has_edge(self, u: int, v: int) -> bool:
        return u * self.n + v in self._edge_set

    def is_nontrivial(self, vertices: Sequence[int]) -> bool:
        """A vertex set induces a non-trivial subgraph unless it is one vertex without a self-loop."""
        if len(vertices) != 1:
            return len(vertices) > 1
        v = vertices[0]
        return self.has_edge(v, v)

    def induced(self, vertices: Iterable[int]) -> tuple["MDPModel", list[int]]:
        """Sub-model on ``vertices`` relabelled ``0..len-1`` in ascending order.

        Returns the sub-model and the local-to-global id list.  Random vertices
        that lose all their edges become sinks, which is allowed here.
        """
        glob = sorted(set(vertices))
        local = {g: i for i, g in enumerate(glob)}
        edges = []
        for i, g in enumerate(glob):
            for w in self.succ[g]:
                j = local.get(w)
                if j is not None:
                    edges.append((i, j))
        sub = MDPModel(
            len(glob), [self.random[g] for g in glob], edges, allow_random_sinks=True
        )
        return sub, glob

    def without_edges(self, removed: Iterable[tuple[int, int]]) -> "MDPModel":
        drop = {u * self.n + v for u, v in removed}
        return MDPModel(
            self.n,
            self.random,
            [(u, v) for u, v in self.edges if u * self.n + v not in drop],
            allow_random_sinks=True,
        )

    def make_absorbing(self, targets: Iterable[int]) -> "MDPModel":
        """Replace every out-edge of a target by a single self-loop."""
        tset = set(targets)
        edges = [(u, v) for u, v in self.edges if u not in tset]
        edges.extend((t, t) for t in sorted(tset))
        return MDPModel(self.n, self.random, edges, allow_random_sinks=True)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MDPModel):
            return NotImplemented
        return self.n == other.n and self.random == other.random and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.random, tuple(self.edges)))

    def __repr__(self) -> str:
        nr = sum(self.random)
        return f"MDPModel(n={self.n}, m={self.m}, random={nr})"


@dataclass(frozen=True)
class StreettSpec:
    """k Streett pairs ``(L_j, U_j)``, each stored as a sorted tuple of vertex ids."""

    pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()

    @classmethod
    def from_sets(cls, pairs: Iterable[tuple[Iterable[int], Iterable[int]]], n: int | None = None):
        norm = []
        for lo, up in pairs:
            lo_t = tuple(sorted(set(lo)))
            up_t = tuple(sorted(set(up)))
            if n is not None:
                for v in lo_t + up_t:
                    if not 0 <= v < n:
                        raise ValueError(f"pair member {v} out of range")
            norm.append((lo_t, up_t))
        return cls(tuple(norm))

    @property
    def k(self) -> int:
        return len(self.pairs)

    @property
    def b(self) -> int:
        return sum(len(lo) + len(up) for lo, up in self.pairs)

    def restrict(self, local_to_global: Sequence[int]) -> "StreettSpec":
        """Project onto a relabelled sub-model; pairs keep their index."""
        local = {g: i for i, g in enumerate(local_to_global)}
        return StreettSpec(
            tuple(
                (
                    tuple(sorted(local[v] for v in lo if v in local)),
                    tuple(sorted(local[v] for v in up if v in local)),
                )
                for lo, up in self.pairs
            )
        )


# ---------------------------------------------------------------------------
# Text format


def parse_instance(text: str | bytes) -> tuple[MDPModel, StreettSpec]:
    """Parse the line-oriented ``MDP n m k`` format.

    Raises :class:`ParseError` with the offending line number.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = [
        (i + 1, ln.split())
        for i, ln in enumerate(text.splitlines())
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty instance")
    lineno, head = lines[0]
    if len(head) != 4 or head[0] != "MDP":
        raise ParseError("expected header 'MDP <n> <m> <k>'", lineno)
    n, m, k = (_int(tok, lineno) for tok in head[1:])
    if min(n, m, k) < 0:
        raise ParseError("negative count in header", lineno)

    owner: list[str | None] = [None] * n
    edges: list[tuple[int, int]] = []
    edge_seen: set[tuple[int, int]] = set()
    lows: dict[int, tuple[int, ...]] = {}
    ups: dict[int, tuple[int, ...]] = {}

    for lineno, toks in lines[1:]:
        tag = toks[0]
        if tag == "V":
            if len(toks) != 3:
                raise ParseError("expected 'V <id> <P|R>'", lineno)
            v = _vertex(toks[1], n, lineno)
            if toks[2] not in (PLAYER, RANDOM):
                raise ParseError(f"unknown owner {toks[2]!r}", lineno)
            if owner[v] is not None:
                raise ParseError(f"duplicate vertex declaration {v}", lineno)
            owner[v] = toks[2]
        elif tag == "E":
            if len(toks) != 3:
                raise ParseError("expected 'E <u> <v>'", lineno)
            e = (_vertex(toks[1], n, lineno), _vertex(toks[2], n, lineno))
            if e in edge_seen:
                raise ParseError(f"duplicate edge {e[0]} {e[1]}", lineno)
            edge_seen.add(e)
            edges.append(e)
        elif tag in ("L", "U"):
            if len(toks) < 3:
                raise ParseError(f"expected '{tag} <j> <c> <id...>'", lineno)
            j = _int(toks[1], lineno)
            c = _int(toks[2], lineno)
            if not 1 <= j <= k:
                raise ParseError(f"pair index {j} out of range 1..{k}", lineno)
            ids = [_vertex(t, n, lineno) for t in toks[3:]]
            if len(ids) != c:
                raise ParseError(f"count mismatch: declared {c}, got {len(ids)}", lineno)
            if len(set(ids)) != len(ids):
                raise ParseError("duplicate id in pair set", lineno)
            if ids != sorted(ids):
                raise ParseError("pair set ids must be ascending", lineno)
            target = lows if tag == "L" else ups
            if j in target:
                raise ParseError(f"duplicate {tag} line for pair {j}", lineno)
            target[j] = tuple(ids)
        else:
            raise ParseError(f"unknown record {tag!r}", lineno)

    missing = [v for v in range(n) if owner[v] is None]
    if missing:
        raise ParseError(f"count mismatch: vertex {missing[0]} not declared")
    if len(edges) != m:
        raise ParseError(f"count mismatch: header says {m} edges, found {len(edges)}")
    for j in range(1, k + 1):
        if j not in lows or j not in ups:
            raise ParseError(f"count mismatch: pair {j} needs both an L and a U line")
    out_deg = [0] * n
    for u, _ in edges:
        out_deg[u] += 1
    for v in range(n):
        if owner[v] == RANDOM and out_deg[v] == 0:
            raise ParseError(f"random vertex {v} has out-degree 0")

    model = MDPModel(n, [o == RANDOM for o in owner], edges)
    spec = StreettSpec(tuple((lows[j], ups[j]) for j in range(1, k + 1)))
    return model, spec


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None


def _vertex(tok: str, n: int, lineno: int) -> int:
    v = _int(tok, lineno)
    if not 0 <= v < n:
        raise ParseError(f"vertex id {v} out of range 0..{n - 1}", lineno)
    return v


def serialize_instance(model: MDPModel, spec: StreettSpec | None = None) -> str:
    """Canonical text form: vertices, then edges sorted, then pairs with ascending ids."""
    spec = spec or StreettSpec()
    out = [f"MDP {model.n} {model.m} {spec.k}"]
    out.extend(f"V {v} {RANDOM if r else PLAYER}" for v, r in enumerate(model.random))
    out.extend(f"E {u} {v}" for u, v in model.edges)
    for j, (lo, up) in enumerate(spec.pairs, start=1):
        out.append(" ".join(["L", str(j), str(len(lo)), *map(str, lo)]))
        out.append(" ".join(["U", str(j), str(len(up)), *map(str, up)]))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Static algorithms


def _mask(n: int, restriction: Iterable[int] | None) -> bytearray:
    if restriction is None:
        return bytearray(b"\x01") * n
    mask = bytearray(n)
    for v in restriction:
        mask[v] = 1
    return mask


def tarjan_sccs(model: MDPModel, restriction: Iterable[int] | None = None) -> list[list[int]]:
    """SCCs of the graph (or of the subgraph induced by ``restriction``).

    Iterative Tarjan.  Each component is sorted; components are ordered by
    their smallest member.
    """
    n = model.n
    inside = _mask(n, restriction)
    succ = model.succ
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if not inside[root] or index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = 1
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            while i < len(nbrs):
                w = nbrs[i]
                i += 1
                if not inside[w]:
                    continue
                if index[w] == -1:
                    work[-1] = (v, i)
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = 1
                    work.append((w, 0))
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    p = work[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = 0
                        comp.append(w)
                        if w == v:
                            break
                    comp.sort()
                    comps.append(comp)
    comps.sort(key=lambda c: c[0])
    return comps


def graph_reach(
    model: MDPModel, targets: Iterable[int], within: Iterable[int] | None = None
) -> list[int]:
    """All vertices with a path to some target (targets included), by backward search.

    With ``within`` only vertices and edges inside that set are used; targets
    outside it are ignored.
    """
    inside = _mask(model.n, within)
    seen = bytearray(model.n)
    queue = deque()
    for t in targets:
        if inside[t] and not seen[t]:
            seen[t] = 1
            queue.append(t)
    pred = model.pred
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if inside[u] and not seen[u]:
                seen[u] = 1
                queue.append(u)
    return [v for v in range(model.n) if seen[v]]


def random_attractor(
    model: MDPModel, working_vertices: Iterable[int] | None, targets: Iterable[int]
) -> list[int]:
    """Random attractor of ``targets`` inside ``working_vertices``.

    A random vertex joins once one of its edges enters the set, a player-1
    vertex once all of its edges inside the working set do.  Backward search
    with per-vertex out-degree counters, so vertices never reached backwards
    (including working-copy sinks) stay out.
    """
    n = model.n
    inside = _mask(n, working_vertices)
    in_attr = bytearray(n)
    queue = deque()
    for t in targets:
        if not inside[t]:
            raise ValueError(f"target {t} is not a working vertex")
        if not in_attr[t]:
            in_attr[t] = 1
            queue.append(t)
    remaining: dict[int, int] = {}
    succ, pred, rnd = model.succ, model.pred, model.random
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if not inside[u] or in_attr[u]:
                continue
            if rnd[u]:
                in_attr[u] = 1
                queue.append(u)
                continue
            left = remaining.get(u)
            if left is None:
                left = sum(1 for w in succ[u] if inside[w])
            left -= 1
            remaining[u] = left
            if left == 0:
                in_attr[u] = 1
                queue.append(u)
    return [v for v in range(n) if in_attr[v]]


@dataclass(frozen=True)
class Condensation:
    nodes: list[list[int]]
    edges: list[tuple[int, int]]
    node_of: list[int]


def condense(model: MDPModel) -> Condensation:
    """Contract every SCC to a node; node ``i`` is the ``i``-th SCC by smallest member."""
    nodes = tarjan_sccs(model)
    node_of = [0] * model.n
    for i, comp in enumerate(nodes):
        for v in comp:
            node_of[v] = i
    edges = sorted(
        {(node_of[u], node_of[v]) for u, v in model.edges if node_of[u] != node_of[v]}
    )
    return Condensation(nodes, edges, node_of)


def split_vertices(
    model: MDPModel, spec: StreettSpec
) -> tuple[MDPModel, StreettSpec, list[tuple[int, int]]]:
    """Split each vertex ``v`` into ``2v`` (entry, player 1) and ``2v+1`` (exit, owner of v).

    Every original edge ``(u, v)`` becomes ``(2u+1, 2v)``; each vertex gets the
    internal edge ``(2v, 2v+1)``.  L-sets move to entries and U-sets to exits,
    so deleting the player-1 edge ``(2v, 2v+1)`` removes ``v`` from every
    end-component.
    """
    n = model.n
    owner = []
    for v in range(n):
        owner.append(False)
        owner.append(model.random[v])
    edges = [(2 * u + 1, 2 * v) for u, v in model.edges]
    edges.extend((2 * v, 2 * v + 1) for v in range(n))
    split = MDPModel(2 * n, owner, edges, allow_random_sinks=True)
    spec2 = StreettSpec(
        tuple(
            (tuple(2 * v for v in lo), tuple(2 * v + 1 for v in up))
            for lo, up in spec.pairs
        )
    )
    back = [(2 * v, 2 * v + 1) for v in range(n)]
    return split, spec2, back
