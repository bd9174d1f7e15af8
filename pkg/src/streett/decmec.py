"""MEC decomposition under player-1 edge deletions.

The structure keeps the pure MDP graph, i.e. only the edges lying inside
non-trivial MECs, in a decremental SCC engine.  Its non-trivial SCCs are then
exactly the non-trivial MECs, and same-MEC queries are SCC queries.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable

from .decscc import DecSccEngine, SccHandle, lockstep_largest
from .mec import MecDecomposition, engine_attractor, mec_decomposition
from .model import MDPModel


class PureMdpGraph:
    """Decremental MEC decomposition of ``model``.

    ``strict`` rejects deletions of unknown or already deleted edges; with
    ``strict=False`` they are ignored (replay mode).
    """

    def __init__(self, model: MDPModel, *, seed: int | None = None, strict: bool = True):
        self.model = model
        self.strict = strict
        dec = mec_decomposition(model, seed=seed)
        mec_of = dec.mec_of(model.n)
        edges = [(u, v) for u, v in model.edges if mec_of[u] != -1 and mec_of[u] == mec_of[v]]
        self.engine = DecSccEngine(model.n, edges, seed)
        self.deleted: set[tuple[int, int]] = set()
        self.evicted_total: set[int] = set()
        self.attractor_total: set[int] = set()
        self.updates = 0
        self.last_evicted: list[int] = []
        # number of component lists taken off the worklist, for instrumentation
        self.processed_lists = 0

    # -- queries ---------------------------------------------------------

    def same_mec(self, u: int, v: int) -> bool:
        h = self.engine.rep(u)
        if u == v:
            return self.engine.is_nontrivial(h) or not self.model.random[u]
        return h is self.engine.rep(v)

    def mec_handle(self, u: int) -> SccHandle | None:
        h = self.engine.rep(u)
        return h if self.engine.is_nontrivial(h) else None

    def mecs(self) -> MecDecomposition:
        comps = [h.vertices() for h in self.engine.components() if self.engine.is_nontrivial(h)]
        comps.sort(key=lambda c: c[0])
        inside = {v for c in comps for v in c}
        return MecDecomposition(comps, [v for v in range(self.model.n) if v not in inside])

    def current_model(self) -> MDPModel:
        return self.model.without_edges(self.deleted)

    def deletion_trace(self) -> list[tuple[int, int]]:
        return self.engine.deletion_trace()

    # -- updates ---------------------------------------------------------

    def delete_player_edge(self, u: int, v: int) -> list[SccHandle]:
        """Delete one player-1 edge; return the handles of MECs it created."""
        return self.delete_announce([(u, v)])

    def delete_announce(self, edges: Iterable[tuple[int, int]]) -> list[SccHandle]:
        """Delete a batch of player-1 edges.

        Returns the new non-trivial MECs that still exist after the whole
        batch, sorted by smallest member.  Vertices that dropped out of every
        non-trivial MEC are left in ``last_evicted``.
        """
        announced: dict[int, SccHandle] = {}
        evicted: list[int] = []
        for u, v in edges:
            if not (0 <= u < self.model.n and 0 <= v < self.model.n) or not self.model.has_edge(u, v):
                if self.strict:
                    raise KeyError(f"unknown edge ({u}, {v})")
                continue
            if self.model.random[u]:
                raise ValueError(f"edge ({u}, {v}) leaves random vertex {u}; only player-1 edges may be deleted")
            if (u, v) in self.deleted:
                if self.strict:
                    raise KeyError(f"edge ({u}, {v}) already deleted")
                continue
            self.deleted.add((u, v))
            self.updates += 1
            if not self.engine.query(u, v):
                continue
            e = self.engine.edge_id(u, v)
            pieces = self.engine.delete_announce_ids([e])
            new, gone = self._repair(pieces)
            for h in new:
                announced[h.id] = h
            evicted.extend(gone)
        self.last_evicted = sorted(set(evicted))
        self.evicted_total.update(self.last_evicted)
        live = [h for h in announced.values() if self.engine.is_nontrivial(h) and self._is_current(h)]
        return sorted(live, key=lambda h: h.min)

    def _is_current(self, h: SccHandle) -> bool:
        return self.engine.rep(h.members[0]) is h

    def _repair(self, pieces: list[SccHandle]) -> tuple[list[SccHandle], list[int]]:
        engine = self.engine
        random = self.model.random
        certified: list[SccHandle] = []
        evicted: list[int] = []
        work = deque([pieces]) if pieces else deque()
        while work:
            group = work.popleft()
            self.processed_lists += 1
            largest, rest = lockstep_largest(group)
            rest.sort(key=lambda h: h.min)
            in_group = {h.id for h in group}
            escapes: dict[int, list[int]] = {h.id: [] for h in group}

            for ci in rest:
                cross = []
                for e in engine.incident_edges(ci.vertices()):
                    s, t = engine.src[e], engine.dst[e]
                    cs, ct = engine.rep(s), engine.rep(t)
                    if cs is ci and ct is ci:
                        continue
                    cross.append(e)
                    if random[s]:
                        if cs.id not in in_group:
                            raise AssertionError("edge leaves the current list of components")
                        escapes[cs.id].append(s)
                engine.delete_announce_ids(cross)
                if escapes[ci.id]:
                    self._strip(ci, escapes[ci.id], work, evicted)
                else:
                    self._certify(ci, certified, evicted)
            if escapes[largest.id]:
                self._strip(largest, escapes[largest.id], work, evicted)
            else:
                self._certify(largest, certified, evicted)
        return certified, evicted

    def _certify(self, h: SccHandle, certified: list[SccHandle], evicted: list[int]) -> None:
        if self.engine.is_nontrivial(h):
            certified.append(h)
        else:
            evicted.extend(h.members)

    def _strip(self, h: SccHandle, escaping: list[int], work: deque, evicted: list[int]) -> None:
        """Remove the random attractor of the escaping vertices inside ``h`` and
        queue whatever components remain."""
        engine = self.engine
        attr = engine_attractor(
            engine, self.model.random, sorted(set(escaping)), within=lambda x, h=h: engine.rep(x) is h
        )
        self.attractor_total.update(attr)
        evicted.extend(attr)
        gone = set(attr)
        pieces = engine.delete_announce_ids(engine.incident_edges(attr))
        rest = [p for p in pieces if p.min not in gone]
        if rest:
            work.append(rest)
