"""Winning sets for Streett objectives on MDPs.

Good end-components are searched on the split instance, where every vertex
``v`` becomes ``2v -> 2v+1``.  Removing a bad vertex then means deleting the
player-1 edge ``(2v, 2v+1)``, which the decremental MEC structure supports.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .decmec import PureMdpGraph
from .decscc import lockstep_split
from .graph_streett import SearchStats
from .mec import asw_reach, mec_decomposition
from .model import MDPModel, StreettSpec, split_vertices
from .oracles import has_good_end_component
from .setstruct import PairIndex, StreettSetStructure


@dataclass
class MdpStreettResult:
    winning: list[int]
    satisfying: list[list[int]]
    witnesses: list[list[int]]
    trace: list[tuple[int, int]] = field(default_factory=list)
    deleted_edges: list[tuple[int, int]] = field(default_factory=list)
    coherence_violations: int = 0


@dataclass
class _EndComponentSearch:
    dec: PureMdpGraph
    pairs: PairIndex
    stats: SearchStats
    check_coherence: bool = False
    coherence_violations: int = 0
    removed_edges: list[tuple[int, int]] = field(default_factory=list)

    def run(self) -> list[int] | None:
        dec, engine = self.dec, self.dec.engine
        handles = [h for h in engine.components() if engine.is_nontrivial(h)]
        if not handles:
            return None
        owner: dict[int, StreettSetStructure] = {}
        root = StreettSetStructure(sorted(v for h in handles for v in h.members), self.pairs, self.stats.meter)
        for v in root.members:
            owner[v] = root
        for h in sorted(handles, key=lambda h: h.min):
            root.sccs.insert(h)
        queue = deque([root])

        while queue:
            self.stats.iterations += 1
            cur = queue.popleft()
            while cur.bad:
                bad = sorted(cur.bad)
                for b in bad:
                    cur.sccs.discard(engine.rep(b))
                cur.remove(bad)
                for b in bad:
                    del owner[b]
                cut = [(b, b + 1) for b in bad]
                self.removed_edges.extend(cut)
                new = dec.delete_announce(cut)
                # vertices that fell out of every MEC leave S as well
                gone = [v for v in dec.last_evicted if owner.get(v) is cur]
                if gone:
                    for v in gone:
                        cur.sccs.discard(engine.rep(v))
                        del owner[v]
                    cur.remove(gone)
                for h in new:
                    if owner.get(h.min) is cur:
                        cur.sccs.insert(h)

            if not len(cur.sccs):
                continue
            self._check_coherence(cur)
            handles = list(cur.sccs)
            if len(handles) == 1 and len(handles[0]) == len(cur):
                return sorted(cur.members)
            small, _ = lockstep_split(handles, len(cur))
            small.sort(key=lambda h: h.min)
            split_off: list[int] = []
            for h in small:
                members = h.vertices()
                part = StreettSetStructure(members, self.pairs, self.stats.meter)
                for v in members:
                    owner[v] = part
                    self.stats.k_entries[v] += 1
                part.sccs.insert(h)
                cur.sccs.erase(h)
                queue.append(part)
                split_off.extend(members)
            if len(cur.sccs):
                cur.remove(sorted(split_off))
                queue.append(cur)
        return None

    def _check_coherence(self, cur: StreettSetStructure) -> None:
        # local ids keep the entry/exit parity because MEC images hold both halves
        if not self.check_coherence:
            return
        for h in cur.sccs:
            if len(h) < 2:
                continue
            for x in h.members:
                if self.dec.engine.rep(x ^ 1) is not h:
                    self.coherence_violations += 1


def good_end_component(
    mec: Sequence[int],
    split_model: MDPModel,
    split_spec: StreettSpec,
    *,
    seed: int | None = None,
    stats: SearchStats | None = None,
    _record: dict | None = None,
) -> list[int] | None:
    """Search a good end-component inside ``mec``, a MEC of the split instance.

    Returns the component in original vertex ids, or ``None``.
    """
    sub, glob = split_model.induced(mec)
    sub_spec = split_spec.restrict(glob)
    dec = PureMdpGraph(sub, seed=seed)
    search = _EndComponentSearch(
        dec, PairIndex(sub_spec, sub.n), stats or SearchStats(sub.n), check_coherence=_record is not None
    )
    found = search.run()
    if _record is not None:
        _record["trace"] = [(glob[u], glob[v]) for u, v in dec.deletion_trace()]
        _record["deleted"] = [(glob[u], glob[v]) for u, v in search.removed_edges]
        _record["random_deletions"] = sum(1 for u, _ in search.removed_edges if sub.random[u])
        _record["coherence_violations"] = search.coherence_violations
    if found is None:
        return None
    inside = {glob[x] for x in found}
    return sorted(v // 2 for v in inside if v % 2 == 0 and v + 1 in inside)


def solve_mdp_streett(model: MDPModel, spec: StreettSpec, *, seed: int | None = None) -> MdpStreettResult:
    """MECs, then a good end-component search per MEC, then almost-sure
    reachability of the satisfying MECs."""
    dec = mec_decomposition(model, seed=seed)
    split_model, split_spec, _ = split_vertices(model, spec)
    satisfying, witnesses = [], []
    trace: list[tuple[int, int]] = []
    deleted: list[tuple[int, int]] = []
    violations = 0
    for mec in dec.mecs:
        image = sorted(x for v in mec for x in (2 * v, 2 * v + 1))
        rec: dict = {}
        found = good_end_component(image, split_model, split_spec, seed=seed, _record=rec)
        trace.extend(rec["trace"])
        deleted.extend(rec["deleted"])
        violations += rec["coherence_violations"]
        if found is not None:
            satisfying.append(mec)
            witnesses.append(found)
    targets = [v for m in satisfying for v in m]
    return MdpStreettResult(
        winning=asw_reach(model, targets, seed=seed),
        satisfying=satisfying,
        witnesses=witnesses,
        trace=trace,
        deleted_edges=deleted,
        coherence_violations=violations,
    )


def winning_set_mdp(model: MDPModel, spec: StreettSpec, *, seed: int | None = None) -> list[int]:
    return solve_mdp_streett(model, spec, seed=seed).winning


def equivalence_check_split(model: MDPModel, spec: StreettSpec) -> bool:
    """Whether the model and its split instance agree on having a good end-component.

    Both sides are decided by the reference implementations.
    """
    split_model, split_spec, _ = split_vertices(model, spec)
    return has_good_end_component(model, spec) == has_good_end_component(split_model, split_spec)
