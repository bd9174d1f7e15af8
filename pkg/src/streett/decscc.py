"""Decremental strongly connected components with SCC handles and announcements.

The engine keeps the SCC partition of a graph under batched edge deletions.
After a batch it re-runs Tarjan only inside components that lost an internal
edge.  When such a component splits, the largest piece keeps the old handle
and only edges incident to the smaller pieces are scanned to repair the
vertex-to-handle map and the outgoing-edge counters.  Every vertex lands in a
small piece at most ``log2 n`` times, which ``small_charges`` records.

The public interface (``rep``, ``query``, ``delete_announce``,
``delete_announce_no_outgoing``) does not depend on how splits are detected,
so a faster engine can replace this one.
"""
from __future__ import annotations

import random as _random
from typing import Iterable, Sequence

import numpy as np

from .model import MDPModel


class SccHandle:
    """Reference to one SCC.  Stays valid until the component splits; the
    largest piece of a split keeps its handle."""

    __slots__ = ("id", "members", "min", "out_count", "version")

    def __init__(self, hid: int, members: list[int]):
        self.id = hid
        self.members = members
        self.min = min(members)
        self.out_count = 0
        self.version = 0

    def __len__(self) -> int:
        return len(self.members)

    def vertices(self) -> list[int]:
        return sorted(self.members)

    def __repr__(self) -> str:
        return f"SccHandle(id={self.id}, vertices={self.vertices()})"


class DecSccEngine:
    """Decremental SCC maintenance over vertices ``0..n-1``.

    ``seed`` only perturbs internal choices (handle ids and DFS root order);
    every returned list is sorted by smallest member, so callers never see
    the random choices.
    """

    def __init__(self, n: int, edges: Sequence[tuple[int, int]], seed: int | None = None):
        self.n = n
        self._rng = _random.Random(seed) if seed is not None else None
        self._next_id = 0
        m = len(edges)
        arr = np.asarray(edges, dtype=np.int64).reshape(m, 2)
        src_a, dst_a = arr[:, 0], arr[:, 1]
        if m and (arr.min() < 0 or arr.max() >= n):
            raise ValueError("edge endpoint out of range")
        out_deg = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src_a, minlength=n), out=out_deg[1:])
        in_deg = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(dst_a, minlength=n), out=in_deg[1:])
        # stable sorts keep edges of one vertex in input order
        out_list = np.argsort(src_a, kind="stable").tolist()
        in_list = np.argsort(dst_a, kind="stable").tolist()
        src = src_a.tolist()
        dst = dst_a.tolist()
        out_deg = out_deg.tolist()
        in_deg = in_deg.tolist()
        self.src = src
        self.dst = dst
        self._out_start = out_deg
        self._out_list = out_list
        self._in_start = in_deg
        self._in_list = in_list
        self.alive = bytearray(b"\x01") * m
        self.live_out = [out_deg[v + 1] - out_deg[v] for v in range(n)]
        self.live_edges = m
        self.self_loop = [-1] * n
        for e in np.flatnonzero(src_a == dst_a).tolist():
            self.self_loop[src[e]] = e
        self._lookup: dict[int, int] | None = None

        self.small_charges = [0] * n
        self.trace: list[int] = []
        self.skipped = 0
        self.scanned_edges = 0

        self.comp: list[SccHandle] = [None] * n  # type: ignore[list-item]
        self._stamp = [0] * n
        self._stamp_counter = 0
        self._index = [-1] * n
        self._low = [0] * n
        self._on_stack = bytearray(n)
        self._dfs_counter = 0
        roots = list(range(n))
        if self._rng is not None:
            self._rng.shuffle(roots)
        for piece in self._tarjan(roots, None):
            h = self._new_handle(piece)
            for v in piece:
                self.comp[v] = h
        for e in range(m):
            cu = self.comp[src[e]]
            if cu is not self.comp[dst[e]]:
                cu.out_count += 1

    @classmethod
    def from_model(cls, model: MDPModel, seed: int | None = None) -> "DecSccEngine":
        return cls(model.n, model.edges, seed)

    # -- queries ---------------------------------------------------------

    def rep(self, u: int) -> SccHandle:
        return self.comp[u]

    def query(self, u: int, v: int) -> bool:
        return self.comp[u] is self.comp[v]

    def components(self) -> list[SccHandle]:
        seen = set()
        out = []
        for v in range(self.n):
            h = self.comp[v]
            if h.id not in seen:
                seen.add(h.id)
                out.append(h)
        return out

    def partition(self) -> list[list[int]]:
        return sorted((h.vertices() for h in self.components()), key=lambda c: c[0])

    def is_bottom(self, h: SccHandle) -> bool:
        return h.out_count == 0

    def is_nontrivial(self, h: SccHandle) -> bool:
        if len(h.members) > 1:
            return True
        e = self.self_loop[h.members[0]]
        return e >= 0 and bool(self.alive[e])

    def edge_id(self, u: int, v: int) -> int | None:
        if self._lookup is None:
            n = self.n
            self._lookup = {self.src[e] * n + self.dst[e]: e for e in range(len(self.src))}
        e = self._lookup.get(u * self.n + v)
        return e

    def has_edge(self, u: int, v: int) -> bool:
        e = self.edge_id(u, v)
        return e is not None and bool(self.alive[e])

    def out_edges(self, v: int) -> list[int]:
        alive = self.alive
        lst = self._out_list
        return [e for e in lst[self._out_start[v] : self._out_start[v + 1]] if alive[e]]

    def in_edges(self, v: int) -> list[int]:
        alive = self.alive
        lst = self._in_list
        return [e for e in lst[self._in_start[v] : self._in_start[v + 1]] if alive[e]]

    def incident_edges(self, vertices: Iterable[int]) -> list[int]:
        """Live edges with at least one endpoint in ``vertices``, each listed once,
        in order of the first incident vertex."""
        vs = list(vertices)
        mark = self._next_stamp()
        stamp = self._stamp
        for v in vs:
            stamp[v] = mark
        alive, src = self.alive, self.src
        out_l, out_s, in_l, in_s = self._out_list, self._out_start, self._in_list, self._in_start
        result = []
        for v in vs:
            for e in out_l[out_s[v] : out_s[v + 1]]:
                if alive[e]:
                    result.append(e)
            for e in in_l[in_s[v] : in_s[v + 1]]:
                if alive[e] and stamp[src[e]] != mark:
                    result.append(e)
        self.scanned_edges += len(result)
        return result

    def edge(self, e: int) -> tuple[int, int]:
        return self.src[e], self.dst[e]

    def deletion_trace(self) -> list[tuple[int, int]]:
        return [(self.src[e], self.dst[e]) for e in self.trace]

    # -- updates ---------------------------------------------------------

    def delete_announce(
        self, edges: Iterable[tuple[int, int]], strict: bool = True
    ) -> list[SccHandle]:
        """Delete a batch of edges; return every SCC created by a split, sorted by smallest member."""
        created, _ = self._delete(self._ids(edges, strict), strict)
        return created

    def delete_announce_no_outgoing(
        self, edges: Iterable[tuple[int, int]], strict: bool = True
    ) -> list[SccHandle]:
        """Delete a batch of edges; return every SCC that became bottom during the batch.

        This covers new pieces without outgoing edges and unsplit components
        whose last outgoing edge was deleted.
        """
        _, bottoms = self._delete(self._ids(edges, strict), strict)
        return bottoms

    def delete_announce_ids(self, edge_ids: Iterable[int], strict: bool = True) -> list[SccHandle]:
        return self._delete(edge_ids, strict)[0]

    def delete_announce_no_outgoing_ids(
        self, edge_ids: Iterable[int], strict: bool = True
    ) -> list[SccHandle]:
        return self._delete(edge_ids, strict)[1]

    def _ids(self, edges: Iterable[tuple[int, int]], strict: bool) -> list[int]:
        ids = []
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise KeyError(f"unknown edge ({u}, {v})")
            e = self.edge_id(u, v)
            if e is None:
                if strict:
                    raise KeyError(f"unknown edge ({u}, {v})")
                self.skipped += 1
                continue
            ids.append(e)
        return ids

    def _delete(self, edge_ids: Iterable[int], strict: bool) -> tuple[list[SccHandle], list[SccHandle]]:
        alive, src, dst, comp = self.alive, self.src, self.dst, self.comp
        dirty: dict[int, SccHandle] = {}
        dropped: list[SccHandle] = []
        for e in edge_ids:
            if not alive[e]:
                if strict:
                    raise KeyError(f"edge ({src[e]}, {dst[e]}) already deleted")
                self.skipped += 1
                continue
            alive[e] = 0
            self.trace.append(e)
            self.live_edges -= 1
            u = src[e]
            self.live_out[u] -= 1
            cu = comp[u]
            if cu is comp[dst[e]]:
                dirty[cu.id] = cu
            else:
                cu.out_count -= 1
                if cu.out_count == 0:
                    dropped.append(cu)

        created: list[SccHandle] = []
        for h in dirty.values():
            pieces = self._split(h)
            if len(pieces) > 1:
                created.extend(pieces)
        created.sort(key=lambda h: h.min)

        bottoms: dict[int, SccHandle] = {}
        for h in created:
            if h.out_count == 0:
                bottoms[h.id] = h
        for h in dropped:
            if h.out_count == 0:
                bottoms[h.id] = h
        return created, sorted(bottoms.values(), key=lambda h: h.min)

    # -- internals -------------------------------------------------------

    def _next_stamp(self) -> int:
        self._stamp_counter += 1
        return self._stamp_counter

    def _new_handle(self, members: list[int]) -> SccHandle:
        if self._rng is not None:
            hid = self._rng.getrandbits(62)
        else:
            hid = self._next_id
            self._next_id += 1
        return SccHandle(hid, members)

    def _split(self, h: SccHandle) -> list[SccHandle]:
        members = h.members
        if self._rng is not None:
            members = members[:]
            self._rng.shuffle(members)
        mark = self._next_stamp()
        stamp = self._stamp
        for v in members:
            stamp[v] = mark
        pieces = self._tarjan(members, mark)
        if len(pieces) == 1:
            return [h]

        big = max(pieces, key=lambda p: (len(p), -min(p)))
        old_out = h.out_count
        h.members = big
        h.min = min(big)
        h.version += 1
        handles = [h]
        comp = self.comp
        small = []
        for p in pieces:
            if p is big:
                continue
            nh = self._new_handle(p)
            for v in p:
                comp[v] = nh
                self.small_charges[v] += 1
            small.append(nh)
            handles.append(nh)

        alive, src, dst = self.alive, self.src, self.dst
        out_l, out_s, in_l, in_s = self._out_list, self._out_start, self._in_list, self._in_start
        leaving_old = 0
        into_small_from_big = 0
        for sh in small:
            cnt = 0
            for v in sh.members:
                for e in out_l[out_s[v] : out_s[v + 1]]:
                    if not alive[e]:
                        continue
                    self.scanned_edges += 1
                    w = dst[e]
                    if stamp[w] != mark:
                        leaving_old += 1
                        cnt += 1
                    elif comp[w] is not sh:
                        cnt += 1
                for e in in_l[in_s[v] : in_s[v + 1]]:
                    if alive[e]:
                        self.scanned_edges += 1
                        if comp[src[e]] is h:
                            into_small_from_big += 1
            sh.out_count = cnt
        h.out_count = old_out - leaving_old + into_small_from_big
        handles.sort(key=lambda x: x.min)
        return handles

    def _tarjan(self, roots: Sequence[int], mark: int | None) -> list[list[int]]:
        """Iterative Tarjan over live edges; restricted to stamped vertices when ``mark`` is set.

        DFS indices grow across calls, so a vertex is visited in this run iff
        its index is at least ``base``; nothing has to be reset.
        """
        stamp = self._stamp
        alive, dst = self.alive, self.dst
        out_l, out_s = self._out_list, self._out_start
        index, low, on_stack = self._index, self._low, self._on_stack
        base = counter = self._dfs_counter
        stack: list[int] = []
        pieces: list[list[int]] = []
        for root in roots:
            if index[root] >= base:
                continue
            index[root] = low[root] = counter
            counter += 1
            stack.append(root)
            on_stack[root] = 1
            work = [(root, out_s[root])]
            while work:
                v, i = work[-1]
                end = out_s[v + 1]
                descended = False
                while i < end:
                    e = out_l[i]
                    i += 1
                    if not alive[e]:
                        continue
                    w = dst[e]
                    if mark is not None and stamp[w] != mark:
                        continue
                    if index[w] < base:
                        work[-1] = (v, i)
                        index[w] = low[w] = counter
                        counter += 1
                        stack.append(w)
                        on_stack[w] = 1
                        work.append((w, out_s[w]))
                        descended = True
                        break
                    if on_stack[w] and index[w] < low[v]:
                        low[v] = index[w]
                if descended:
                    continue
                work.pop()
                lv = low[v]
                if work:
                    p = work[-1][0]
                    if lv < low[p]:
                        low[p] = lv
                if lv == index[v]:
                    piece = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = 0
                        piece.append(w)
                        if w == v:
                            break
                    pieces.append(piece)
        self._dfs_counter = counter
        return pieces


def lockstep_split(handles: Sequence[SccHandle], total: int) -> tuple[list[SccHandle], SccHandle | None]:
    """Separate components of size at most ``total/2`` from the (at most one) larger one.

    Members are enumerated round-robin, one vertex per component per round; a
    component is small the moment it is exhausted while others remain.  The
    cost is proportional to the small components plus the number of handles.
    """
    active = list(handles)
    small: list[SccHandle] = []
    r = 0
    while len(active) > 1:
        r += 1
        still = []
        for h in active:
            if len(h.members) <= r:
                small.append(h)
            else:
                still.append(h)
        active = still
    large = None
    if active:
        last = active[0]
        size = total - sum(len(h.members) for h in small)
        if 2 * size <= total:
            small.append(last)
        else:
            large = last
    return small, large


def lockstep_largest(handles: Sequence[SccHandle]) -> tuple[SccHandle, list[SccHandle]]:
    """Largest component found by round-robin enumeration; ties go to the smallest member id."""
    active = list(handles)
    done: list[SccHandle] = []
    r = 0
    while len(active) > 1:
        r += 1
        still = [h for h in active if len(h.members) > r]
        if not still:
            still = [min(active, key=lambda h: h.min)]
        keep = {h.id for h in still}
        done.extend(h for h in active if h.id not in keep)
        active = still
    return active[0], done
