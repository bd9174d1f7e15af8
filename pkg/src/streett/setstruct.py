"""Per-set bookkeeping for good-component search: pair counters, bad vertices and
the ordered collection of SCC handles inside the set."""
from __future__ import annotations

from typing import Iterable, Iterator

from sortedcontainers import SortedList

from .decscc import SccHandle
from .model import StreettSpec


class PairIndex:
    """One-time preprocessing: which L- and U-sets each vertex belongs to."""

    def __init__(self, spec: StreettSpec, n: int):
        self.k = spec.k
        self.in_l: list[tuple[int, ...]] = [()] * n
        self.in_u: list[tuple[int, ...]] = [()] * n
        lows: list[list[int]] = [[] for _ in range(n)]
        ups: list[list[int]] = [[] for _ in range(n)]
        for j, (lo, up) in enumerate(spec.pairs):
            for v in lo:
                lows[v].append(j)
            for v in up:
                ups[v].append(j)
        for v in range(n):
            if lows[v]:
                self.in_l[v] = tuple(lows[v])
            if ups[v]:
                self.in_u[v] = tuple(ups[v])

    def bits(self, vertices: Iterable[int]) -> int:
        return sum(len(self.in_l[v]) + len(self.in_u[v]) for v in vertices)


class CostMeter:
    """Sums ``|X| + bits(X)`` over every construct/remove argument."""

    def __init__(self) -> None:
        self.total = 0
        self.calls = 0


class SccCollection:
    """Handles ordered by smallest member id.

    The key is frozen at insertion, so a handle can still be erased after the
    engine has shrunk it.
    """

    def __init__(self) -> None:
        self._order = SortedList()
        self._items: dict[int, tuple[int, SccHandle]] = {}

    def insert(self, h: SccHandle) -> None:
        if h.id in self._items:
            raise KeyError(f"handle {h.id} already present")
        self._items[h.id] = (h.min, h)
        self._order.add((h.min, h.id))

    def erase(self, h: SccHandle) -> None:
        key, _ = self._items.pop(h.id)
        self._order.remove((key, h.id))

    def discard(self, h: SccHandle) -> None:
        if h.id in self._items:
            self.erase(h)

    def __contains__(self, h: SccHandle) -> bool:
        return h.id in self._items

    def __iter__(self) -> Iterator[SccHandle]:
        items = self._items
        return iter([items[hid][1] for _, hid in self._order])

    def __len__(self) -> int:
        return len(self._items)


def _is_bad_pair(count_u: int) -> bool:
    return count_u == 0


class StreettSetStructure:
    """Bookkeeping for one vertex set ``S``.

    ``bad`` always equals the vertices of ``S`` lying in some ``L_j`` while
    ``U_j`` misses ``S``.  ``live_edges`` counts edges inside ``S`` and is
    maintained by the caller.
    """

    def __init__(
        self,
        vertices: Iterable[int],
        pairs: PairIndex,
        meter: CostMeter | None = None,
    ):
        self.pairs = pairs
        self.meter = meter
        self.members: set[int] = set()
        self.count_u: dict[int, int] = {}
        self.l_members: dict[int, set[int]] = {}
        self.bad: set[int] = set()
        self.sccs = SccCollection()
        self.live_edges = 0
        in_l, in_u = pairs.in_l, pairs.in_u
        work = 0
        for v in vertices:
            if v in self.members:
                raise ValueError(f"vertex {v} listed twice")
            self.members.add(v)
            work += 1 + len(in_l[v]) + len(in_u[v])
            for j in in_u[v]:
                self.count_u[j] = self.count_u.get(j, 0) + 1
            for j in in_l[v]:
                self.l_members.setdefault(j, set()).add(v)
        for j, vs in self.l_members.items():
            if _is_bad_pair(self.count_u.get(j, 0)):
                self.bad |= vs
        if meter is not None:
            meter.total += work
            meter.calls += 1

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def count_l(self, j: int) -> int:
        return len(self.l_members.get(j, ()))

    def bits(self) -> int:
        return self.pairs.bits(self.members)

    def remove(self, removed: Iterable[int]) -> "StreettSetStructure":
        """Shrink ``S`` by ``removed``; vertices whose pair lost its last U-member become bad."""
        in_l, in_u = self.pairs.in_l, self.pairs.in_u
        removed = list(removed)
        for v in removed:
            if v not in self.members:
                raise ValueError(f"vertex {v} is not in the set")
        zeroed = []
        work = 0
        for v in removed:
            self.members.discard(v)
            self.bad.discard(v)
            work += 1 + len(in_l[v]) + len(in_u[v])
            for j in in_l[v]:
                self.l_members[j].discard(v)
            for j in in_u[v]:
                c = self.count_u[j] - 1
                self.count_u[j] = c
                if _is_bad_pair(c):
                    zeroed.append(j)
        for j in zeroed:
            vs = self.l_members.get(j)
            if vs:
                self.bad |= vs
        if self.meter is not None:
            self.meter.total += work
            self.meter.calls += 1
        return self

    def expected_bad(self) -> set[int]:
        """Recompute the bad set from scratch (for checks)."""
        return {
            v
            for v in self.members
            for j in self.pairs.in_l[v]
            if self.count_u.get(j, 0) == 0
        }
