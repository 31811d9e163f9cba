"""Arborescences with unpopularity factor at most floor(log2 n) under strict rankings.

Active nodes repeatedly grab their best in-neighbour outside their current
component; components merge, and all but one node per component retire.
Each round at least halves the active nodes, and the sets a node owned
when it retired form a dual of depth (rounds) for the factor costs.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass

from .arborescence import LaminarFamily
from .errors import NotStrictRanking
from .instance import STRICT_RANKING, Branching, RootedInstance

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LayeredFamily(LaminarFamily):
    """0/1 laminar dual together with the round in which each set was recorded."""

    layers: tuple = ()

    def depth(self) -> int:
        """Length of the longest chain X1 < X2 < ... in the family."""
        order = sorted(range(len(self.sets)), key=lambda i: len(self.sets[i]))
        best = [1] * len(order)
        for a, i in enumerate(order):
            for j in order[:a]:
                if self.sets[j] < self.sets[i]:
                    best[a] = max(best[a], best[order.index(j)] + 1)
        return max(best, default=0)

    def to_json(self) -> list:
        rows = [
            {"set": sorted(s), "value": int(y), "layer": k}
            for s, y, k in zip(self.sets, self.values, self.layers)
        ]
        return sorted(rows, key=lambda r: (r["layer"], r["set"]))


def _reach(start: str, adj: dict) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj.get(u, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def low_factor_arborescence(rooted: RootedInstance):
    """Return ``(A, t, family)`` with u(A) <= t <= floor(log2 n).

    ``t`` is the number of rounds minus one.  Each node's edge in ``A`` is
    the edge it added in the round it retired, which is what the dual
    family certifies.
    """
    if rooted.classification != STRICT_RANKING:
        raise NotStrictRanking("the factor algorithm needs strict rankings at every node")
    edge, better = rooted.edge, rooted.better
    root = rooted.root
    active = set(rooted.nodes)
    owned = {v: frozenset([v]) for v in rooted.nodes}
    chosen: dict[str, str] = {}
    adj: dict[str, set] = {}
    sets, layers = [], []
    rounds = 0
    while active:
        rounds += 1
        for v in sorted(active):
            outside = [eid for eid in rooted.in_edges.get(v, ()) if edge[eid].tail not in owned[v]]
            # strict rankings: exactly one undominated edge among them
            best = [e for e in outside if not (better[e] & set(outside))]
            assert len(best) == 1, (v, best)
            chosen[v] = best[0]
            adj.setdefault(edge[best[0]].tail, set()).add(v)
        reach = {v: frozenset(_reach(v, adj)) for v in sorted(active)}
        from_root = _reach(root, adj)
        maximal = [X for X in set(reach.values()) if not any(X < Y for Y in reach.values())]
        retired = []
        for X in sorted(maximal, key=sorted):
            keep = min(v for v in active if reach[v] == X)
            retired += [u for u in X if u in active and u != keep]
            if keep in from_root:
                retired.append(keep)
        for u in sorted(set(retired)):
            sets.append(owned[u])
            layers.append(rounds)
            active.discard(u)
        for v in active:
            owned[v] = reach[v]
        log.debug("round %d: %d active, retired %s", rounds, len(active), sorted(set(retired)))
    a = Branching({v: chosen[v] for v in rooted.nodes})
    family = LayeredFamily(tuple(sets), tuple(1 for _ in sets), tuple(layers))
    return a, rounds - 1, family
