"""Structure of popular arborescences under weak rankings.

Under weak rankings an arborescence is popular iff it uses only edges of
D* (safe edges inside each maximal X_v plus the edges of D') and contains
|X| - 1 safe edges of every maximal X.  So popular arborescences are
exactly "one D' arborescence + one safe-edge arborescence per supernode",
which makes min-cost popular arborescences a two-level min-cost problem.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Optional

from .arborescence import CostedGraph, min_cost_arborescence
from .errors import NotWeakRanking, TooLarge, Unreachable
from .instance import PARTIAL_ORDER, Branching, Edge, RootedInstance
from .solver import ContractionGraph, build_contraction

DEFAULT_CUTOFF = 16


def _require_weak(rooted: RootedInstance):
    if rooted.classification == PARTIAL_ORDER:
        raise NotWeakRanking("this characterisation needs weak rankings at every node")


@dataclass(frozen=True)
class DStarGraph:
    nodes: tuple
    root: str
    edges: tuple  # edge ids, sorted
    contraction: ContractionGraph

    def to_json(self) -> list:
        return list(self.edges)


def build_dstar(rooted: RootedInstance, cg: Optional[ContractionGraph] = None) -> DStarGraph:
    cg = cg or build_contraction(rooted)
    edges = set(cg.preimage)
    for label in cg.supernodes:
        edges |= cg.safe_edges(label)
    return DStarGraph(tuple(rooted.nodes), rooted.root, tuple(sorted(edges)), cg)


def is_popular_structural(rooted: RootedInstance, a: Branching, cg: Optional[ContractionGraph] = None) -> bool:
    _require_weak(rooted)
    dstar = build_dstar(rooted, cg)
    used = set(a.parent.values())
    if not used <= set(dstar.edges):
        return False
    cg = dstar.contraction
    return all(
        len(used & cg.safe_edges(label)) == len(X) - 1 for label, X in cg.supernodes.items()
    )


def _shifted(edges, cost: Mapping[str, int]) -> dict[str, int]:
    """Shift costs per head so the minimum is 0; every arborescence pays each head once."""
    low: dict[str, int] = {}
    for e in edges:
        low[e.head] = min(low.get(e.head, cost[e.id]), cost[e.id])
    return {e.id: cost[e.id] - low[e.head] for e in edges}


def min_cost_popular_branching(rooted: RootedInstance, cost: Mapping[str, int], cg=None):
    """Cheapest popular arborescence as ``(A, cost)``, or None if there is none.

    Edges missing from ``cost`` cost 0; costs may be any integers.
    """
    _require_weak(rooted)
    cg = cg or build_contraction(rooted)
    c = {e.id: int(cost.get(e.id, 0)) for e in rooted.edges}
    edge = rooted.edge

    inner: dict[str, tuple[dict, int]] = {}
    for label, X in cg.supernodes.items():
        safe = [edge[eid] for eid in cg.safe_edges(label)]
        for v in cg.entry_points[label]:
            inside = [e for e in safe if e.head != v]
            if len(X) == 1:
                inner[v] = ({}, 0)
                continue
            shifted = _shifted(inside, c)
            g = CostedGraph(tuple(sorted(X - {v})), v, tuple(inside), shifted)
            arb, _ = min_cost_arborescence(g)
            inner[v] = (dict(arb.parent), sum(c[e] for e in arb.parent.values()))

    outer = [Edge(e.id, e.tail, e.head) for e in cg.edges]
    weight = {e.id: c[e.id] + inner[edge[e.id].head][1] for e in outer}
    g = CostedGraph(tuple(sorted(cg.supernodes)), cg.root, tuple(outer), _shifted(outer, weight))
    try:
        tree, _ = min_cost_arborescence(g)
    except Unreachable:
        return None
    parent = {}
    for eid in tree.parent.values():
        v = edge[eid].head
        parent[v] = eid
        parent.update(inner[v][0])
    a = Branching({v: parent[v] for v in rooted.nodes})
    return a, sum(c[e] for e in a.parent.values())


# -- LP text -------------------------------------------------------------------

class _Names:
    """Stable, unique LP identifiers for arbitrary ids."""

    def __init__(self, prefix: str):
        self.prefix = prefix
        self.map: dict[str, str] = {}
        self.used: set[str] = set()

    def __call__(self, *parts: str) -> str:
        key = "\x00".join(parts)
        name = self.map.get(key)
        if name is None:
            base = self.prefix + "_".join(re.sub(r"[^A-Za-z0-9]", "_", p) for p in parts)
            name, k = base, 2
            while name in self.used:
                name, k = f"{base}_{k}", k + 1
            self.map[key] = name
            self.used.add(name)
        return name


def _sum(names) -> str:
    names = list(names)
    return " + ".join(names) if names else "0"


def emit_face_lp(rooted: RootedInstance, cutoff: int = DEFAULT_CUTOFF, cg=None) -> str:
    """The face of the arborescence polytope containing exactly the popular arborescences."""
    _require_weak(rooted)
    n = rooted.n
    if n > cutoff:
        raise TooLarge(f"n = {n} exceeds the cutoff {cutoff}; the subtour rows are exponential")
    dstar = build_dstar(rooted, cg)
    cg = dstar.contraction
    x, lab = _Names("x_"), _Names("")
    edges = [e for e in rooted.edges if e.head != rooted.root]
    for e in edges:
        x(e.id)
    lines = [
        "\\ face of the arborescence polytope holding the popular arborescences",
        f"\\ n = {n}, m = {len(edges)}, supernodes = {len(cg.supernodes)}",
    ]
    lines += [f"\\ {x(e.id)} = edge {e.id} ({e.tail} -> {e.head})" for e in edges]
    lines += ["minimize", " obj: 0", "subject to"]
    nodes = sorted(rooted.nodes)
    k = 0
    for size in range(2, n + 1):
        for X in itertools.combinations(nodes, size):
            Xs = set(X)
            inside = [x(e.id) for e in edges if e.tail in Xs and e.head in Xs]
            k += 1
            lines.append(f" sub_{k}: {_sum(inside)} <= {size - 1}")
    for v in nodes:
        lines.append(f" in_{lab(v)}: {_sum(x(eid) for eid in rooted.in_edges.get(v, ()))} = 1")
    for label, X in sorted(cg.supernodes.items()):
        if len(X) >= 2:
            inside = [x(e.id) for e in edges if e.tail in X and e.head in X]
            lines.append(f" tight_{lab(label)}: {_sum(inside)} = {len(X) - 1}")
    dset = set(dstar.edges)
    for e in edges:
        if e.id not in dset:
            lines.append(f" zero_{x(e.id)}: {x(e.id)} = 0")
    lines.append("bounds")
    lines += [f" {x(e.id)} >= 0" for e in edges]
    lines.append("end")
    return "\n".join(lines) + "\n"


def emit_extended_lp(rooted: RootedInstance, cg=None) -> str:
    """Flow-based extended formulation over the edges of D* plus the tight supernode rows."""
    _require_weak(rooted)
    dstar = build_dstar(rooted, cg)
    cg = dstar.contraction
    edge = rooted.edge
    es = [edge[eid] for eid in dstar.edges]
    nodes = sorted(rooted.nodes)
    x, f, lab = _Names("x_"), _Names("f_"), _Names("")
    for e in es:
        x(e.id)
    lines = [
        "\\ extended formulation of the popular arborescence polytope",
        f"\\ n = {len(nodes)}, m = {len(es)}, supernodes = {len(cg.supernodes)}",
    ]
    lines += [f"\\ {x(e.id)} = edge {e.id} ({e.tail} -> {e.head})" for e in es]
    lines += ["minimize", " obj: 0", "subject to"]
    for v in nodes:
        for e in es:
            lines.append(f" cap_{f(e.id, v)[2:]}: {x(e.id)} - {f(e.id, v)} >= 0")
            lines.append(f" pos_{f(e.id, v)[2:]}: {f(e.id, v)} >= 0")
    out_of: dict[str, list[Edge]] = {}
    into: dict[str, list[Edge]] = {}
    for e in es:
        out_of.setdefault(e.tail, []).append(e)
        into.setdefault(e.head, []).append(e)
    for v in nodes:
        lines.append(f" src_{lab(v)}: {_sum(f(e.id, v) for e in out_of.get(rooted.root, ()))} = 1")
    for v in nodes:
        for u in nodes:
            if u == v:
                continue
            terms = [f"+ {f(e.id, v)}" for e in out_of.get(u, ())] + [f"- {f(e.id, v)}" for e in into.get(u, ())]
            body = " ".join(terms).lstrip("+ ") if terms else "0"
            lines.append(f" flow_{lab(u)}_{lab(v)}: {body} = 0")
    lines.append(f" card: {_sum(x(e.id) for e in es)} = {len(nodes)}")
    for label, X in sorted(cg.supernodes.items()):
        if len(X) >= 2:
            inside = [x(e.id) for e in es if e.tail in X and e.head in X]
            lines.append(f" tight_{lab(label)}: {_sum(inside)} = {len(X) - 1}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def lp_rows(text: str) -> list[str]:
    """Constraint and bound rows of an emitted LP, in order."""
    rows, section = [], None
    for line in text.splitlines():
        s = line.strip()
        if s in ("minimize", "subject to", "bounds", "end"):
            section = s
            continue
        if s.startswith("\\") or not s:
            continue
        if section in ("subject to", "bounds"):
            rows.append(s)
    return rows
