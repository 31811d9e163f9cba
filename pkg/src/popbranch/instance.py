"""Preference-labelled digraphs, root augmentation and branchings.

Node and edge identifiers are opaque strings.  Every node ranks its
incoming *edges* (not in-neighbours), so parallel edges are allowed.
Iteration order is always lexicographic so that every algorithm built on
top of this module is reproducible.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Optional

from .errors import IdClash, InstanceSyntaxError, SemanticError, WrongHead

WEAK = "weak"
PARTIAL = "partial"

STRICT_RANKING = "strict ranking"
WEAK_RANKING = "weak ranking"
PARTIAL_ORDER = "partial order"
_GENERALITY = {STRICT_RANKING: 0, WEAK_RANKING: 1, PARTIAL_ORDER: 2}


class Pref(enum.IntEnum):
    """Outcome of comparing two edges at their common head.

    The integer value doubles as the vote of the head node.
    """

    PREFERS_FIRST = 1
    NEITHER = 0
    PREFERS_SECOND = -1


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    tail: str
    head: str


def transitive_closure(pairs: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    succ: dict[str, set[str]] = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
        succ.setdefault(b, set())
    closed = {a: set(bs) for a, bs in succ.items()}
    # Warshall; relations are per node so this stays small
    for k in sorted(closed):
        for i in closed:
            if k in closed[i]:
                closed[i] |= closed[k]
    return frozenset((a, b) for a, bs in closed.items() for b in bs)


@dataclass(frozen=True)
class PreferenceRelation:
    """Strict preferences of one node over its incoming edges.

    ``dominates`` always holds the transitively closed set of
    ``(better, worse)`` pairs, whichever way the relation was given.
    """

    kind: str
    ranks: Optional[Mapping[str, int]] = None
    dominates: frozenset = frozenset()

    @classmethod
    def weak(cls, ranks: Mapping[str, int]) -> "PreferenceRelation":
        ranks = dict(ranks)
        pairs = frozenset(
            (e, f) for e in ranks for f in ranks
            if isinstance(ranks[e], int) and isinstance(ranks[f], int) and ranks[e] < ranks[f]
        )
        return cls(WEAK, ranks, pairs)

    @classmethod
    def partial(cls, pairs: Iterable[tuple[str, str]]) -> "PreferenceRelation":
        return cls(PARTIAL, None, transitive_closure(tuple(p) for p in pairs))

    @property
    def mentioned(self) -> set[str]:
        if self.kind == WEAK:
            return set(self.ranks)
        return {e for pair in self.dominates for e in pair}

    def classify(self, edge_ids: Iterable[str]) -> str:
        edge_ids = sorted(edge_ids)
        if self.kind == WEAK:
            values = [self.ranks.get(e) for e in edge_ids]
            return STRICT_RANKING if len(set(values)) == len(values) else WEAK_RANKING
        dom = self.dominates

        def indiff(e, f):
            return (e, f) not in dom and (f, e) not in dom

        if all(not indiff(e, f) for e, f in product(edge_ids, repeat=2) if e != f):
            return STRICT_RANKING
        for e, f, g in product(edge_ids, repeat=3):
            if e != g and e != f and f != g and indiff(e, f) and indiff(f, g) and not indiff(e, g):
                return PARTIAL_ORDER
        return WEAK_RANKING


@dataclass(frozen=True)
class Instance:
    """A digraph whose nodes hold preferences over their incoming edges.

    The constructor only normalises ordering; use :func:`validate` (or
    :func:`parse_instance`, which calls it) to check the invariants.
    """

    nodes: tuple
    edges: tuple
    prefs: Mapping[str, PreferenceRelation] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        object.__setattr__(self, "prefs", dict(self.prefs))

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def in_edges(self) -> dict[str, tuple[str, ...]]:
        ins: dict[str, list[str]] = {v: [] for v in self.nodes}
        for e in self.edges:
            ins.setdefault(e.head, []).append(e.id)
        return {v: tuple(ids) for v, ids in ins.items()}

    @cached_property
    def out_edges(self) -> dict[str, tuple[str, ...]]:
        outs: dict[str, list[str]] = {v: [] for v in self.nodes}
        for e in self.edges:
            outs.setdefault(e.tail, []).append(e.id)
        return {v: tuple(ids) for v, ids in outs.items()}

    @cached_property
    def better(self) -> dict[str, frozenset]:
        """Edge id -> ids of the edges its head strictly prefers to it."""
        out: dict[str, set] = {e.id: set() for e in self.edges}
        for v, rel in self.prefs.items():
            for b, w in rel.dominates:
                if w in out and b != w:
                    out[w].add(b)
        return {e: frozenset(s) for e, s in out.items()}

    @cached_property
    def worse(self) -> dict[str, frozenset]:
        out: dict[str, set] = {e.id: set() for e in self.edges}
        for w, bs in self.better.items():
            for b in bs:
                out[b].add(w)
        return {e: frozenset(s) for e, s in out.items()}

    @property
    def n(self) -> int:
        return len(self.nodes)

    def compare(self, v: str, e: str, f: str) -> Pref:
        if self.edge[e].head != v or self.edge[f].head != v:
            raise WrongHead(f"edges {e!r} and {f!r} must both enter {v!r}")
        return _cmp(self.better, e, f)

    @cached_property
    def classification(self) -> str:
        return validate(self).classification


def _cmp(better: Mapping[str, frozenset], e: Optional[str], f: Optional[str]) -> Pref:
    # None stands for "no incoming edge", the worst possible outcome
    if e == f:
        return Pref.NEITHER
    if f is None:
        return Pref.PREFERS_FIRST
    if e is None:
        return Pref.PREFERS_SECOND
    if f in better[e]:
        return Pref.PREFERS_SECOND
    if e in better[f]:
        return Pref.PREFERS_FIRST
    return Pref.NEITHER


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    classification: str = STRICT_RANKING
    per_node: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def is_weak(self) -> bool:
        return self.classification in (STRICT_RANKING, WEAK_RANKING)

    @property
    def is_strict(self) -> bool:
        return self.classification == STRICT_RANKING


def validate(inst: Instance) -> ValidationReport:
    """Check every instance invariant and classify the preference relations."""
    report = ValidationReport()
    bad = report.violations
    node_set = set(inst.nodes)
    if len(node_set) != len(inst.nodes):
        dup = sorted({v for v in inst.nodes if inst.nodes.count(v) > 1})
        bad.append(("duplicate node", tuple(dup)))
    seen: set[str] = set()
    for e in inst.edges:
        if e.id in seen:
            bad.append(("duplicate edge id", (e.id,)))
        seen.add(e.id)
        for end in (e.tail, e.head):
            if end not in node_set:
                bad.append(("dangling edge endpoint", (e.id, end)))
        if e.tail == e.head:
            bad.append(("self-loop", (e.id,)))
    for v in sorted(inst.prefs):
        rel = inst.prefs[v]
        if v not in node_set:
            bad.append(("preferences for unknown node", (v,)))
            continue
        incoming = set(inst.in_edges.get(v, ()))
        for e in sorted(rel.mentioned):
            if e not in inst.edge:
                bad.append(("unknown edge in preferences", (v, e)))
            elif e not in incoming:
                bad.append(("rank for non-incoming edge", (v, e)))
        if rel.kind == WEAK:
            for e in sorted(incoming - set(rel.ranks)):
                bad.append(("unranked incoming edge", (v, e)))
            for e, k in sorted(rel.ranks.items()):
                if not isinstance(k, int) or isinstance(k, bool) or k < 1:
                    bad.append(("rank not a positive integer", (v, e)))
        elif rel.kind == PARTIAL:
            loops = sorted(a for a, b in rel.dominates if a == b)
            if loops:
                bad.append(("cyclic dominance", (v, *loops)))
        else:
            bad.append(("unknown preference kind", (v, rel.kind)))
    for v in inst.nodes:
        if inst.in_edges.get(v) and v not in inst.prefs:
            bad.append(("missing preferences", (v,)))

    worst = STRICT_RANKING
    for v in inst.nodes:
        rel = inst.prefs.get(v)
        if rel is None:
            cls = STRICT_RANKING if len(inst.in_edges.get(v, ())) <= 1 else WEAK_RANKING
        elif any(a == b for a, b in rel.dominates):
            cls = PARTIAL_ORDER
        else:
            cls = rel.classify(inst.in_edges.get(v, ()))
        report.per_node[v] = cls
        if _GENERALITY[cls] > _GENERALITY[worst]:
            worst = cls
    report.classification = worst
    return report


# -- serialisation -----------------------------------------------------------

def instance_to_dict(inst: Instance) -> dict:
    prefs = {}
    for v in sorted(inst.prefs):
        rel = inst.prefs[v]
        if rel.kind == WEAK:
            prefs[v] = {"kind": WEAK, "ranks": {e: rel.ranks[e] for e in sorted(rel.ranks)}}
        else:
            prefs[v] = {"kind": PARTIAL, "dominates": [list(p) for p in sorted(rel.dominates)]}
    return {
        "nodes": list(inst.nodes),
        "edges": [{"head": e.head, "id": e.id, "tail": e.tail} for e in inst.edges],
        "preferences": prefs,
    }


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), sort_keys=True, indent=1)


def instance_from_dict(doc) -> Instance:
    """Build (without validating) an instance from a decoded JSON document."""
    try:
        nodes = [str(v) for v in doc["nodes"]]
        edges = [Edge(str(e["id"]), str(e["tail"]), str(e["head"])) for e in doc.get("edges", [])]
        prefs = {}
        for v, spec in doc.get("preferences", {}).items():
            kind = spec["kind"]
            if kind == WEAK:
                prefs[str(v)] = PreferenceRelation.weak({str(e): k for e, k in spec["ranks"].items()})
            elif kind == PARTIAL:
                pairs = []
                for pair in spec.get("dominates", []):
                    if len(pair) != 2:
                        raise InstanceSyntaxError(f"dominance entry {pair!r} is not a pair")
                    pairs.append((str(pair[0]), str(pair[1])))
                prefs[str(v)] = PreferenceRelation.partial(pairs)
            else:
                raise InstanceSyntaxError(f"unknown preference kind {kind!r} for node {v!r}")
    except (KeyError, TypeError, AttributeError) as exc:
        raise InstanceSyntaxError(f"malformed instance document: {exc!r}") from exc
    return Instance(tuple(nodes), tuple(edges), prefs)


def parse_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceSyntaxError(str(exc)) from exc
    if not isinstance(doc, dict):
        raise InstanceSyntaxError("instance document must be a JSON object")
    inst = instance_from_dict(doc)
    report = validate(inst)
    if not report.ok:
        msg = "; ".join(f"{kind}: {', '.join(ids)}" for kind, ids in report.violations)
        raise SemanticError(msg, report.violations)
    return inst


def make_instance(nodes, edges, prefs) -> Instance:
    """Convenience constructor: ``edges`` as (id, tail, head) triples and
    ``prefs`` mapping node -> ranks dict (weak) or list of pairs (partial)."""
    rels = {}
    for v, p in prefs.items():
        if isinstance(p, PreferenceRelation):
            rels[v] = p
        elif isinstance(p, Mapping):
            rels[v] = PreferenceRelation.weak(p)
        else:
            rels[v] = PreferenceRelation.partial(p)
    return Instance(tuple(nodes), tuple(Edge(*e) for e in edges), rels)


def from_orders(orders: Mapping[str, list], nodes=None) -> Instance:
    """Simple graph from per-node rankings of in-neighbours.

    ``orders[v]`` lists v's in-neighbours best first; an inner list or
    tuple groups tied neighbours.  Edge ids are ``"<tail><head>"`` when
    all ids are single characters and ``"<tail>-<head>"`` otherwise.
    """
    all_nodes = set(nodes or ()) | set(orders)
    for ranking in orders.values():
        for group in ranking:
            all_nodes.update([group] if isinstance(group, str) else group)
    short = all(len(v) == 1 for v in all_nodes)
    edges, prefs = [], {}
    for v, ranking in orders.items():
        ranks = {}
        for k, group in enumerate(ranking, start=1):
            for u in [group] if isinstance(group, str) else group:
                eid = f"{u}{v}" if short else f"{u}-{v}"
                edges.append((eid, u, v))
                ranks[eid] = k
        if ranks:
            prefs[v] = ranks
    return make_instance(sorted(all_nodes), edges, prefs)


# -- rooted instances ----------------------------------------------------------

@dataclass(frozen=True)
class RootedInstance:
    """The digraph D: an instance plus a root ``r`` with in-degree 0.

    ``digraph`` holds D itself (nodes V and r).  ``nodes`` and ``n`` refer
    to V only.  For augmented instances every v in V has exactly one root
    edge, ranked strictly below every other edge into v.
    """

    base: Instance
    root: str
    digraph: Instance
    augmented: bool = True

    @cached_property
    def nodes(self) -> tuple:
        return tuple(v for v in self.digraph.nodes if v != self.root)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def edges(self) -> tuple:
        return self.digraph.edges

    @property
    def edge(self) -> dict[str, Edge]:
        return self.digraph.edge

    @property
    def in_edges(self):
        return self.digraph.in_edges

    @property
    def out_edges(self):
        return self.digraph.out_edges

    @property
    def better(self):
        return self.digraph.better

    @property
    def worse(self):
        return self.digraph.worse

    @property
    def prefs(self):
        return self.digraph.prefs

    def compare(self, v: str, e: str, f: str) -> Pref:
        return self.digraph.compare(v, e, f)

    @cached_property
    def classification(self) -> str:
        return validate(self.digraph).classification

    @cached_property
    def root_edges(self) -> tuple[str, ...]:
        return self.digraph.out_edges.get(self.root, ())

    @cached_property
    def root_edge(self) -> dict[str, str]:
        """Canonical root edge per node: lexicographically first among the
        undominated edges from r."""
        out: dict[str, str] = {}
        for eid in self.root_edges:
            e = self.edge[eid]
            from_root = [f for f in self.in_edges[e.head] if self.edge[f].tail == self.root]
            if not (self.better[eid] & set(from_root)) and e.head not in out:
                out[e.head] = eid
        return out


def augment_root(inst: Instance, root: str = "r") -> RootedInstance:
    """Add a dummy root with one least-preferred edge into every node."""
    if isinstance(inst, RootedInstance):
        raise SemanticError("instance is already rooted; augmenting twice is not allowed")
    if root in inst.nodes:
        raise IdClash(f"root id {root!r} collides with an existing node; pass another root name")
    new_edges = [Edge(f"{root}->{v}", root, v) for v in inst.nodes]
    taken = set(inst.edge)
    for e in new_edges:
        if e.id in taken:
            raise IdClash(f"root edge id {e.id!r} collides with an existing edge")
    prefs = dict(inst.prefs)
    for v, re in zip(inst.nodes, new_edges):
        incoming = inst.in_edges.get(v, ())
        rel = prefs.get(v)
        if rel is None:
            prefs[v] = PreferenceRelation.weak({**{e: 1 for e in incoming}, re.id: 2 if incoming else 1})
        elif rel.kind == WEAK:
            worst = max(rel.ranks.values(), default=0)
            prefs[v] = PreferenceRelation.weak({**rel.ranks, re.id: worst + 1})
        else:
            prefs[v] = PreferenceRelation(
                PARTIAL, None, rel.dominates | {(e, re.id) for e in incoming}
            )
    digraph = Instance(inst.nodes + (root,), inst.edges + tuple(new_edges), prefs)
    return RootedInstance(inst, root, digraph, augmented=True)


def root_at(inst: Instance, root: str) -> RootedInstance:
    """View an instance that already contains a suitable root node as D.

    The root must have in-degree 0 and an edge into every other node.
    Used for constructions that define their own root edges (several
    parallel root edges, partially ordered against other edges).
    """
    if root not in inst.nodes:
        raise SemanticError(f"unknown root {root!r}")
    if inst.in_edges.get(root):
        raise SemanticError(f"root {root!r} has incoming edges")
    reached = {inst.edge[e].head for e in inst.out_edges.get(root, ())}
    missing = [v for v in inst.nodes if v != root and v not in reached]
    if missing:
        raise SemanticError(f"root {root!r} has no edge into {missing}")
    return RootedInstance(inst, root, inst, augmented=False)


# -- branchings ----------------------------------------------------------------

@dataclass(frozen=True)
class Branching:
    """Parent map: node -> id of its incoming edge, or None for a tree root."""

    parent: Mapping[str, Optional[str]]

    @property
    def edges(self) -> tuple[str, ...]:
        return tuple(sorted(e for e in self.parent.values() if e is not None))

    def __hash__(self):
        return hash(tuple(sorted(self.parent.items(), key=lambda kv: kv[0])))

    def __eq__(self, other):
        return isinstance(other, Branching) and dict(self.parent) == dict(other.parent)


def branching_from_edges(inst, edge_ids: Iterable[str]) -> Branching:
    """Parent map over ``inst.nodes`` (V for rooted instances)."""
    parent: dict[str, Optional[str]] = {v: None for v in inst.nodes}
    for eid in edge_ids:
        head = inst.edge[eid].head
        if head not in parent:
            raise ValueError(f"edge {eid!r} enters {head!r}, which is not a node of the instance")
        if parent[head] is not None:
            raise ValueError(f"node {head!r} has two incoming edges")
        parent[head] = eid
    return Branching(parent)


def has_cycle(inst, parent: Mapping[str, Optional[str]]) -> bool:
    done: set[str] = set()
    for start in parent:
        walk: set[str] = set()
        v = start
        while v in parent and v not in done:
            if v in walk:
                return True
            walk.add(v)
            eid = parent[v]
            if eid is None:
                break
            v = inst.edge[eid].tail
        done |= walk
    return False


def is_branching(inst, b: Branching) -> bool:
    for v, eid in b.parent.items():
        if eid is not None and (eid not in inst.edge or inst.edge[eid].head != v):
            return False
    return not has_cycle(inst, b.parent)


def is_arborescence(rooted: RootedInstance, a: Branching) -> bool:
    if set(a.parent) != set(rooted.nodes):
        return False
    if any(e is None for e in a.parent.values()):
        return False
    return is_branching(rooted, a)


def to_arborescence(rooted: RootedInstance, b: Branching) -> Branching:
    """Attach every root of a branching of the base graph to r."""
    parent = {}
    for v in rooted.nodes:
        eid = b.parent.get(v)
        parent[v] = eid if eid is not None else rooted.root_edge[v]
    return Branching(parent)


def project(rooted: RootedInstance, a: Branching) -> Branching:
    """Drop r and its edges: the branching of the base graph."""
    return Branching({
        v: (None if e is not None and rooted.edge[e].tail == rooted.root else e)
        for v, e in a.parent.items()
    })


def children_map(inst, b: Branching) -> dict[str, list[str]]:
    kids: dict[str, list[str]] = {}
    for v, eid in b.parent.items():
        if eid is not None:
            kids.setdefault(inst.edge[eid].tail, []).append(v)
    return kids
