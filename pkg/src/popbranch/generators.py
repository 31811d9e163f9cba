"""Instance constructors: random instances, worked examples and hardness gadgets.

Gadget node names flatten sub/superscripts into strings, e.g. ``a_2_7``
for the 7th node on variable 2's cycle or ``x_u`` for an upper node.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .errors import BadFormula, BadInput, BadParams, NotAPath, Unsatisfied
from .instance import (
    Branching,
    Instance,
    PreferenceRelation,
    RootedInstance,
    branching_from_edges,
    from_orders,
    make_instance,
    root_at,
)
from .popularity import DualCertificate


# -- worked examples -----------------------------------------------------------

def four_cycle_instance() -> Instance:
    """a, b and c, d are mutual top choices; a, c and b, d mutual second choices.

    Admits no popular branching.
    """
    return from_orders({"a": ["b", "c"], "b": ["a", "d"], "c": ["d", "a"], "d": ["c", "b"]})


def star_instance() -> Instance:
    """a is the only possible parent of b and c."""
    return from_orders({"b": ["a"], "c": ["a"]}, nodes=["a"])


def single_node_instance(v: str = "v") -> Instance:
    return Instance((v,), (), {})


# -- random instances ----------------------------------------------------------

@dataclass(frozen=True)
class PrefModel:
    """How random preferences are drawn.

    ``strict``: a uniformly random ranking.  ``weak``: a random ranking cut
    into tie groups of 1..max_ties edges.  ``partial``: each pair of a
    random linear order is kept with probability ``density``, then closed
    transitively.
    """

    kind: str = "strict"
    max_ties: int = 2
    density: float = 0.5

    @classmethod
    def parse(cls, text: str) -> "PrefModel":
        """``strict``, ``weak``, ``weak:3``, ``partial`` or ``partial:0.3``."""
        kind, _, arg = text.partition(":")
        try:
            if kind == "strict" and not arg:
                return cls("strict")
            if kind == "weak":
                return cls("weak", max_ties=int(arg) if arg else 2)
            if kind == "partial":
                return cls("partial", density=float(arg) if arg else 0.5)
        except ValueError:
            pass
        raise BadParams(f"unknown preference model {text!r}")

    def check(self):
        if self.kind not in ("strict", "weak", "partial"):
            raise BadParams(f"unknown preference model {self.kind!r}")
        if self.kind == "weak" and self.max_ties < 1:
            raise BadParams("max_ties must be at least 1")
        if self.kind == "partial" and not 0 <= self.density <= 1:
            raise BadParams("density must lie in [0, 1]")


def random_instance(n: int, m: int, model="strict", seed: Optional[int] = None) -> Instance:
    """Simple digraph on ``v0..v{n-1}`` with ``m`` random edges.

    Deterministic under ``seed``.  The classification is at most as
    general as the model: a random weak ranking may come out strict.
    """
    if isinstance(model, str):
        model = PrefModel.parse(model)
    model.check()
    if n < 1 or m < 0:
        raise BadParams("need n >= 1 and m >= 0")
    if m > n * (n - 1):
        raise BadParams(f"a simple digraph on {n} nodes has at most {n * (n - 1)} edges, asked for {m}")
    rng = random.Random(seed)
    nodes = [f"v{i}" for i in range(n)]
    pairs = [(u, v) for u in nodes for v in nodes if u != v]
    chosen = sorted(rng.sample(pairs, m), key=lambda p: (int(p[1][1:]), int(p[0][1:])))
    edges = [(f"{u}-{v}", u, v) for u, v in chosen]
    into: dict[str, list[str]] = {}
    for eid, _, v in edges:
        into.setdefault(v, []).append(eid)
    prefs = {}
    for v in nodes:
        ins = into.get(v, [])
        if not ins:
            continue
        order = list(ins)
        rng.shuffle(order)
        if model.kind == "strict":
            prefs[v] = {e: k for k, e in enumerate(order, start=1)}
        elif model.kind == "weak":
            ranks, rank, i = {}, 1, 0
            while i < len(order):
                size = rng.randint(1, model.max_ties)
                for e in order[i:i + size]:
                    ranks[e] = rank
                rank += 1
                i += size
            prefs[v] = ranks
        else:
            pairs_v = [
                (order[i], order[j])
                for i in range(len(order)) for j in range(i + 1, len(order))
                if rng.random() < model.density
            ]
            prefs[v] = PreferenceRelation.partial(pairs_v)
    return make_instance(nodes, edges, prefs)


SUITE_MODELS = ("strict", "weak:2", "partial:0.5")


def random_suite(count: int, seed: int = 0, max_n: int = 6, models: Sequence[str] = SUITE_MODELS):
    """``count`` reproducible random instances with 1 <= n <= max_n.

    Models cycle through ``models``; m is drawn from [0, min(n(n-1), 3n)]
    so the exhaustive oracle stays cheap.
    """
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, max_n)
        m = rng.randint(0, min(n * (n - 1), 3 * n))
        model = models[i % len(models)]
        out.append(random_instance(n, m, model, rng.randrange(2**32)))
    return out


def disjoint_union(a: Instance, b: Instance, prefix: str = "b_") -> Instance:
    """Side-by-side copy of two instances; ``b``'s nodes and edges get ``prefix``."""
    ren = {v: prefix + v for v in b.nodes}
    edges = [(e.id, e.tail, e.head) for e in a.edges]
    edges += [(prefix + e.id, ren[e.tail], ren[e.head]) for e in b.edges]
    prefs = dict(a.prefs)
    for v, rel in b.prefs.items():
        if rel.ranks is not None:
            prefs[ren[v]] = PreferenceRelation.weak({prefix + e: k for e, k in rel.ranks.items()})
        else:
            prefs[ren[v]] = PreferenceRelation.partial((prefix + x, prefix + y) for x, y in rel.dominates)
    return make_instance(list(a.nodes) + list(ren.values()), edges, prefs)


# -- tight factor family and the complete example -------------------------------

def tight_factor_instance(k: int) -> Instance:
    """G_k on v0..v{2^k-1}: v_l is v_i's t-th choice for l = j*2^t + ((i + 2^(t-1)) mod 2^t)."""
    if k < 1:
        raise BadParams("k must be at least 1")
    n = 2 ** k
    orders = {}
    for i in range(n):
        ranking = []
        for t in range(1, k + 1):
            block = 2 ** t
            j = i // block
            ranking.append(f"v{j * block + (i + block // 2) % block}")
        orders[f"v{i}"] = ranking
    return from_orders(orders)


def complete_top_instance(n: int) -> Instance:
    """Complete digraph where every other node is a top choice (the root comes second after augmentation)."""
    if n < 2:
        raise BadParams("need at least 2 nodes")
    nodes = [f"v{i}" for i in range(n)]
    return from_orders({v: [tuple(u for u in nodes if u != v)] for v in nodes})


# -- 3-SAT gadget ----------------------------------------------------------------

def parse_dimacs(text: str) -> list[list[int]]:
    clauses, current = [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "cp%":
            continue
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError as exc:
                raise BadFormula(f"bad DIMACS token {tok!r}") from exc
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    return clauses


@dataclass(frozen=True)
class SatReduction:
    instance: Instance
    clauses: tuple
    num_vars: int

    def cycle(self, i: int) -> list[str]:
        return [f"a_{i}_{k}" for k in range(1, 10)]

    def clause_cycle(self, j: int) -> list[str]:
        return [f"c_{j}_{k}" for k in range(1, len(self.clauses[j - 1]) + 1)]

    def literal_node(self, lit: int) -> str:
        return f"t_{lit}" if lit > 0 else f"f_{-lit}"


def _cycle_orders(orders: dict, cyc: list[str], second: Sequence[str]):
    h = len(cyc)
    for k, v in enumerate(cyc):
        orders[v] = [cyc[(k - 1) % h], second[k]]


def reduce_3sat(clauses: Sequence[Sequence[int]]) -> tuple[Instance, SatReduction]:
    """Digraph with a bounded-descendant popular branching iff the formula is satisfiable."""
    clauses = tuple(tuple(int(l) for l in c) for c in clauses)
    if not clauses:
        raise BadFormula("formula has no clauses")
    occurrences: dict[int, int] = {}
    for j, c in enumerate(clauses, start=1):
        if len(c) not in (2, 3):
            raise BadFormula(f"clause {j} has width {len(c)}; widths 2 and 3 are supported")
        for lit in c:
            if lit == 0:
                raise BadFormula(f"clause {j} contains literal 0")
            occurrences[abs(lit)] = occurrences.get(abs(lit), 0) + 1
    heavy = sorted(x for x, k in occurrences.items() if k > 3)
    if heavy:
        raise BadFormula(f"variables {heavy} occur more than 3 times")
    num_vars = max(occurrences)
    red = SatReduction(None, clauses, num_vars)
    orders: dict[str, list] = {}
    nodes = []
    for i in range(1, num_vars + 1):
        cyc = red.cycle(i)
        _cycle_orders(orders, cyc, [f"t_{i}"] + [f"f_{i}"] * 8)
        nodes += cyc + [f"t_{i}", f"f_{i}"]
    for j, c in enumerate(clauses, start=1):
        cyc = red.clause_cycle(j)
        _cycle_orders(orders, cyc, [red.literal_node(lit) for lit in c])
        nodes += cyc
    inst = from_orders(orders, nodes=nodes)
    red = SatReduction(inst, clauses, num_vars)
    return inst, red


def planted_formula(num_vars: int, num_clauses: int, seed: Optional[int] = None):
    """Random formula in the gadget's format with a planted satisfying assignment.

    Clauses have width 2 or 3, every variable occurs at most 3 times and
    every clause has a literal true under the returned assignment.
    Returns ``(clauses, assignment)``.
    """
    if num_vars < 2 or num_clauses < 1 or 2 * num_clauses > 3 * num_vars:
        raise BadParams("need num_vars >= 2, num_clauses >= 1 and 2 * num_clauses <= 3 * num_vars")
    rng = random.Random(seed)
    value = {i: rng.random() < 0.5 for i in range(1, num_vars + 1)}
    left = {i: 3 for i in value}
    clauses = []
    for j in range(num_clauses):
        spare = sum(left.values()) - 2 * (num_clauses - j - 1)
        live = [x for x in value if left[x]]
        width = 3 if spare >= 3 and len(live) >= 3 and rng.random() < 0.5 else 2
        # prefer variables with many occurrences left so later clauses stay feasible
        live.sort(key=lambda x: (-left[x], rng.random()))
        vars_ = live[:width]
        for x in vars_:
            left[x] -= 1
        lits = [x if rng.random() < 0.5 else -x for x in vars_]
        if not any(value[abs(l)] == (l > 0) for l in lits):
            k = rng.randrange(len(lits))
            lits[k] = -lits[k]
        clauses.append(lits)
    return clauses, value


def assignment_to_branching(red: SatReduction, assignment) -> Branching:
    """The branching built from a satisfying assignment (variable -> bool, 1-based)."""
    if not isinstance(assignment, Mapping):
        assignment = {i: bool(v) for i, v in enumerate(assignment, start=1)}
    value = {i: bool(assignment.get(i, False)) for i in range(1, red.num_vars + 1)}
    inst = red.instance

    def eid(u, v):
        return f"{u}-{v}"

    chosen = []
    for i in range(1, red.num_vars + 1):
        cyc = red.cycle(i)
        # true: f_i enters at a_i_2; false: t_i enters at a_i_1
        entry = 1 if value[i] else 0
        source = f"f_{i}" if value[i] else f"t_{i}"
        chosen.append(eid(source, cyc[entry]))
        chosen += [eid(cyc[k - 1], cyc[k]) for k in range(9) if k != entry]
    for j, c in enumerate(red.clauses, start=1):
        k = next((k for k, lit in enumerate(c) if value[abs(lit)] == (lit > 0)), None)
        if k is None:
            raise Unsatisfied(f"clause {j} has no true literal")
        cyc = red.clause_cycle(j)
        chosen.append(eid(red.literal_node(c[k]), cyc[k]))
        chosen += [eid(cyc[q - 1], cyc[q]) for q in range(len(cyc)) if q != k]
    return branching_from_edges(inst, chosen)


# -- Hamiltonian path gadget -------------------------------------------------------

@dataclass(frozen=True)
class HamPathReduction:
    instance: Instance
    graph: Instance
    root: str
    in_neighbours: Mapping[str, tuple]
    extra: str
    augment_root: str

    def core(self, v: str) -> list[str]:
        if v == self.root:
            return [self.root]
        return [f"c_{v}_{j}" for j in range(1, len(self.in_neighbours[v]) + 1)]

    def pendant(self, v: str, i: int) -> list[str]:
        return [f"p_{v}_{i}_{j}" for j in range(1, len(self.in_neighbours[v]) + 1)]


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name += "_"
    return name


def reduce_hampath(g: Instance, root: str = "r") -> tuple[Instance, HamPathReduction]:
    """Digraph with a popular branching of out-degree <= 2 iff ``g`` has a Hamiltonian path from ``root``.

    ``g`` must have a root of in-degree 0 with an edge to every other node.
    Cycles of length 1 would be self-loops and are left out.
    """
    if root not in g.nodes:
        raise BadInput(f"root {root!r} is not a node")
    if g.in_edges.get(root):
        raise BadInput(f"root {root!r} must have in-degree 0")
    others = [v for v in g.nodes if v != root]
    tails = {v: [g.edge[e].tail for e in g.in_edges.get(v, ())] for v in others}
    for v in others:
        if root not in tails[v]:
            raise BadInput(f"root {root!r} has no edge to {v!r}")
        if len(set(tails[v])) != len(tails[v]) or v in tails[v]:
            raise BadInput(f"node {v!r} has parallel incoming edges or a loop")
    in_nb = {v: tuple(sorted(tails[v])) for v in others}
    taken = set()
    red = HamPathReduction(None, g, root, in_nb, "", "")
    for v in others:
        taken.update(red.core(v))
        for i in range(1, len(in_nb[v]) + 1):
            taken.update(red.pendant(v, i))
    if root in taken:
        raise BadInput(f"root name {root!r} clashes with a gadget node")
    taken.add(root)
    extra = _fresh(f"{root}'", taken)
    taken.add(extra)
    aug = _fresh("r0", taken)
    red = HamPathReduction(None, g, root, in_nb, extra, aug)

    orders: dict[str, list] = {extra: [root]}
    for v in others:
        d = len(in_nb[v])
        core = red.core(v)
        for j in range(d):
            ranking = [core[j - 1]] if d > 1 else []
            ranking += [red.core(in_nb[v][(j + s) % d])[0] for s in range(d)]
            orders[core[j]] = ranking
        for i in range(1, d + 1):
            pend = red.pendant(v, i)
            for j in range(d):
                orders[pend[j]] = ([pend[j - 1]] if d > 1 else []) + [core[j]]
    inst = from_orders(orders, nodes=sorted(taken))
    red = HamPathReduction(inst, g, root, in_nb, extra, aug)
    return inst, red


def planted_path_graph(n: int, extra: int = 0, seed: Optional[int] = None, root: str = "r"):
    """Digraph on ``root`` and n other nodes with a planted Hamiltonian path from ``root``.

    The root has an edge to every node; ``extra`` further random edges
    are added among the non-root nodes.  Returns ``(graph, path)``.
    """
    if n < 1 or extra < 0:
        raise BadParams("need n >= 1 and extra >= 0")
    rng = random.Random(seed)
    others = [f"u{i}" for i in range(n)]
    order = others[:]
    rng.shuffle(order)
    path = [root] + order
    pairs = {(root, v) for v in others} | set(zip(order, order[1:]))
    spare = sorted((u, v) for u in others for v in others if u != v and (u, v) not in pairs)
    pairs |= set(rng.sample(spare, min(extra, len(spare))))
    edges = [(f"{u}-{v}", u, v) for u, v in sorted(pairs)]
    # preferences play no role in the input graph; all in-edges tie
    prefs = {v: {f"{u}-{v}": 1 for u, w in pairs if w == v} for v in others}
    return make_instance([root] + others, edges, prefs), path


def hampath_to_branching(red: HamPathReduction, path: Sequence[str]) -> Branching:
    """The arborescence built from a Hamiltonian path ``root, v1, v2, ...``."""
    g = red.graph
    others = [v for v in g.nodes if v != red.root]
    path = list(path)
    if not path or path[0] != red.root or sorted(path[1:]) != sorted(others) or len(set(path)) != len(path):
        raise NotAPath("path must start at the root and visit every other node exactly once")
    for u, v in zip(path, path[1:]):
        if u not in red.in_neighbours[v]:
            raise NotAPath(f"({u}, {v}) is not an edge")

    def eid(u, v):
        return f"{u}-{v}"

    chosen = [eid(red.root, red.extra)]
    outdeg: dict[str, int] = {}

    def add(u, v):
        chosen.append(eid(u, v))
        outdeg[u] = outdeg.get(u, 0) + 1

    for u, v in zip(path, path[1:]):
        core = red.core(v)
        j = red.in_neighbours[v].index(u)
        add(red.core(u)[0], core[j])
        for q in range(len(core)):
            if q != j:
                add(core[q - 1], core[q])
    for v in others:
        core = red.core(v)
        d = len(core)
        slots = [q for q in range(d) for _ in range(2 - outdeg.get(core[q], 0))]
        for i in range(1, d + 1):
            q = slots[i - 1]
            pend = red.pendant(v, i)
            add(core[q], pend[q])
            for s in range(d):
                if s != q:
                    add(pend[s - 1], pend[s])
    return branching_from_edges(red.instance, chosen)


# -- 3-dimensional matching gadget ------------------------------------------------

@dataclass(frozen=True)
class MatchingReduction:
    instance: Instance
    X: tuple
    Y: tuple
    Z: tuple
    T: tuple
    root: str = "r"
    proof_valid: bool = field(default=False)

    @property
    def elements(self) -> tuple:
        return self.X + self.Y + self.Z

    def rooted(self) -> RootedInstance:
        return root_at(self.instance, self.root)


def parse_3dm(text: str) -> tuple:
    try:
        doc = json.loads(text)
        return (
            [str(x) for x in doc["X"]], [str(y) for y in doc["Y"]], [str(z) for z in doc["Z"]],
            [tuple(str(a) for a in t) for t in doc["T"]],
        )
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise BadInput(f"malformed 3DM document: {exc!r}") from exc


def reduce_3dm(X, Y, Z, T) -> tuple[Instance, MatchingReduction]:
    """Partial-order digraph with an arborescence of margin <= 2|X| iff T has a perfect matching.

    The returned instance contains its own root ``r``; use
    ``reduction.rooted()`` rather than adding another root.
    """
    X, Y, Z = tuple(map(str, X)), tuple(map(str, Y)), tuple(map(str, Z))
    T = tuple(tuple(map(str, t)) for t in T)
    if not (len(X) == len(Y) == len(Z)) or not X:
        raise BadInput("X, Y and Z must be non-empty and of equal size")
    elems = X + Y + Z
    if len(set(elems)) != len(elems):
        raise BadInput("X, Y and Z must be disjoint without repeats")
    for t in T:
        if len(t) != 3 or t[0] not in X or t[1] not in Y or t[2] not in Z:
            raise BadInput(f"triple {t!r} is not in X x Y x Z")
    if len(set(T)) != len(T):
        raise BadInput("repeated triple")
    covered = {a for t in T for a in t}
    missing = [a for a in elems if a not in covered]
    if missing:
        raise BadInput(f"elements {missing} are in no triple")
    root = "r"
    if any(f"{a}_{s}" == root for a in elems for s in "lu"):
        raise BadInput("element name clashes with the root")

    nodes = [root] + [f"{a}_{s}" for a in elems for s in "lu"]
    edges, prefs = [], {}
    for a in elems:
        lo, up = f"{a}_l", f"{a}_u"
        edges += [(f"d1_{a}", up, lo), (f"d2_{a}", up, lo), (f"r1_{a}", root, lo), (f"r2_{a}", root, lo)]
        prefs[lo] = [(f"d1_{a}", f"r1_{a}"), (f"d2_{a}", f"r2_{a}")]
        upper_in = {b: f"u_{b}_{a}" for b in elems if b != a}
        edges += [(eid, f"{b}_u", up) for b, eid in upper_in.items()]
        edges.append((f"r3_{a}", root, up))
        pairs = [(eid, f"r3_{a}") for eid in upper_in.values()]
        for k, t in enumerate(T):
            if a not in t:
                continue
            t1, t2 = f"t{k}_1_{a}", f"t{k}_2_{a}"
            edges += [(t1, lo, up), (t2, lo, up)]
            pairs += [(t1, eid) for b, eid in upper_in.items() if b not in t]
            pairs += [(t2, eid) for b, eid in upper_in.items() if b in t]
            pairs += [(t1, f"r3_{a}"), (t2, f"r3_{a}")]
        prefs[up] = pairs
    inst = make_instance(nodes, edges, prefs)
    return inst, MatchingReduction(inst, X, Y, Z, T, root, len(X) > 3)


def matching_to_certificate(red: MatchingReduction, M) -> tuple[Branching, DualCertificate]:
    """Arborescence and dual certificate of size 4|X| built from a perfect matching."""
    M = [tuple(map(str, t)) for t in M]
    if any(t not in red.T for t in M):
        raise BadInput("matching uses a triple outside T")
    used = [a for t in M for a in t]
    if len(M) != len(red.X) or len(set(used)) != len(used):
        raise BadInput("not a perfect 3-dimensional matching")
    rooted = red.rooted()
    chosen = [f"r1_{a}" for a in red.elements]
    sets = [frozenset([f"{a}_u"]) for a in red.elements]
    for t in M:
        k = red.T.index(t)
        chosen += [f"t{k}_1_{a}" for a in t]
        sets.append(frozenset(f"{a}_{s}" for a in t for s in "lu"))
    a = branching_from_edges(rooted, chosen)
    return a, DualCertificate(tuple(sets), a)
