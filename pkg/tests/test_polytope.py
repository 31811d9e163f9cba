import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import arb, instances
from popbranch.errors import NotWeakRanking, TooLarge
from popbranch.generators import assignment_to_branching, random_instance, reduce_3dm, reduce_3sat
from popbranch.instance import augment_root, to_arborescence
from popbranch.oracle import enumerate_branchings
from popbranch.popularity import is_popular
from popbranch.polytope import (
    build_dstar,
    emit_extended_lp,
    emit_face_lp,
    is_popular_structural,
    lp_rows,
    min_cost_popular_branching,
)

WEAK = ("strict", "weak:2", "weak:3")


def test_dstar_examples(fc, star, single):
    assert set(build_dstar(fc).edges) == {"ab", "ba", "cd", "dc", "ca", "db", "ac", "bd"}
    assert set(build_dstar(star).edges) == {"ab", "ac", star.root_edge["a"]}
    assert build_dstar(single).edges == (single.root_edge["v"],)


def test_structural_examples(star, single):
    assert is_popular_structural(star, arb(star, "ab", "ac"))
    assert not is_popular_structural(star, arb(star, "ab"))
    assert is_popular_structural(single, arb(single))


def test_min_cost_examples(fc, star):
    a, c = min_cost_popular_branching(star, {e.id: 1 for e in star.edges})
    assert c == 3 and a == arb(star, "ab", "ac")
    assert min_cost_popular_branching(fc, {e.id: 1 for e in fc.edges}) is None


def test_min_cost_sat_gadget():
    inst, red = reduce_3sat([[1, 2], [-1, -2]])
    rooted = augment_root(inst)
    a = to_arborescence(rooted, assignment_to_branching(red, {1: True, 2: False}))
    used = set(a.parent.values())
    res = min_cost_popular_branching(rooted, {e.id: 0 if e.id in used else 1 for e in rooted.edges})
    assert res is not None and res[1] == 0


def test_partial_orders_rejected():
    inst, red = reduce_3dm(["x1"], ["y1"], ["z1"], [("x1", "y1", "z1")])
    rooted = red.rooted()
    for call in (lambda: is_popular_structural(rooted, None), lambda: emit_face_lp(rooted), lambda: min_cost_popular_branching(rooted, {})):
        with pytest.raises(NotWeakRanking):
            call()


def test_face_lp_single(single):
    rows = lp_rows(emit_face_lp(single))
    assert len(rows) == 2
    assert rows[0].startswith("in_v:") and rows[1].endswith(">= 0")


def test_face_lp_star(star):
    text = emit_face_lp(star)
    rows = lp_rows(text)
    subtour = [r for r in rows if r.startswith("sub_")]
    assert len(subtour) == 4  # {a,b} {a,c} {b,c} {a,b,c}
    assert "sub_4: x_ab + x_ac <= 2" in rows
    assert "tight_a: x_ab + x_ac = 2" in rows


def test_face_lp_cutoff():
    rooted = augment_root(random_instance(17, 20, "strict", 0))
    with pytest.raises(TooLarge):
        emit_face_lp(rooted)
    assert emit_face_lp(augment_root(random_instance(5, 8, "strict", 0)), cutoff=5)


def test_extended_lp_counts(single, star):
    assert len(lp_rows(emit_extended_lp(single))) == 4
    rows = lp_rows(emit_extended_lp(star))
    n, m = 3, 3
    assert len(rows) == m * n * 2 + n + n * (n - 1) + 1 + 1


def test_extended_lp_scales_with_mn():
    for n in (5, 10, 20):
        rooted = augment_root(random_instance(n, 3 * n, "weak:2", n))
        m = len(build_dstar(rooted).edges)
        rows = len(lp_rows(emit_extended_lp(rooted)))
        assert 2 * m * n <= rows <= 2 * m * n + n * n + n + 2


def _parse_lp(text):
    """(names, rows) with rows = (coeffs, sense, rhs) for the subject-to section."""
    names, rows, section = [], [], None
    for line in text.splitlines():
        s = line.strip()
        if s in ("minimize", "subject to", "bounds", "end"):
            section = s
            continue
        if section != "subject to" or not s:
            continue
        body = s.split(":", 1)[1]
        lhs, sense, rhs = re.match(r"(.*?)\s*(<=|>=|=)\s*(-?\d+)$", body).groups()
        coeffs = {}
        for sign, var in re.findall(r"([+-]?)\s*([A-Za-z_]\w*)", lhs):
            coeffs[var] = coeffs.get(var, 0) + (-1 if sign == "-" else 1)
            if var not in names:
                names.append(var)
        rows.append((coeffs, sense, int(rhs)))
    return names, rows


@settings(max_examples=40)
@given(instances(max_n=5, models=WEAK), st.integers(0, 10**6))
def test_face_lp_optimum_matches_min_cost(inst, seed):
    np = pytest.importorskip("numpy")
    optimize = pytest.importorskip("scipy.optimize")
    rooted = augment_root(inst)
    rng = random.Random(seed)
    cost = {e.id: rng.randint(0, 5) for e in rooted.edges}
    text = emit_face_lp(rooted)
    names, rows = _parse_lp(text)
    var_edge = dict(re.findall(r"^\\ (x_\w+) = edge (\S+)", text, re.M))
    names = sorted(set(names) | set(var_edge))
    col = {v: j for j, v in enumerate(names)}
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for coeffs, sense, rhs in rows:
        row = np.zeros(len(names))
        for v, c in coeffs.items():
            row[col[v]] = c
        if sense == "=":
            A_eq.append(row), b_eq.append(rhs)
        elif sense == "<=":
            A_ub.append(row), b_ub.append(rhs)
        else:
            A_ub.append(-row), b_ub.append(-rhs)
    c = np.array([cost[var_edge[v]] for v in names], dtype=float)
    res = optimize.linprog(c, A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    exact = min_cost_popular_branching(rooted, cost)
    if exact is None:
        assert res.status == 2  # infeasible
    else:
        assert res.status == 0
        assert abs(res.fun - exact[1]) < 1e-6


@settings(max_examples=80)
@given(instances(max_n=5, models=WEAK), st.integers(0, 10**6))
def test_structural_matches_popularity(inst, seed):
    rooted = augment_root(inst)
    rng = random.Random(seed)
    cost = {e.id: rng.randint(-3, 5) for e in rooted.edges}
    best = None
    for b in enumerate_branchings(inst):
        a = to_arborescence(rooted, b)
        pop = is_popular(rooted, a)[0]
        assert is_popular_structural(rooted, a) == pop
        if pop:
            c = sum(cost[e] for e in a.parent.values())
            best = c if best is None else min(best, c)
    res = min_cost_popular_branching(rooted, cost)
    assert (res is None) == (best is None)
    if res is not None:
        a, c = res
        assert c == best and is_popular(rooted, a)[0]
