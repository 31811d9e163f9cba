from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import QUARTER_MIX, arb, instances
from popbranch.errors import BudgetExceeded, InfeasiblePoint
from popbranch.generators import from_orders, random_instance
from popbranch.instance import augment_root, project
from popbranch.mixed import (
    MixedConfig,
    decompose_fractional,
    delta_mixed,
    indicator,
    popular_mixed_branching,
    separate_membership,
    separate_popularity,
    solve_mixed_lp,
)
from popbranch.popularity import is_popular


def mix(rooted, parts):
    x = {}
    for edges, w in parts:
        for e, v in indicator(arb(rooted, *edges)).items():
            x[e] = x.get(e, 0) + v * w
    return x


def quarter(fc):
    return mix(fc, [(b, Fraction(1, 4)) for b in QUARTER_MIX])


def test_delta_examples(fc):
    x = quarter(fc)
    assert delta_mixed(fc, x, x) == 0
    b1 = indicator(arb(fc, *QUARTER_MIX[0]))
    assert delta_mixed(fc, x, b1) >= 0
    better = indicator(arb(fc, "dc", "ca", "ab"))
    worse = indicator(arb(fc, "ab", "ac", "cd"))
    assert delta_mixed(fc, better, worse) == 1
    assert delta_mixed(fc, worse, better) == -1


def test_membership(fc):
    assert separate_membership(fc, indicator(arb(fc, "ab", "bd"))) is None
    bad = separate_membership(fc, {})
    assert bad is not None and len(bad.items) == 1
    half = mix(fc, [(("ab", "bd"), Fraction(1, 2)), (("ca", "dc"), Fraction(1, 2))])
    assert separate_membership(fc, half) is None
    # right degrees, but nothing enters {a, b}
    cyc = {"ab": 1, "ba": 1, "dc": 1, fc.root_edge["d"]: 1}
    bad = separate_membership(fc, cyc)
    assert bad.kind == "cut" and set(bad.items) >= {"a", "b"}


def test_delta_rejects_infeasible(fc):
    with pytest.raises(InfeasiblePoint):
        delta_mixed(fc, {}, {})


def test_popularity_separation(fc, star):
    assert separate_popularity(star, indicator(arb(star, "ab", "ac"))) is None
    x = indicator(arb(fc, "ab", "ac", "cd"))
    w = separate_popularity(fc, x)
    assert w is not None and delta_mixed(fc, x, indicator(w)) <= -1
    assert separate_popularity(fc, quarter(fc)) is None


def test_mixed_examples(fc, star, single):
    m = popular_mixed_branching(star)
    assert [(b.edges, w) for b, w in m.components] == [(("ab", "ac"), 1)]
    m = popular_mixed_branching(single)
    assert [(b.edges, w) for b, w in m.components] == [((), 1)]
    m = popular_mixed_branching(fc)
    x = m.fractional(fc)
    assert sum(w for _, w in m.components) == 1
    assert separate_membership(fc, x) is None and separate_popularity(fc, x) is None
    assert all(not is_popular(fc, arb(fc, *b.edges))[0] for b, _ in m.components)


def test_mixed_json(fc):
    doc = popular_mixed_branching(fc).to_json()
    assert sum(Fraction(c["weight"]) for c in doc) == 1
    assert all(isinstance(c["branching"], list) for c in doc)


def test_decompose_examples(fc):
    a = arb(fc, "ab", "bd")
    m = decompose_fractional(fc, indicator(a))
    assert [(b, w) for b, w in m.components] == [(project(fc, a), 1)]
    inst = from_orders({"b": ["a"], "c": ["a", "b"]}, nodes=["a"])
    rooted = augment_root(inst)
    x = mix(rooted, [(("ab", "ac"), Fraction(1, 2)), (("ab", "bc"), Fraction(1, 2))])
    m = decompose_fractional(rooted, x)
    assert sorted((b.edges, w) for b, w in m.components) == [(("ab", "ac"), Fraction(1, 2)), (("ab", "bc"), Fraction(1, 2))]
    q = quarter(fc)
    m = decompose_fractional(fc, q)
    assert m.fractional(fc) == {k: Fraction(v) for k, v in q.items()}


def test_budget():
    rooted = augment_root(random_instance(5, 8, "strict", 3))
    with pytest.raises(BudgetExceeded):
        solve_mixed_lp(rooted, MixedConfig(max_nodes=4))


@settings(max_examples=30)
@given(instances(max_n=6))
def test_mixed_is_popular(inst):
    rooted = augment_root(inst)
    sol = solve_mixed_lp(rooted)
    assert sol.value >= 0  # only measured against the generated rows
    m = popular_mixed_branching(rooted)
    x = m.fractional(rooted)
    assert separate_membership(rooted, x) is None
    assert separate_popularity(rooted, x) is None
    assert sum(w for _, w in m.components) == 1 and all(w > 0 for _, w in m.components)
