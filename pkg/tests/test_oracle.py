from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings

from conftest import instances
from popbranch.errors import BudgetExceeded
from popbranch.generators import (
    complete_top_instance,
    four_cycle_instance,
    random_instance,
    star_instance,
    tight_factor_instance,
)
from popbranch.instance import augment_root, branching_from_edges, from_orders, has_cycle, parse_instance
from popbranch.oracle import (
    VoteTable,
    brute_factor,
    brute_margin,
    brute_min_factor,
    brute_min_margin,
    brute_popular,
    enumerate_branchings,
)
from popbranch.popularity import compare_branchings

DATA = Path(__file__).parent / "data"


def test_two_node_mutual_top():
    inst = from_orders({"x": ["y"], "y": ["x"]})
    bs = list(enumerate_branchings(inst))
    assert sorted(b.edges for b in bs) == [(), ("xy",), ("yx",)]
    assert sorted(b.edges for b in brute_popular(inst)) == [("xy",), ("yx",)]


def test_four_cycle_counts():
    inst = four_cycle_instance()
    assert len(list(enumerate_branchings(inst))) == 45  # of 81 parent maps
    assert brute_popular(inst) == []
    assert brute_min_margin(inst)[0] == 1
    assert brute_min_factor(inst)[0] == 2


def test_rooted_enumeration_matches():
    inst = four_cycle_instance()
    assert len(list(enumerate_branchings(augment_root(inst)))) == 45


def test_star():
    inst = star_instance()
    assert branching_from_edges(inst, ["ab", "ac"]) in brute_popular(inst)
    assert brute_min_margin(inst)[0] == 0
    assert brute_min_factor(inst)[0] <= 1


def test_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_branchings(random_instance(20, 200, "strict", 0)))
    with pytest.raises(BudgetExceeded):
        VoteTable.build(four_cycle_instance(), budget=10)


# values computed once by exhaustive enumeration and frozen here
FROZEN = [
    ("golden", lambda: parse_instance((DATA / "weak_6_12_seed42.json").read_text()), 336, 12, 0, Fraction(1)),
    ("four-cycle", four_cycle_instance, 45, 0, 1, Fraction(2)),
    ("star", star_instance, 4, 1, 0, Fraction(0)),
    ("G1", lambda: tight_factor_instance(1), 3, 2, 0, Fraction(1)),
    ("G2", lambda: tight_factor_instance(2), 45, 0, 1, Fraction(2)),
    ("complete-top-4", lambda: complete_top_instance(4), 125, 64, 0, Fraction(1)),
]


@pytest.mark.parametrize("name,make,count,popular,mu,u", FROZEN, ids=[f[0] for f in FROZEN])
def test_frozen_values(name, make, count, popular, mu, u):
    inst = make()
    vt = VoteTable.build(inst)
    assert len(vt) == count
    assert len(brute_popular(inst)) == popular
    assert brute_min_margin(inst)[0] == mu
    assert brute_min_factor(inst)[0] == u


@settings(max_examples=30)
@given(instances(max_n=4))
def test_vote_table_matches_direct_votes(inst):
    bs = list(enumerate_branchings(inst))
    assert all(not has_cycle(inst, b.parent) for b in bs)
    assert len(set(bs)) == len(bs)
    vt = VoteTable.build(inst)
    for i, b in enumerate(bs[:8]):
        worst = max(compare_branchings(inst, c, b).delta for c in bs)
        assert vt.margins[i] == worst == brute_margin(inst, b)
        ratios = []
        for c in bs:
            r = compare_branchings(inst, c, b)
            if r.for_first:
                ratios.append(Fraction(r.for_first, r.for_second) if r.for_second else float("inf"))
        assert brute_factor(inst, b) == (max(ratios) if ratios else 0)
