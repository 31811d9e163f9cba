import json

import pytest
from hypothesis import given

from conftest import instances
from popbranch.errors import IdClash, InstanceSyntaxError, SemanticError, WrongHead
from popbranch.generators import four_cycle_instance, reduce_3dm, single_node_instance
from popbranch.instance import (
    PARTIAL_ORDER,
    STRICT_RANKING,
    WEAK_RANKING,
    Pref,
    augment_root,
    from_orders,
    make_instance,
    parse_instance,
    serialize_instance,
    validate,
)

FOUR_CYCLE_DOC = {
    "nodes": ["a", "b", "c", "d"],
    "edges": [
        {"id": i, "tail": i[0], "head": i[1]}
        for i in ["ab", "ba", "ac", "ca", "bd", "db", "cd", "dc"]
    ],
    "preferences": {
        "a": {"kind": "weak", "ranks": {"ba": 1, "ca": 2}},
        "b": {"kind": "weak", "ranks": {"ab": 1, "db": 2}},
        "c": {"kind": "weak", "ranks": {"dc": 1, "ac": 2}},
        "d": {"kind": "weak", "ranks": {"cd": 1, "bd": 2}},
    },
}


def test_parse_four_cycle():
    inst = parse_instance(json.dumps(FOUR_CYCLE_DOC))
    assert inst.n == 4 and len(inst.edges) == 8
    assert inst == four_cycle_instance() or serialize_instance(inst) == serialize_instance(four_cycle_instance())


def test_parse_single_node():
    inst = parse_instance('{"nodes": ["v"], "edges": []}')
    assert inst.nodes == ("v",) and inst.edges == ()
    assert validate(inst).ok


def test_rank_for_foreign_edge():
    doc = {
        "nodes": ["a", "b"],
        "edges": [{"id": "ab", "tail": "a", "head": "b"}, {"id": "ba", "tail": "b", "head": "a"}],
        "preferences": {"b": {"kind": "weak", "ranks": {"ab": 1, "ba": 2}}},
    }
    with pytest.raises(SemanticError):
        parse_instance(json.dumps(doc))


@pytest.mark.parametrize("text", ["{", "[]", '{"edges": []}', '{"nodes": ["a"], "preferences": {"a": {"kind": "x"}}}'])
def test_syntax_errors(text):
    with pytest.raises(InstanceSyntaxError):
        parse_instance(text)


def test_dangling_endpoint():
    doc = {"nodes": ["a"], "edges": [{"id": "e", "tail": "z", "head": "a"}]}
    with pytest.raises(SemanticError):
        parse_instance(json.dumps(doc))


def test_classifications():
    assert validate(four_cycle_instance()).classification == STRICT_RANKING
    tied = from_orders({"c": [("a", "b")]})
    assert validate(tied).classification == WEAK_RANKING
    inst, _ = reduce_3dm(*_toy_3dm())
    assert validate(inst).classification == PARTIAL_ORDER


def test_cyclic_dominance():
    inst = make_instance(
        ["a", "b", "c"],
        [("e1", "a", "c"), ("e2", "b", "c")],
        {"c": [("e1", "e2"), ("e2", "e1")]},
    )
    report = validate(inst)
    assert not report.ok
    assert any("cyclic" in kind for kind, _ in report.violations)


def test_augment_four_cycle():
    rooted = augment_root(four_cycle_instance())
    assert len(rooted.digraph.nodes) == 5
    assert len(rooted.edges) == 12
    for v in rooted.nodes:
        re = rooted.root_edge[v]
        assert rooted.edge[re].tail == rooted.root
        for e in rooted.in_edges[v]:
            if e != re:
                assert rooted.compare(v, e, re) == Pref.PREFERS_FIRST


def test_augment_single_node():
    rooted = augment_root(single_node_instance())
    assert [(e.tail, e.head) for e in rooted.edges] == [("r", "v")]


def test_augment_keeps_incomparability():
    inst = make_instance(["a", "b", "c", "v"], [("av", "a", "v"), ("bv", "b", "v"), ("cv", "c", "v")], {"v": []})
    rooted = augment_root(inst)
    rv = rooted.root_edge["v"]
    for e in ("av", "bv", "cv"):
        assert rooted.compare("v", e, rv) == Pref.PREFERS_FIRST
        for f in ("av", "bv", "cv"):
            if e != f:
                assert rooted.compare("v", e, f) == Pref.NEITHER


def test_augment_root_name_clash():
    inst = from_orders({"r": ["a"]})
    with pytest.raises(IdClash):
        augment_root(inst)
    assert augment_root(inst, "r0").root == "r0"


def test_compare():
    inst = four_cycle_instance()
    assert inst.compare("a", "ba", "ca") == Pref.PREFERS_FIRST
    assert inst.compare("a", "ca", "ba") == Pref.PREFERS_SECOND
    assert inst.compare("a", "ba", "ba") == Pref.NEITHER
    with pytest.raises(WrongHead):
        inst.compare("b", "ba", "ca")


def test_compare_3dm_root_edges():
    inst, red = reduce_3dm(*_toy_3dm())
    x = red.X[0] + "_l"
    assert inst.compare(x, f"r1_{red.X[0]}", f"r2_{red.X[0]}") == Pref.NEITHER


@given(instances(max_n=5))
def test_serialisation_round_trip(inst):
    text = serialize_instance(inst)
    again = parse_instance(text)
    assert serialize_instance(again) == text
    assert validate(again).classification == validate(inst).classification


@given(instances(max_n=5))
def test_root_edges_least_preferred(inst):
    rooted = augment_root(inst)
    for v in rooted.nodes:
        assert rooted.in_edges[v].count(rooted.root_edge[v]) == 1
        assert rooted.worse[rooted.root_edge[v]] == frozenset()
        assert set(rooted.better[rooted.root_edge[v]]) == set(rooted.in_edges[v]) - {rooted.root_edge[v]}


def _toy_3dm():
    X, Y, Z = ["x1", "x2", "x3", "x4"], ["y1", "y2", "y3", "y4"], ["z1", "z2", "z3", "z4"]
    T = [("x1", "y1", "z1"), ("x2", "y2", "z2"), ("x3", "y3", "z3"), ("x4", "y4", "z4"), ("x1", "y2", "z3")]
    return X, Y, Z, T
