import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cblocks.enumeration import enumerate_raw
from cblocks.errors import StructuralError
from cblocks.graph import build_b1, build_b2, build_gamma, chain_layout, split_along_edge
from cblocks.weighting import (
    Weighting,
    b2_transform,
    b2_untransform,
    from_json,
    from_mapping,
    glue_weightings,
    is_member,
    is_member_raw,
    multiply,
    product,
    rehome,
    restrict,
    subtract,
    to_json,
    vertex_ok,
)

from oracles import member

SMALL = [build_b1(), build_b2(), build_gamma(0, 3), build_gamma(0, 4), build_gamma(1, 2), build_gamma(2, 1), build_gamma(1, 0)]


@pytest.mark.parametrize("graph", SMALL, ids=lambda g: g.name)
def test_membership_matches_oracle(graph):
    for level in range(4):
        for w in itertools.product(range(level + 2), repeat=graph.num_edges):
            assert is_member_raw(graph, w, level) == member(graph, w, level), (w, level)


def test_vertex_rule_examples():
    assert vertex_ok(1, 1, 0, 1)
    assert not vertex_ok(1, 1, 1, 1)  # odd sum
    assert not vertex_ok(2, 0, 0, 2)  # triangle
    assert not vertex_ok(2, 2, 2, 2)  # sum above 2L
    assert vertex_ok(2, 2, 2, 3)


def test_level_zero_is_only_zero():
    for graph in SMALL:
        assert enumerate_raw(graph, 0) == [(0,) * graph.num_edges]


def test_loop_counts_twice():
    b1 = build_b1()
    # loop weight x and leaf weight y meet at one vertex as (x, x, y)
    assert is_member(Weighting(b1, (1, 0), 1))
    assert is_member(Weighting(b1, (1, 2), 2))
    assert not is_member(Weighting(b1, (0, 1), 1))
    assert not is_member(Weighting(b1, (1, 2), 1))


def test_even_and_capped_tags():
    b2 = build_b2()
    assert not is_member(Weighting(b2, (1, 1, 0, 0), 1))
    g10 = build_gamma(1, 0)
    assert all(w[chain_layout(1).leaf] == 0 for w in enumerate_raw(g10, 4))


def test_arithmetic():
    g = build_gamma(1, 2)
    u = Weighting(g, (1, 0, 0, 0), 1)
    v = Weighting(g, (0, 0, 1, 1), 1)
    s = multiply(u, v)
    assert s.weights == (1, 0, 1, 1) and s.level == 2
    assert u + v == s
    assert subtract(s, v) == u
    assert product([u, v, u]).level == 3
    assert product([], graph=g).level == 0
    with pytest.raises(StructuralError):
        multiply(u, Weighting(build_b2(), (0, 0, 0, 0), 1))
    with pytest.raises(StructuralError):
        subtract(u, s)


def test_wrong_length_rejected():
    with pytest.raises(StructuralError):
        Weighting(build_b1(), (0, 0, 0), 1)


def test_from_mapping_checks_keys():
    g = build_b1()
    assert from_mapping(g, {"0": 1, "1": 0}, 1).weights == (1, 0)
    with pytest.raises(StructuralError):
        from_mapping(g, {"0": 1}, 1)
    with pytest.raises(StructuralError):
        from_mapping(g, {"0": 1, "1": 0, "5": 0}, 1)


def test_json_round_trip():
    g = build_gamma(2, 1)
    w = Weighting(g, (1, 2, 1, 1, 0), 3)
    assert from_json(to_json(w), g) == w
    assert to_json(w)["graph"] == "gamma(2,1)"


def test_rehome_requires_skeleton():
    w = Weighting(build_gamma(1, 2), (0,) * 4, 1)
    with pytest.raises(StructuralError):
        rehome(w, build_gamma(2, 1))


# the eight level-2 bigon points, in transformed coordinates
B2_LEVEL2 = {
    (0, 0, -1, 0), (0, 0, 0, 0), (0, 0, 1, 0), (1, 0, 0, 0),
    (0, 0, 0, 1), (1, 0, 0, 1), (1, 1, 0, 1), (1, -1, 0, 1),
}


def test_b2_transform_level2():
    pts = enumerate_raw(build_b2(), 2)
    coords = {tuple(b2_transform(Weighting(build_b2(), w, 2))) for w in pts}
    assert coords == B2_LEVEL2
    for c in B2_LEVEL2:
        assert tuple(b2_transform(b2_untransform(c))) == c


def test_b2_transform_examples():
    assert b2_untransform((0, 0, 0, 1)).weights == (0, 1, 1, 2)
    assert b2_untransform((1, 0, 0, 0)).weights == (2, 1, 1, 0)
    assert b2_transform(Weighting(build_b2(), (2, 1, 1, 2), 2)).label() == "[1,0,0,1]"
    with pytest.raises(StructuralError):
        b2_transform(Weighting(build_b2(), (0, 1, 1, 0), 1))
    with pytest.raises(StructuralError):
        b2_untransform((0, 0, -2, 0))


def test_restrict_and_glue():
    g = build_gamma(2, 2)
    w = Weighting(g, enumerate_raw(g, 3)[17], 3)
    for e in range(g.num_edges):
        try:
            s = split_along_edge(g, e)
        except StructuralError:
            continue
        left, right = restrict(w, s, "left"), restrict(w, s, "right")
        assert is_member(left) and is_member(right)
        assert left.weights[s.left_leaf] == right.weights[s.right_leaf] == w.weights[e]
        assert glue_weightings(s, left, right) == w


def test_glue_rejects_mismatch():
    g = build_gamma(1, 2)
    s = split_along_edge(g, 1)
    left = Weighting(s.left, (0, 2), 2)
    right = Weighting(s.right, (0, 0, 0), 2)
    with pytest.raises(StructuralError):
        glue_weightings(s, left, right)


def _members(graph, max_level):
    table = {lv: enumerate_raw(graph, lv) for lv in range(max_level + 1)}
    return st.integers(0, max_level).flatmap(
        lambda lv: st.sampled_from(table[lv]).map(lambda w: Weighting(graph, w, lv))
    )


@settings(max_examples=200, deadline=None)
@given(_members(build_gamma(1, 2), 4), _members(build_gamma(1, 2), 4))
def test_closure_property(u, v):
    assert is_member(u + v)


@settings(max_examples=200, deadline=None)
@given(_members(build_gamma(2, 2), 3), st.permutations(range(3)))
def test_vertex_symmetry_property(w, perm):
    for slots in w.graph.slots.values():
        vals = [w.weights[e] for e in slots]
        assert vertex_ok(*vals, w.level) == vertex_ok(*(vals[i] for i in perm), w.level)
