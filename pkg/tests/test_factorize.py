import itertools
from collections import Counter

import pytest

from cblocks.enumeration import enumerate_level, enumerate_raw, generators
from cblocks.errors import StructuralError
from cblocks.factorize import (
    LoopGenerator,
    extract_odd,
    factor_b1,
    factor_b2,
    factor_even,
    factor_full,
    factor_glued,
    factor_search,
    factor_tree_degree1,
    loop_generators,
    pair_up,
    supports_constructive,
)
from cblocks.graph import build_b1, build_b2, build_gamma, build_theta_leaf, chain_layout
from cblocks.weighting import Weighting, is_member, zero_level


def _multiset(f):
    return Counter((p.weights, p.level) for p in f.parts)


def _level1_pairs(w):
    """Every way to write ``w`` (level 2) as two level-1 members."""
    pts = enumerate_raw(w.graph, 1)
    return {
        tuple(sorted((a, b)))
        for a, b in itertools.combinations_with_replacement(pts, 2)
        if tuple(x + y for x, y in zip(a, b)) == w.weights
    }


# -- trees -----------------------------------------------------------------


def test_tree_tripod_example():
    w = Weighting(build_gamma(0, 3), (2, 1, 1), 2)
    f = factor_tree_degree1(w)
    assert _multiset(f) == Counter({((1, 1, 0), 1): 1, ((1, 0, 1), 1): 1})
    assert tuple(sorted(p.weights for p in f.parts)) in _level1_pairs(w)


def test_tree_caterpillar_example():
    g = build_gamma(0, 4)
    spine = 2
    w = Weighting(g, (1, 1, 2, 1, 1), 2)
    f = factor_tree_degree1(w)
    assert all(p.weights[spine] == 1 for p in f.parts)
    assert tuple(sorted(p.weights for p in f.parts)) in _level1_pairs(w)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_tree_degree1_purity(n):
    g = build_gamma(0, n)
    for lv in range(1, 5):
        for w in enumerate_level(g, lv):
            f = factor_tree_degree1(w)
            assert f.is_valid and len(f.parts) == lv
            assert all(p.level == 1 and set(p.weights) <= {0, 1} for p in f.parts)


def test_tree_zero():
    f = factor_tree_degree1(zero_level(build_gamma(0, 3), 1))
    assert [p.weights for p in f.parts] == [(0, 0, 0)]


def test_tree_rejects_cycles():
    with pytest.raises(StructuralError):
        factor_tree_degree1(zero_level(build_b1(), 1))


# -- gadgets ---------------------------------------------------------------


def test_b1_examples():
    b1 = build_b1()
    assert _multiset(factor_b1(Weighting(b1, (1, 2), 2))) == Counter({((1, 2), 2): 1})
    assert _multiset(factor_b1(Weighting(b1, (2, 0), 2))) == Counter({((1, 0), 1): 2})
    # (1,2)_2 is not a sum of two level-1 points
    assert not _level1_pairs(Weighting(b1, (1, 2), 2))


def test_b1_closed_form_everywhere():
    b1 = build_b1()
    for lv in range(1, 8):
        for w in enumerate_level(b1, lv):
            loop, leaf = w.weights
            f = factor_b1(w)
            want = Counter({((1, 2), 2): leaf // 2, ((1, 0), 1): loop - leaf // 2, ((0, 0), 1): lv - loop - leaf // 2})
            assert _multiset(f) == +want


def test_b2_example():
    f = factor_b2(Weighting(build_b2(), (2, 3, 1, 2), 3))
    assert _multiset(f) == Counter({((2, 2, 0, 2), 2): 1, ((0, 1, 1, 0), 1): 1})


def test_b2_all_members():
    for lv in range(1, 7):
        for w in enumerate_level(build_b2(), lv):
            f = factor_b2(w)
            assert f.is_valid and set(f.degrees) <= {1, 2}


# -- chains ----------------------------------------------------------------


def test_loop_generators():
    g = build_gamma(3, 1)
    gens = loop_generators(3)
    assert [o.kind for o in gens] == ["o1", "o2", "o2"]
    lay = chain_layout(3)
    o1 = gens[0].weighting(g, 3)
    assert o1.weights[lay.loop_edge] == 1 and sum(o1.weights) == 1
    _, x, y = lay.bigons[1]
    o2 = LoopGenerator("o2", 2).weighting(g, 3)
    assert o2.weights[x] == o2.weights[y] == 1 and sum(o2.weights) == 2
    assert all(is_member(o.weighting(g, 3)) for o in gens)


def test_extract_odd_examples():
    b1 = build_gamma(1, 1)
    u, rest = extract_odd(Weighting(b1, (2, 2), 3))
    assert u.weights == (1, 0) and rest == Weighting(b1, (1, 2), 2)
    u, rest = extract_odd(Weighting(b1, (1, 0), 3))
    assert u.weights == (0, 0) and rest == Weighting(b1, (1, 0), 2)
    u, rest = extract_odd(zero_level(b1, 1))
    assert u == zero_level(b1, 1) and rest == zero_level(b1, 0)
    with pytest.raises(StructuralError):
        extract_odd(zero_level(b1, 2))


@pytest.mark.parametrize("g", [1, 2, 3])
def test_extract_odd_rest_is_member(g):
    graph = build_gamma(g, 1)
    for lv in (1, 3, 5) if g < 3 else (1, 3):
        for w in enumerate_level(graph, lv):
            u, rest = extract_odd(w)
            assert u.level == 1 and is_member(u) and is_member(rest) and rest.level == lv - 1


def test_factor_even_doubled_loops():
    g = build_gamma(2, 1)
    lay = chain_layout(2)
    w = [0] * g.num_edges
    w[lay.loop_edge] = 2
    _, x, y = lay.bigons[0]
    w[x] = w[y] = 2
    f = factor_even(Weighting(g, tuple(w), 4))
    assert len(f.parts) == 2 and f.parts[0] == f.parts[1] and f.parts[0].level == 2


@pytest.mark.parametrize("g", [1, 2, 3])
def test_factor_even_level2_parts(g):
    graph = build_gamma(g, 1)
    for lv in (2, 4):
        for w in enumerate_level(graph, lv):
            f = factor_even(w)
            assert f.is_valid and f.degrees == [2] * (lv // 2)


def test_factor_even_zero():
    f = factor_even(zero_level(build_gamma(2, 1), 4))
    assert [p for p in f.parts] == [zero_level(build_gamma(2, 1), 2)] * 2


def test_glued_gamma12():
    for lv in range(1, 5):
        for w in enumerate_level(build_gamma(1, 2), lv):
            assert factor_glued(w).is_valid


def test_glued_closed_graph():
    g = build_gamma(2, 0)
    leaf = chain_layout(2).leaf
    for lv in range(1, 5):
        for w in enumerate_level(g, lv):
            f = factor_glued(w)
            assert f.is_valid and all(p.weights[leaf] == 0 for p in f.parts)


def test_glued_zero():
    f = factor_glued(zero_level(build_gamma(1, 2), 2))
    assert sum(p.level for p in f.parts) == 2 and all(set(p.weights) == {0} for p in f.parts)


def test_pair_up():
    g = build_gamma(0, 3)
    parts = [Weighting(g, (1, 1, 0), 1), Weighting(g, (1, 0, 1), 1)]
    (paired,) = pair_up(parts)
    assert paired == Weighting(g, (2, 1, 1), 2)


# -- dispatch and oracle ---------------------------------------------------


@pytest.mark.parametrize(
    "graph,lmax",
    [(build_b1(), 5), (build_b2(), 5), (build_gamma(1, 2), 4), (build_gamma(2, 1), 4), (build_gamma(3, 1), 3), (build_gamma(1, 3), 3), (build_gamma(2, 2), 3)],
    ids=lambda x: getattr(x, "name", str(x)),
)
def test_full_matches_search(graph, lmax):
    gens = generators(graph, 2).items
    for lv in range(1, lmax + 1):
        for w in enumerate_level(graph, lv):
            f = factor_full(w)
            assert f.is_valid and set(f.degrees) <= {1, 2}
            assert factor_search(w, gens) is not None


def test_full_rejects_non_chain():
    assert not supports_constructive(build_theta_leaf())
    with pytest.raises(StructuralError):
        factor_full(zero_level(build_theta_leaf(), 1))


def test_search_none_without_degree2():
    b1 = build_b1()
    level1 = generators(b1, 1).items
    assert factor_search(Weighting(b1, (1, 2), 2), level1) is None


def test_search_single_generator():
    w = Weighting(build_b2(), (2, 1, 1, 2), 2)
    f = factor_search(w, [w])
    assert f.parts == (w,)


def test_search_never_none_on_b1_chain():
    g = build_gamma(1, 1)
    gens = generators(g, 2).items
    for lv in range(1, 5):
        for w in enumerate_level(g, lv):
            assert factor_search(w, gens).is_valid
