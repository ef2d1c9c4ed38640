"""Constructive factorization into degree-1 and degree-2 pieces.

Each routine follows one step of the generation argument:

* trees: peel off level-1 {0,1}-weightings one at a time;
* the self-loop gadget: a closed form (it is a free semigroup);
* the bigon gadget: greedy stripping until both parallel edges and both
  leaves balance;
* the loop chain at odd level: pull one loop generator off every gadget
  with a saturated vertex, leaving an even level;
* the loop chain at even level: cut off the last bigon, factor both sides
  into level-2 pieces and match them across the cut edge;
* chain glued to a tree: factor both sides and pair tree pieces so their
  weights on the cut edge line up.

Every public routine validates its output before returning, and raises
:class:`TheoremViolation` rather than patching anything up.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Literal, Sequence

from .errors import StructuralError, TheoremViolation
from .graph import MarkedGraph, build_b1, build_b2, build_gamma, chain_layout, identify, split_along_edge
from .search import DEFAULT_SEARCH_BUDGET, find_one
from .weighting import (
    Weighting,
    glue_weightings,
    is_member,
    multiply,
    rehome,
    restrict,
    subtract,
    zero_level,
)
from .enumeration import generators, peel

log = logging.getLogger(__name__)


def _canon(parts: Sequence[Weighting]) -> tuple[Weighting, ...]:
    return tuple(sorted(parts, key=lambda p: (p.level, p.weights)))


@dataclass(frozen=True)
class Factorization:
    target: Weighting
    parts: tuple[Weighting, ...]
    method: str = ""

    def problems(self) -> list[str]:
        t = self.target
        out = []
        if sum(p.level for p in self.parts) != t.level:
            out.append("part levels do not add up to the target level")
        total = [0] * t.graph.num_edges
        for p in self.parts:
            if p.graph is not t.graph and p.graph != t.graph:
                out.append("part on a different graph")
                continue
            if not is_member(p):
                out.append(f"part {p} is not a member")
            for e, x in enumerate(p.weights):
                total[e] += x
        if tuple(total) != t.weights:
            out.append("parts do not sum to the target edge-wise")
        return out

    @property
    def is_valid(self) -> bool:
        return not self.problems()

    @property
    def degrees(self) -> list[int]:
        return [p.level for p in self.parts]


def _checked(target: Weighting, parts: Sequence[Weighting], method: str) -> Factorization:
    fact = Factorization(target, _canon(parts), method)
    bad = fact.problems()
    if bad:
        raise TheoremViolation(f"{method} produced an invalid factorization of {target}: {bad}")
    return fact


def _require_member(w: Weighting) -> None:
    if not is_member(w):
        raise StructuralError(f"{w} is not a member of P({w.level}) on {w.graph.name}")


# -- loop generators -------------------------------------------------------


@dataclass(frozen=True)
class LoopGenerator:
    """``o1`` on the self-loop gadget (position 0) or ``o2`` on bigon ``position``."""

    kind: Literal["o1", "o2"]
    position: int

    def weighting(self, graph: MarkedGraph, g: int) -> Weighting:
        lay = chain_layout(g)
        w = [0] * graph.num_edges
        if self.kind == "o1":
            w[lay.loop_edge] = 1
        else:
            _, x, y = lay.bigons[self.position - 1]
            w[x] = w[y] = 1
        return Weighting(graph, tuple(w), 1)


def loop_generators(g: int) -> list[LoopGenerator]:
    return [LoopGenerator("o1", 0)] + [LoopGenerator("o2", k) for k in range(1, g)]


# -- trees -----------------------------------------------------------------


def factor_tree_degree1(w: Weighting) -> Factorization:
    """Split a tree weighting at level L into L level-1 {0,1}-weightings.

    Each step takes the lexicographically first level-1 point whose
    removal leaves a member one level down.
    """
    if not w.graph.is_tree:
        raise StructuralError("factor_tree_degree1 needs a tree")
    _require_member(w)
    parts = []
    rest = w
    while rest.level > 0:
        options = peel(rest, 1)
        if not options:
            log.warning("greedy tree peel stalled on %s; falling back to search", rest)
            found = factor_search(w, generators(w.graph, 1).items)
            if found is None:
                raise TheoremViolation(f"{w} has no degree-1 factorization")
            return _checked(w, found.parts, "tree-search-fallback")
        u = options[0]
        parts.append(u)
        rest = subtract(rest, u)
    return _checked(w, parts, "tree")


# -- gadgets ---------------------------------------------------------------


def factor_b1(w: Weighting) -> Factorization:
    """Closed form on the self-loop gadget ``(loop l, leaf r)`` at level L:

    ``r/2`` copies of ``(1,2)_2``, ``l - r/2`` copies of ``(1,0)_1`` and
    ``L - l - r/2`` copies of ``(0,0)_1``.
    """
    if not w.graph.same_skeleton(build_b1()):
        raise StructuralError("factor_b1 needs the self-loop gadget")
    _require_member(w)
    loop, leaf = w.weights
    g = w.graph
    half = leaf // 2
    counts = (half, loop - half, w.level - loop - half)
    if min(counts) < 0:
        raise TheoremViolation(f"negative multiplicity {counts} for {w}")
    parts = (
        [Weighting(g, (1, 2), 2)] * counts[0]
        + [Weighting(g, (1, 0), 1)] * counts[1]
        + [Weighting(g, (0, 0), 1)] * counts[2]
    )
    return _checked(w, parts, "b1")


def factor_b2(w: Weighting) -> Factorization:
    """Greedy reduction on the bigon ``(left, x, y, right)``.

    1. while ``x != y`` strip ``(2,2,0,2)_2`` (or its mirror ``(2,0,2,2)_2``);
    2. while the leaves differ strip ``(2,1,1,0)_2`` (or ``(0,1,1,2)_2``);
    3. the balanced rest ``(2a, x, x, 2a)`` is ``a`` copies of ``(2,1,1,2)_2``,
       ``x - a`` copies of ``(0,1,1,0)_1`` and zeros.
    """
    b2 = build_b2()
    if not w.graph.same_skeleton(b2):
        raise StructuralError("factor_b2 needs the bigon gadget")
    _require_member(w)
    g = w.graph
    parts: list[Weighting] = []
    rest = w

    def strip(piece: tuple[int, ...], level: int) -> None:
        nonlocal rest
        p = Weighting(g, piece, level)
        nxt = subtract(rest, p)
        if not is_member(nxt):
            raise TheoremViolation(f"stripping {p} from {rest} leaves non-member {nxt}")
        parts.append(p)
        rest = nxt

    while rest.weights[1] != rest.weights[2]:
        strip((2, 2, 0, 2) if rest.weights[1] > rest.weights[2] else (2, 0, 2, 2), 2)
    while rest.weights[0] != rest.weights[3]:
        strip((2, 1, 1, 0) if rest.weights[0] > rest.weights[3] else (0, 1, 1, 2), 2)
    a = rest.weights[0] // 2
    x = rest.weights[1]
    for _ in range(a):
        strip((2, 1, 1, 2), 2)
    for _ in range(x - a):
        strip((0, 1, 1, 0), 1)
    while rest.level:
        strip((0, 0, 0, 0), 1)
    if any(rest.weights):
        raise TheoremViolation(f"bigon reduction of {w} left {rest}")
    return _checked(w, parts, "b2")


def pair_up(parts: Sequence[Weighting]) -> list[Weighting]:
    """Merge level-1 parts into level-2 parts.

    In canonical order the first half is paired with the second half, so
    repeated pieces spread out evenly (``zero, zero, o, o`` gives two
    copies of ``zero + o`` rather than ``2 zero`` and ``2 o``).
    """
    ones = [p for p in _canon(parts) if p.level == 1]
    others = [p for p in parts if p.level != 1]
    if len(ones) % 2:
        raise StructuralError("odd number of level-1 parts cannot be paired")
    half = len(ones) // 2
    merged = [multiply(ones[i], ones[i + half]) for i in range(half)]
    return list(_canon(others + merged))


# -- the loop chain --------------------------------------------------------


def _chain_genus(graph: MarkedGraph) -> int:
    kind = identify(graph)
    if kind is None or kind[0] != "gamma" or kind[2] != 1:
        raise StructuralError(f"{graph.name or 'graph'} is not a canonical loop chain gamma(g,1)")
    return kind[1]


def extract_odd(w: Weighting) -> tuple[Weighting, Weighting]:
    """Split an odd-level chain element into a level-1 piece and the rest.

    A loop generator is taken from every gadget that has a vertex whose
    incident weights sum to twice the level (the vertex is saturated).
    """
    g = _chain_genus(w.graph)
    _require_member(w)
    if w.level % 2 == 0:
        raise StructuralError("extract_odd needs an odd level")
    lay = chain_layout(g)
    slots = w.graph.slots
    full = 2 * w.level

    def vsum(v: int) -> int:
        return sum(w.weights[e] for e in slots[v])

    u = zero_level(w.graph, 1)
    if vsum(lay.loop_vertex) == full:
        u = Weighting(w.graph, LoopGenerator("o1", 0).weighting(w.graph, g).weights, 1)
    for k, (left, right) in enumerate(lay.bigon_vertices, start=1):
        if vsum(left) == full or vsum(right) == full:
            o = LoopGenerator("o2", k).weighting(w.graph, g)
            u = Weighting(w.graph, tuple(a + b for a, b in zip(u.weights, o.weights)), 1)
    if not is_member(u):
        raise TheoremViolation(f"extracted piece {u} is not a level-1 member")
    rest = subtract(w, u)
    if not is_member(rest):
        raise TheoremViolation(f"extracting {u} from {w} leaves non-member {rest}")
    return u, rest


def factor_even(w: Weighting) -> Factorization:
    """Factor a chain element at level 2L into exactly L level-2 parts.

    For ``gamma(g, 1)`` with ``g >= 2`` the last bigon is cut off, both
    sides are factored into level-2 parts, and parts are matched by their
    weight (0 or 2) on the cut edge.
    """
    g = _chain_genus(w.graph)
    _require_member(w)
    if w.level % 2:
        raise StructuralError("factor_even needs an even level")
    if g == 1:
        return _checked(w, pair_up(factor_b1(w).parts), "even")

    lay = chain_layout(g)
    cut = lay.bigons[-1][0]
    split = split_along_edge(w.graph, cut)
    b2 = build_b2()
    alphas = factor_even(restrict(w, split, "left")).parts
    betas = pair_up(factor_b2(rehome(restrict(w, split, "right"), b2)).parts)

    by_weight_a: dict[int, list[Weighting]] = defaultdict(list)
    by_weight_b: dict[int, list[Weighting]] = defaultdict(list)
    for a in alphas:
        by_weight_a[a.weights[split.left_leaf]].append(a)
    for b in betas:
        by_weight_b[b.weights[0]].append(b)
    if {k: len(v) for k, v in by_weight_a.items()} != {k: len(v) for k, v in by_weight_b.items()}:
        raise TheoremViolation(
            f"cut-edge weights do not match for {w}: "
            f"{sorted(by_weight_a)} vs {sorted(by_weight_b)}"
        )
    parts = []
    for s in sorted(by_weight_a):
        for a, b in zip(by_weight_a[s], by_weight_b[s]):
            parts.append(glue_weightings(split, a, rehome(b, split.right)))
    return _checked(w, parts, "even")


def _factor_chain(w: Weighting) -> Factorization:
    g = _chain_genus(w.graph)
    if g == 1:
        return factor_b1(w)
    if w.level % 2:
        u, rest = extract_odd(w)
        return _checked(w, [u, *factor_even(rest).parts], "odd+even")
    return factor_even(w)


def factor_glued(w: Weighting) -> Factorization:
    """Factor on ``gamma(g, n)``, ``g >= 1``, via the cut between chain and tree."""
    kind = identify(w.graph)
    if kind is None or kind[0] != "gamma" or kind[1] < 1:
        raise StructuralError("factor_glued needs a canonical gamma(g,n) with g >= 1")
    _require_member(w)
    _, g, n = kind
    if n == 1:
        return _checked(w, _factor_chain(w).parts, "chain")
    if n == 0:
        chain = build_gamma(g, 1)
        inner = _factor_chain(rehome(w, chain))
        return _checked(w, [rehome(p, w.graph) for p in inner.parts], "capped-chain")

    split = split_along_edge(w.graph, chain_layout(g).leaf)
    left = restrict(w, split, "left")
    right = restrict(w, split, "right")
    loop_side = _factor_chain(left).parts
    tree_side = factor_tree_degree1(right).parts
    ll, rl = split.left_leaf, split.right_leaf

    alphas = [p for p in loop_side if p.level == 1]
    if any(p.weights[ll] for p in alphas):
        raise TheoremViolation("a level-1 chain piece has non-zero weight on the cut edge")
    betas_hit = [p for p in loop_side if p.level == 2 and p.weights[ll]]
    betas_free = [p for p in loop_side if p.level == 2 and not p.weights[ll]]
    etas_hit = [p for p in tree_side if p.weights[rl]]
    etas_free = [p for p in tree_side if not p.weights[rl]]
    if len(etas_hit) != 2 * len(betas_hit):
        raise TheoremViolation(
            f"{len(etas_hit)} tree pieces meet the cut edge but {len(betas_hit)} chain pieces do"
        )

    parts = []
    for i, b in enumerate(betas_hit):
        pair = multiply(etas_hit[2 * i], etas_hit[2 * i + 1])
        parts.append(glue_weightings(split, b, pair))
    free = iter(etas_free)
    for b in betas_free:
        pair = multiply(next(free), next(free))
        parts.append(glue_weightings(split, b, pair))
    for a in alphas:
        parts.append(glue_weightings(split, a, next(free)))
    if next(free, None) is not None:
        raise TheoremViolation("unmatched tree pieces left over after gluing")
    return _checked(w, parts, "glued")


def supports_constructive(graph: MarkedGraph) -> bool:
    kind = identify(graph)
    return kind is not None and (kind[0] in ("tree", "b2") or kind[1] >= 1)


def factor_full(w: Weighting) -> Factorization:
    """Dispatch to the constructive routine for the graph's family."""
    kind = identify(w.graph)
    if kind is None:
        raise StructuralError(
            f"no constructive factorization for {w.graph.name or 'this graph'}; use factor_search"
        )
    if kind[0] == "tree":
        return factor_tree_degree1(w)
    if kind[0] == "b2":
        return factor_b2(w)
    return factor_glued(w)


# -- search oracle ---------------------------------------------------------


def factor_search(
    w: Weighting,
    gens: Sequence[Weighting],
    max_parts: int | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> Factorization | None:
    """Exhaustive search for a factorization over ``gens``.

    ``None`` means no factorization exists within the generator set;
    running out of budget raises :class:`BudgetExceeded` instead.
    """
    table = [(g.weights, g.level) for g in gens]
    idx = find_one(w.graph, w.weights, w.level, table, max_parts, budget)
    if idx is None:
        return None
    return _checked(w, [gens[i] for i in idx], "search")
