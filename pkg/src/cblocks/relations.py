"""Relations among degree-1/2 generators, certified as Markov-move connectivity.

Generation of the relation ideal in degrees <= D is checked on fibers: for
an element ``w``, the factorizations of ``w`` into generators are the
nodes, and two of them are joined when one becomes the other by swapping
a sub-multiset of total degree <= D for another with the same sum.  Two
factorizations ``F``, ``G`` are one such swap apart exactly when the
degree of ``F - (F & G)`` is at most D, which is what the connectivity
check uses.
"""

from __future__ import annotations

import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .enumeration import enumerate_level, generators
from .errors import BudgetExceeded, StructuralError, TheoremViolation
from .factorize import factor_full, factor_search, supports_constructive
from .graph import MarkedGraph, build_b2
from .search import DEFAULT_SEARCH_BUDGET, find_all
from .subdivision import affine_dependencies, lower_cells
from .weighting import B2Coords, Weighting, b2_transform, b2_untransform, product

Multiset = tuple[int, ...]


def _dedup(gens: Sequence[Weighting]) -> list[Weighting]:
    seen = set()
    out = []
    for g in gens:
        key = (g.weights, g.level)
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def all_factorizations(
    w: Weighting,
    gens: Sequence[Weighting],
    dedup: bool = True,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> list[tuple[Weighting, ...]]:
    """Every multiset of ``gens`` summing to ``w`` (sum of levels included).

    With ``dedup`` repeated generators are collapsed first, so no multiset
    is reported twice.
    """
    gl = _dedup(gens) if dedup else list(gens)
    table = [(g.weights, g.level) for g in gl]
    return [tuple(gl[i] for i in idx) for idx in find_all(w.graph, w.weights, w.level, table, budget)]


# -- moves -----------------------------------------------------------------


@dataclass(frozen=True)
class MarkovMove:
    lhs: tuple[Weighting, ...]
    rhs: tuple[Weighting, ...]

    @property
    def degree(self) -> int:
        return sum(p.level for p in self.lhs)

    @property
    def value(self) -> Weighting:
        return product(self.lhs)

    def problems(self) -> list[str]:
        out = []
        if sum(p.level for p in self.rhs) != self.degree:
            out.append("sides have different degree")
        if product(self.lhs).weights != product(self.rhs).weights:
            out.append("sides have different sums")
        if Counter(_keys(self.lhs)) == Counter(_keys(self.rhs)):
            out.append("sides are the same multiset")
        return out

    def apply(self, parts: Sequence[Weighting]) -> tuple[Weighting, ...]:
        """Replace ``lhs`` inside ``parts`` by ``rhs``."""
        have = Counter(_keys(parts))
        need = Counter(_keys(self.lhs))
        if need - have:
            raise StructuralError("move's left side is not contained in the factorization")
        rest = have - need
        out = [p for p in self.rhs]
        lookup = {(p.weights, p.level): p for p in parts}
        for key, k in rest.items():
            out.extend([lookup[key]] * k)
        return tuple(sorted(out, key=lambda p: (p.level, p.weights)))

    def __str__(self) -> str:
        fmt = lambda side: " * ".join(map(str, side))  # noqa: E731
        return f"{fmt(self.lhs)}  <->  {fmt(self.rhs)}"


def _keys(parts: Sequence[Weighting]) -> list[tuple]:
    return [(p.weights, p.level) for p in parts]


def _side(parts: Sequence[Weighting]) -> tuple:
    return tuple(sorted(_keys(parts)))


def _multisets_by_degree(gens: Sequence[Weighting], max_degree: int):
    """Yield ``(index multiset, degree, sum)`` for all multisets of degree
    ``1..max_degree``."""
    n = len(gens)
    ne = gens[0].graph.num_edges if gens else 0

    def rec(start: int, deg: int, acc: tuple[int, ...], idx: tuple[int, ...]):
        if idx:
            yield idx, deg, acc
        for i in range(start, n):
            g = gens[i]
            if deg + g.level <= max_degree:
                yield from rec(i, deg + g.level, tuple(a + b for a, b in zip(acc, g.weights)), idx + (i,))

    yield from rec(0, 0, (0,) * ne, ())


def find_binomial_relations(gens: Sequence[Weighting], max_total_degree: int = 4) -> list[MarkovMove]:
    """All primitive moves of degree ``<= max_total_degree`` among ``gens``.

    Only moves whose two sides share no generator are listed (any other
    move is one of these times a common factor); each unordered pair is
    reported once, lexicographically smaller side on the left.
    """
    gl = _dedup(gens)
    groups: dict[tuple, list[Multiset]] = defaultdict(list)
    for idx, deg, acc in _multisets_by_degree(gl, max_total_degree):
        groups[(deg, acc)].append(idx)
    moves = []
    for key in sorted(groups):
        members = groups[key]
        for i in range(len(members)):
            si = set(members[i])
            for j in range(i + 1, len(members)):
                if si.isdisjoint(members[j]):
                    moves.append(
                        MarkovMove(tuple(gl[k] for k in members[i]), tuple(gl[k] for k in members[j]))
                    )
    return moves


# -- fiber connectivity ----------------------------------------------------


@dataclass
class Connectivity:
    connected: bool
    classes: list[list[int]]
    # (from, to) node pairs of a spanning forest; each is one move
    certificate: list[tuple[int, int]] = field(default_factory=list)


def move_connected(
    factorizations: Sequence[Sequence[Weighting]],
    moves_max_degree: int = 4,
) -> Connectivity:
    """Connected components of the move graph on the given factorizations."""
    k = len(factorizations)
    if k == 0:
        return Connectivity(True, [])
    keys = sorted({key for f in factorizations for key in _keys(f)})
    col = {key: i for i, key in enumerate(keys)}
    levels = np.array([key[1] for key in keys], dtype=np.int64)
    counts = np.zeros((k, len(keys)), dtype=np.int64)
    for r, f in enumerate(factorizations):
        for key in _keys(f):
            counts[r, col[key]] += 1

    label = np.full(k, -1, dtype=np.int64)
    classes: list[list[int]] = []
    cert: list[tuple[int, int]] = []
    for root in range(k):
        if label[root] >= 0:
            continue
        cid = len(classes)
        label[root] = cid
        members = [root]
        frontier = [root]
        while frontier:
            nxt = []
            for i in frontier:
                unseen = np.flatnonzero(label < 0)
                if unseen.size == 0:
                    break
                surplus = np.clip(counts[unseen] - counts[i], 0, None) @ levels
                hit = unseen[surplus <= moves_max_degree]
                label[hit] = cid
                for j in hit.tolist():
                    cert.append((i, j))
                    members.append(j)
                    nxt.append(j)
            frontier = nxt
        classes.append(sorted(members))
    return Connectivity(len(classes) == 1, classes, cert)


# -- verification drivers --------------------------------------------------


def _chunks(seq: list, jobs: int) -> list[list]:
    size = max(1, -(-len(seq) // (jobs * 4)))
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def _run(task, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return task(items)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        out = []
        for part in pool.map(task, _chunks(items, jobs)):
            out.extend(part)
        return out


@dataclass(frozen=True)
class _GenTask:
    graph: MarkedGraph
    max_degree: int
    constructive: bool
    budget: int

    def __call__(self, items: list[tuple[tuple[int, ...], int]]) -> list[dict]:
        gens = list(generators(self.graph, self.max_degree).items)
        out = []
        for weights, level in items:
            w = Weighting(self.graph, weights, level)
            rec: dict = {"level": level, "w": list(weights)}
            try:
                found = factor_search(w, gens, budget=self.budget)
                rec["search"] = "found" if found is not None else "none"
                if found is not None:
                    rec["parts"] = len(found.parts)
            except BudgetExceeded:
                rec["search"] = "budget"
            if self.constructive:
                try:
                    rec["constructive"] = "valid" if factor_full(w).is_valid else "invalid"
                except TheoremViolation as exc:
                    rec["constructive"] = "invalid"
                    rec["error"] = str(exc)
            else:
                rec["constructive"] = "n/a"
            if rec["search"] == "budget":
                rec["status"] = "budget"
            else:
                ok = rec["search"] == "found" and rec["constructive"] in ("valid", "n/a")
                rec["status"] = "pass" if ok else "fail"
            out.append(rec)
        return out


def _summary(elements: list[dict]) -> dict:
    c = Counter(e["status"] for e in elements)
    return {"total": len(elements), "pass": c["pass"], "fail": c["fail"], "budget": c["budget"]}


def _overall(summary: dict) -> str:
    if summary["fail"]:
        return "fail"
    if summary["budget"]:
        return "budget"
    return "pass"


def verify_generation(
    graph: MarkedGraph,
    lmax: int,
    max_degree: int = 2,
    *,
    constructive: bool | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
    jobs: int = 1,
    timing: bool = False,
) -> dict:
    """Check every member at levels ``1..lmax`` factors over generators of
    degree ``<= max_degree`` (search), and, where the graph has a
    constructive routine, that its output validates."""
    t0 = time.perf_counter()
    if constructive is None:
        constructive = supports_constructive(graph)
    items = [(w.weights, lv) for lv in range(1, lmax + 1) for w in enumerate_level(graph, lv)]
    elements = _run(_GenTask(graph, max_degree, constructive, budget), items, jobs)
    summary = _summary(elements)
    report = {
        "kind": "generation",
        "graph": graph.name,
        "graph_hash": graph.digest,
        "lmax": lmax,
        "max_degree": max_degree,
        "constructive": constructive,
        "summary": summary,
        "status": _overall(summary),
        "elements": elements,
    }
    if timing:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    return report


@dataclass(frozen=True)
class _RelTask:
    graph: MarkedGraph
    move_bound: int
    minimal: bool
    budget: int

    def __call__(self, items: list[tuple[tuple[int, ...], int]]) -> list[dict]:
        gs = generators(self.graph, 2)
        gens = gs.minimal() if self.minimal else list(gs.items)
        table = [(g.weights, g.level) for g in gens]
        memo: dict = {}
        out = []
        for weights, level in items:
            rec: dict = {"level": level, "w": list(weights)}
            try:
                facts = find_all(self.graph, weights, level, table, self.budget, memo)
            except BudgetExceeded:
                rec["status"] = "budget"
                out.append(rec)
                continue
            parts = [tuple(gens[i] for i in f) for f in facts]
            conn = move_connected(parts, self.move_bound)
            rec["factorizations"] = len(facts)
            rec["classes"] = len(conn.classes)
            if not facts:
                rec["status"] = "fail"
                rec["error"] = "no factorization"
            elif conn.connected:
                rec["status"] = "pass"
            else:
                rec["status"] = "fail"
                rec["disconnected"] = [[list(facts[i]) for i in cls] for cls in conn.classes]
            out.append(rec)
        return out


def verify_relation_degree(
    graph: MarkedGraph,
    total_degree_max: int,
    move_bound: int = 4,
    *,
    minimal: bool = False,
    budget: int = DEFAULT_SEARCH_BUDGET,
    jobs: int = 1,
    timing: bool = False,
) -> dict:
    """Fiber connectivity under moves of degree ``<= move_bound`` for every
    member of level ``1..total_degree_max``.

    Generators are all lattice points of degree 1 and 2 (``minimal=True``
    drops the decomposable degree-2 ones).
    """
    t0 = time.perf_counter()
    items = [(w.weights, lv) for lv in range(1, total_degree_max + 1) for w in enumerate_level(graph, lv)]
    elements = _run(_RelTask(graph, move_bound, minimal, budget), items, jobs)
    summary = _summary(elements)
    report = {
        "kind": "relations",
        "graph": graph.name,
        "graph_hash": graph.digest,
        "dmax": total_degree_max,
        "move_bound": move_bound,
        "minimal_generators": minimal,
        "summary": summary,
        "max_factorizations": max((e.get("factorizations", 0) for e in elements), default=0),
        "status": _overall(summary),
        "elements": elements,
    }
    if timing:
        report["seconds"] = round(time.perf_counter() - t0, 3)
    return report


# -- fiber profiles --------------------------------------------------------


@dataclass(frozen=True, order=True)
class FiberProfile:
    half_weight: int
    level: int

    def __post_init__(self) -> None:
        if self.half_weight < 0 or self.level < 0 or 2 * self.half_weight > self.level:
            raise TheoremViolation(f"profile {self} violates 2n <= L")


def fiber_profile(w: Weighting, shared_edge: int) -> FiberProfile:
    x = w.weights[shared_edge]
    if x % 2:
        raise StructuralError(f"shared edge {shared_edge} carries odd weight {x}")
    return FiberProfile(x // 2, w.level)


def profile_atoms(p: FiberProfile) -> tuple[int, int]:
    """Unique factorization in the profile semigroup: ``p = i*(0,1) + j*(1,2)``;
    returns ``(i, j)``."""
    return p.level - 2 * p.half_weight, p.half_weight


# -- the bigon's level-2 configuration -------------------------------------


SQUARE_MOVE = (((0, 0, 0, 1), (1, 0, 0, 0)), ((0, 0, 0, 0), (1, 0, 0, 1)))


def b2_quadrant_analysis() -> dict:
    """Regular subdivision of the level-2 bigon points under the squared-norm
    weights, and the relations inside each maximal cell."""
    b2 = build_b2()
    pts = enumerate_level(b2, 2)
    coords = [b2_transform(p) for p in pts]
    heights = [sum(x * x for x in c) for c in coords]
    cells = lower_cells(coords, heights)
    (l1, l2), (r1, r2) = SQUARE_MOVE
    square = {tuple(l1): 1, tuple(l2): 1, tuple(r1): -1, tuple(r2): -1}

    cell_reports = []
    all_square = True
    for cell in cells:
        deps = affine_dependencies([coords[i] for i in cell])
        binomials = []
        for d in deps:
            pos = {coords[cell[i]]: c for i, c in enumerate(d) if c > 0}
            neg = {coords[cell[i]]: -c for i, c in enumerate(d) if c < 0}
            binomials.append(
                {
                    "lhs": [B2Coords(*k).label() for k, c in sorted(pos.items()) for _ in range(c)],
                    "rhs": [B2Coords(*k).label() for k, c in sorted(neg.items()) for _ in range(c)],
                    "degree": sum(pos.values()),
                }
            )
        is_square = len(deps) == 1 and (
            {tuple(coords[cell[i]]): c for i, c in enumerate(deps[0]) if c} in (square, {k: -v for k, v in square.items()})
        )
        all_square &= is_square
        cell_reports.append(
            {
                "points": [coords[i].label() for i in cell],
                "dependencies": binomials,
                "single_square_binomial": is_square,
            }
        )

    level2 = [g for g in generators(b2, 2).items if g.level == 2]
    moves = find_binomial_relations(level2, 4)
    wanted = [(b2_untransform(l1), b2_untransform(l2)), (b2_untransform(r1), b2_untransform(r2))]
    target = {_side(wanted[0]), _side(wanted[1])}
    found = any({_side(m.lhs), _side(m.rhs)} == target for m in moves)
    covered = sorted({i for c in cells for i in c}) == list(range(len(pts)))
    ok = len(pts) == 8 and found and all_square and covered
    return {
        "kind": "b2_quadrants",
        "points": [
            {"coords": c.label(), "weighting": list(p.weights), "height": h}
            for c, p, h in zip(coords, pts, heights)
        ],
        "point_count": len(pts),
        "cells": cell_reports,
        "cell_count": len(cells),
        "cells_cover_all_points": covered,
        "every_cell_single_square_binomial": all_square,
        "square_move_found": found,
        "status": "pass" if ok else "fail",
    }
