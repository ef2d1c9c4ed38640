"""Lattice points of P_G(L), Hilbert tables and degree-1/2 generator sets."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from .errors import BudgetExceeded, StructuralError
from .graph import MarkedGraph
from .weighting import Raw, Weighting, is_member_raw

DEFAULT_BUDGET = 10**8
CACHE_ENV = "CBLOCKS_CACHE"


@dataclass(frozen=True)
class _Plan:
    order: tuple[int, ...]
    # per edge: tuple of (multiplicity at vertex, other slot edge ids)
    constraints: tuple[tuple[tuple[int, tuple[int, ...]], ...], ...]


@lru_cache(maxsize=256)
def _plan(graph: MarkedGraph) -> _Plan:
    boundary = set(graph.leaves) | set(graph.capped)
    order = tuple(sorted(range(graph.num_edges), key=lambda e: (e in boundary, e)))
    cons: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(graph.num_edges)]
    for slots in graph.slots.values():
        for e in set(slots):
            mult = slots.count(e)
            others = list(slots)
            for _ in range(mult):
                others.remove(e)
            cons[e].append((mult, tuple(others)))
    return _Plan(order, tuple(tuple(c) for c in cons))


def enumerate_raw(
    graph: MarkedGraph,
    level: int,
    upper: Sequence[int] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[Raw]:
    """All member weight tuples at ``level``, sorted lexicographically.

    ``upper`` optionally caps each edge (used when peeling a piece off a
    known element).  Edges are assigned spine first, leaves last; at each
    step the candidate range is the intersection of the level bound and
    the triangle/sum/parity window at both endpoints given what is already
    fixed, so a completed vertex is always valid.
    """
    if level < 0:
        raise StructuralError("level must be non-negative")
    plan = _plan(graph)
    n = graph.num_edges
    val = [0] * n
    done = [False] * n
    even = graph.even
    capped = graph.capped
    two_l = 2 * level
    out: list[Raw] = []
    nodes = 0

    def rec(k: int) -> None:
        nonlocal nodes
        if k == n:
            out.append(tuple(val))
            return
        e = plan.order[k]
        lo, hi = 0, level
        if e in capped:
            hi = 0
        if upper is not None and upper[e] < hi:
            hi = upper[e]
        parity = 0 if e in even else -1
        for mult, others in plan.constraints[e]:
            if mult == 2:
                h = others[0]
                if done[h]:
                    hv = val[h]
                    if hv % 2:
                        return
                    lo = max(lo, (hv + 1) // 2)
                    hi = min(hi, (two_l - hv) // 2)
            else:
                o1, o2 = others
                d1, d2 = done[o1], done[o2]
                if d1 and d2:
                    a, b = val[o1], val[o2]
                    lo = max(lo, abs(a - b))
                    hi = min(hi, a + b, two_l - a - b)
                    p = (a + b) % 2
                    if parity == -1:
                        parity = p
                    elif parity != p:
                        return
                elif d1:
                    hi = min(hi, two_l - val[o1])
                elif d2:
                    hi = min(hi, two_l - val[o2])
        if lo > hi:
            return
        step = 1
        if parity != -1:
            step = 2
            if lo % 2 != parity:
                lo += 1
        done[e] = True
        for x in range(lo, hi + 1, step):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(budget, "enumeration")
            val[e] = x
            rec(k + 1)
        done[e] = False
        val[e] = 0

    rec(0)
    out.sort()
    return out


def enumerate_level(graph: MarkedGraph, level: int, budget: int = DEFAULT_BUDGET) -> list[Weighting]:
    return [Weighting(graph, w, level) for w in enumerate_raw(graph, level, budget=budget)]


def count_level(graph: MarkedGraph, level: int, budget: int = DEFAULT_BUDGET) -> int:
    return len(enumerate_raw(graph, level, budget=budget))


def peel(w: Weighting, level: int) -> list[Weighting]:
    """Members ``u`` at ``level`` with ``w - u`` a member at ``w.level - level``."""
    rest_level = w.level - level
    found = []
    for u in enumerate_raw(w.graph, level, upper=w.weights):
        rest = tuple(a - b for a, b in zip(w.weights, u))
        if is_member_raw(w.graph, rest, rest_level):
            found.append(Weighting(w.graph, u, level))
    return found


# -- generators ------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorSet:
    """All lattice points of degree 1..max_degree, with decomposable ones flagged.

    ``redundant[i]`` is true when ``items[i]`` is a sum of two members of
    lower positive degree.  Redundant points are kept: relation checks use
    the full set.
    """

    graph: MarkedGraph
    items: tuple[Weighting, ...]
    redundant: tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.items)

    def minimal(self) -> list[Weighting]:
        return [g for g, r in zip(self.items, self.redundant) if not r]

    def of_degree(self, d: int) -> list[Weighting]:
        return [g for g in self.items if g.level == d]


def _decomposable(graph: MarkedGraph, x: Raw, level: int) -> bool:
    for i in range(1, level // 2 + 1):
        for u in enumerate_raw(graph, i, upper=x):
            rest = tuple(a - b for a, b in zip(x, u))
            if is_member_raw(graph, rest, level - i):
                return True
    return False


def generators(graph: MarkedGraph, max_degree: int = 2) -> GeneratorSet:
    items: list[Weighting] = []
    flags: list[bool] = []
    for d in range(1, max_degree + 1):
        for x in enumerate_raw(graph, d):
            items.append(Weighting(graph, x, d))
            flags.append(d > 1 and _decomposable(graph, x, d))
    return GeneratorSet(graph, tuple(items), tuple(flags))


# -- Hilbert tables --------------------------------------------------------


@dataclass
class HilbertTable:
    graph_name: str
    graph_hash: str
    rows: list[tuple[int, int]]
    timestamp: float = field(default_factory=time.time)
    params: dict = field(default_factory=dict)

    def counts(self) -> list[int]:
        return [c for _, c in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["level", "count"])
        writer.writerows(self.rows)
        return buf.getvalue()


def _cache_dir(cache_dir: str | os.PathLike | None) -> Path | None:
    if cache_dir is None:
        cache_dir = os.environ.get(CACHE_ENV)
    return Path(cache_dir) if cache_dir else None


def _count_task(args: tuple[MarkedGraph, int, int]) -> int:
    graph, level, budget = args
    return count_level(graph, level, budget)


def hilbert(
    graph: MarkedGraph,
    lmax: int,
    *,
    cache_dir: str | os.PathLike | None = None,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
) -> HilbertTable:
    """Counts ``|P_G(L)|`` for ``0 <= L <= lmax``.

    With a cache directory (argument or ``$CBLOCKS_CACHE``) each count is
    stored as ``<graph hash>_L<level>.json`` and reused.
    """
    cdir = _cache_dir(cache_dir)
    counts: dict[int, int] = {}
    if cdir is not None:
        for level in range(lmax + 1):
            path = cdir / f"{graph.digest}_L{level}.json"
            if path.exists():
                data = json.loads(path.read_text())
                if data.get("graph_hash") == graph.digest:
                    counts[level] = int(data["count"])
    todo = [level for level in range(lmax + 1) if level not in counts]
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_count_task, [(graph, lv, budget) for lv in todo]))
    else:
        results = [count_level(graph, lv, budget) for lv in todo]
    for level, c in zip(todo, results):
        counts[level] = c
        if cdir is not None:
            cdir.mkdir(parents=True, exist_ok=True)
            payload = {"graph_hash": graph.digest, "level": level, "count": c}
            (cdir / f"{graph.digest}_L{level}.json").write_text(json.dumps(payload, sort_keys=True))
    return HilbertTable(
        graph_name=graph.name,
        graph_hash=graph.digest,
        rows=[(lv, counts[lv]) for lv in range(lmax + 1)],
        params={"lmax": lmax, "budget": budget},
    )
