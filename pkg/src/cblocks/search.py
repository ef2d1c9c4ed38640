"""Backtracking over generator multisets.

A multiset is walked in non-decreasing generator index, so each one is
visited once.  A branch survives only if the generator fits under the
remainder edge-wise (dominance) and the remainder is still a member at its
remaining level: any sum of members is a member, so a non-member
remainder can never be completed.
"""

from __future__ import annotations

from typing import Sequence

from .errors import BudgetExceeded, StructuralError
from .graph import MarkedGraph
from .weighting import Raw, is_member_raw

DEFAULT_SEARCH_BUDGET = 10**7

GenTable = Sequence[tuple[Raw, int]]


def _check_gens(gens: GenTable) -> None:
    for _, lvl in gens:
        if lvl < 1:
            raise StructuralError("generators must have positive level")


def find_one(
    graph: MarkedGraph,
    target: Raw,
    level: int,
    gens: GenTable,
    max_parts: int | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> tuple[int, ...] | None:
    """Indices (non-decreasing) of one generator multiset summing to the
    target at exactly ``level``, or ``None`` if none exists."""
    _check_gens(gens)
    n = len(gens)
    failed: set = set()
    nodes = 0
    top = max((lvl for _, lvl in gens), default=1)

    def rec(rem: Raw, lvl: int, start: int, left: int | None):
        nonlocal nodes
        if lvl == 0:
            return () if not any(rem) else None
        if left is not None and (left <= 0 or -(-lvl // top) > left):
            return None
        key = (rem, lvl, start, left)
        if key in failed:
            return None
        for i in range(start, n):
            gw, gl = gens[i]
            if gl > lvl:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(budget)
            new = tuple(a - b for a, b in zip(rem, gw))
            if min(new, default=0) < 0:
                continue
            if not is_member_raw(graph, new, lvl - gl):
                continue
            sub = rec(new, lvl - gl, i, None if left is None else left - 1)
            if sub is not None:
                return (i,) + sub
        failed.add(key)
        return None

    if not is_member_raw(graph, target, level):
        return None
    return rec(tuple(target), level, 0, max_parts)


def find_all(
    graph: MarkedGraph,
    target: Raw,
    level: int,
    gens: GenTable,
    budget: int = DEFAULT_SEARCH_BUDGET,
    memo: dict | None = None,
) -> list[tuple[int, ...]]:
    """Every generator multiset summing to the target, as sorted index
    tuples in lexicographic order.

    ``memo`` may be shared between calls that use the same ``gens``.
    """
    _check_gens(gens)
    n = len(gens)
    memo = {} if memo is None else memo
    nodes = 0

    def rec(rem: Raw, lvl: int, start: int) -> list[tuple[int, ...]]:
        nonlocal nodes
        if lvl == 0:
            return [()] if not any(rem) else []
        key = (rem, lvl, start)
        hit = memo.get(key)
        if hit is not None:
            return hit
        found: list[tuple[int, ...]] = []
        for i in range(start, n):
            gw, gl = gens[i]
            if gl > lvl:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(budget)
            new = tuple(a - b for a, b in zip(rem, gw))
            if min(new, default=0) < 0:
                continue
            if not is_member_raw(graph, new, lvl - gl):
                continue
            for tail in rec(new, lvl - gl, i):
                found.append((i,) + tail)
        memo[key] = found
        return found

    if not is_member_raw(graph, target, level):
        return []
    return rec(tuple(target), level, 0)
