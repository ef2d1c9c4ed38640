"""Independent reference implementations used only by the tests.

These deliberately avoid the package's planning and pruning code: they
walk the raw edge list and brute-force small boxes.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict


def incident(graph) -> dict[int, list[int]]:
    inc = defaultdict(list)
    for e, (a, b) in enumerate(graph.edges):
        inc[a].append(e)
        inc[b].append(e)
    return inc


def member(graph, w, level) -> bool:
    if len(w) != len(graph.edges) or any(x < 0 or x > level for x in w):
        return False
    if any(w[e] % 2 for e in graph.even) or any(w[e] for e in graph.capped):
        return False
    for v, es in incident(graph).items():
        if len(es) != 3:
            continue
        a, b, c = (w[e] for e in es)
        if (a + b + c) % 2 or a + b + c > 2 * level:
            return False
        if a > b + c or b > a + c or c > a + b:
            return False
    return True


def brute_points(graph, level) -> list[tuple[int, ...]]:
    return sorted(
        w for w in itertools.product(range(level + 1), repeat=len(graph.edges)) if member(graph, w, level)
    )


def pairwise_classes(factorizations, bound) -> int:
    """Number of connected components, with adjacency checked pair by pair."""

    def key(f):
        return Counter((p.weights, p.level) for p in f)

    keys = [key(f) for f in factorizations]
    parent = list(range(len(keys)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(keys)), 2):
        surplus = keys[j] - keys[i]
        if sum(k[1] * n for k, n in surplus.items()) <= bound:
            parent[find(i)] = find(j)
    return len({find(i) for i in range(len(keys))})
