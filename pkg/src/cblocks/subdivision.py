"""Regular subdivisions of small point configurations, in exact arithmetic."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

Point = Sequence[int]


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    m, pivots = rref(rows)
    ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis


def rank(rows: list[list[Fraction]]) -> int:
    return len(rref(rows)[1]) if rows else 0


def primitive(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to the primitive integer vector on its ray,
    first non-zero entry positive."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints] if g else ints
    first = next((x for x in ints if x), 0)
    return [-x for x in ints] if first < 0 else ints


def affine_dimension(points: Sequence[Point]) -> int:
    base = points[0]
    rows = [[Fraction(a - b) for a, b in zip(p, base)] for p in points[1:]]
    return rank(rows) if rows else 0


def affine_dependencies(points: Sequence[Point]) -> list[list[int]]:
    """Primitive integer basis of ``{c : sum c_i p_i = 0, sum c_i = 0}``."""
    dim = len(points[0])
    rows = [[Fraction(p[k]) for p in points] for k in range(dim)]
    rows.append([Fraction(1)] * len(points))
    return [primitive(v) for v in nullspace(rows)]


def _solve(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(a)
    m, pivots = rref([row + [rhs] for row, rhs in zip(a, b)])
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        return None
    return [m[i][n] for i in range(n)]


def lower_cells(points: Sequence[Point], heights: Sequence[int]) -> list[tuple[int, ...]]:
    """Maximal cells of the regular subdivision induced by ``heights``.

    Every affinely independent ``(d+1)``-subset fixes a non-vertical
    hyperplane ``h = a.p + c`` through its lifted points; it supports a lower
    facet when no lifted point lies strictly below it.  A cell is the set
    of points on such a hyperplane.  Non-simplicial cells come out whole.
    """
    d = len(points[0])
    if affine_dimension(points) != d:
        raise ValueError("configuration must be full-dimensional")
    cells: set[tuple[int, ...]] = set()
    for subset in combinations(range(len(points)), d + 1):
        a = [[Fraction(x) for x in points[i]] + [Fraction(1)] for i in subset]
        sol = _solve(a, [Fraction(heights[i]) for i in subset])
        if sol is None:
            continue
        coef, c = sol[:d], sol[d]
        on = []
        ok = True
        for j, p in enumerate(points):
            plane = sum(cf * x for cf, x in zip(coef, p)) + c
            if heights[j] < plane:
                ok = False
                break
            if heights[j] == plane:
                on.append(j)
        if ok:
            cells.add(tuple(on))
    return sorted(cells)
