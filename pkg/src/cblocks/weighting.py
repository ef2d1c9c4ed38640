"""Graded semigroup elements: integer edge weightings at a level.

A weighting ``w`` at level ``L`` is a member when at every trivalent vertex
with incident weights ``(a, b, c)`` (a self-loop contributing twice)

* ``a + b + c <= 2L`` and ``a + b + c`` is even,
* ``|a - b| <= c <= a + b`` (equivalently, symmetric in the three entries),

every edge weight lies in ``[0, L]``, even-tagged edges carry even weights
and capped edges carry zero.  Python integers are unbounded, so sums never
overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

from .errors import StructuralError
from .graph import MarkedGraph, SplitDescriptor, build_b2

Raw = tuple[int, ...]


@dataclass(frozen=True)
class Weighting:
    graph: MarkedGraph
    weights: Raw
    level: int

    def __post_init__(self) -> None:
        if len(self.weights) != self.graph.num_edges:
            raise StructuralError(
                f"weighting has {len(self.weights)} entries, graph has {self.graph.num_edges} edges"
            )
        if self.level < 0:
            raise StructuralError("level must be non-negative")

    def __getitem__(self, e: int) -> int:
        return self.weights[e]

    def __add__(self, other: Weighting) -> Weighting:
        return multiply(self, other)

    def __str__(self) -> str:
        return f"({','.join(map(str, self.weights))})_{self.level}"


def vertex_ok(a: int, b: int, c: int, level: int) -> bool:
    s = a + b + c
    return s <= 2 * level and s % 2 == 0 and a <= b + c and b <= a + c and c <= a + b


def is_member_raw(graph: MarkedGraph, weights: Sequence[int], level: int) -> bool:
    """Membership test on a bare weight tuple; the hot path of every search."""
    for x in weights:
        if x < 0 or x > level:
            return False
    for e in graph.even:
        if weights[e] % 2:
            return False
    for e in graph.capped:
        if weights[e]:
            return False
    for i, j, k in graph.slots.values():
        if not vertex_ok(weights[i], weights[j], weights[k], level):
            return False
    return True


def is_member(w: Weighting) -> bool:
    return is_member_raw(w.graph, w.weights, w.level)


def from_mapping(graph: MarkedGraph, mapping: dict, level: int) -> Weighting:
    """Build a weighting from an ``{edge_id: weight}`` map (keys may be strings)."""
    try:
        keyed = {int(k): int(v) for k, v in mapping.items()}
    except (TypeError, ValueError) as exc:
        raise StructuralError(f"non-integer edge key or weight: {exc}") from exc
    expected = set(range(graph.num_edges))
    if set(keyed) != expected:
        missing = sorted(expected - set(keyed))
        extra = sorted(set(keyed) - expected)
        raise StructuralError(f"edge keys mismatch: missing {missing}, extra {extra}")
    return Weighting(graph, tuple(keyed[e] for e in range(graph.num_edges)), level)


def zero_level(graph: MarkedGraph, level: int) -> Weighting:
    return Weighting(graph, (0,) * graph.num_edges, level)


def _same_graph(u: Weighting, v: Weighting) -> None:
    if u.graph is not v.graph and u.graph != v.graph:
        raise StructuralError("weightings live on different graphs")


def multiply(u: Weighting, v: Weighting) -> Weighting:
    """Edge-wise sum; levels add."""
    _same_graph(u, v)
    return Weighting(u.graph, tuple(a + b for a, b in zip(u.weights, v.weights)), u.level + v.level)


def subtract(u: Weighting, v: Weighting) -> Weighting:
    _same_graph(u, v)
    if v.level > u.level:
        raise StructuralError("cannot subtract a higher level")
    return Weighting(u.graph, tuple(a - b for a, b in zip(u.weights, v.weights)), u.level - v.level)


def product(parts: Sequence[Weighting], graph: MarkedGraph | None = None) -> Weighting:
    if not parts:
        if graph is None:
            raise StructuralError("empty product needs a graph")
        return zero_level(graph, 0)
    out = parts[0]
    for p in parts[1:]:
        out = multiply(out, p)
    return out


def rehome(w: Weighting, graph: MarkedGraph) -> Weighting:
    """Move a weighting onto a graph with the identical vertex/edge skeleton."""
    if not w.graph.same_skeleton(graph):
        raise StructuralError("graphs do not share a skeleton")
    return Weighting(graph, w.weights, w.level)


Side = Literal["left", "right"]


def restrict(w: Weighting, split: SplitDescriptor, side: Side) -> Weighting:
    """Induced weighting on one half of a split; the shared edge's weight
    lands on that half's new leaf."""
    if split.graph is not None and w.graph is not split.graph and w.graph != split.graph:
        raise StructuralError("weighting is not on the split graph")
    if side == "left":
        half, ids = split.left, split.left_edges
    elif side == "right":
        half, ids = split.right, split.right_edges
    else:
        raise StructuralError(f"side must be 'left' or 'right', not {side!r}")
    return Weighting(half, tuple(w.weights[i] for i in ids), w.level)


def glue_weightings(split: SplitDescriptor, left: Weighting, right: Weighting) -> Weighting:
    """Inverse of restriction: combine halves that agree on the shared edge."""
    if left.level != right.level:
        raise StructuralError("halves must have the same level")
    if left.weights[split.left_leaf] != right.weights[split.right_leaf]:
        raise StructuralError("halves disagree on the shared edge")
    n = len(split.left_edges) + len(split.right_edges) - 1
    out = [0] * n
    for i, orig in enumerate(split.left_edges):
        out[orig] = left.weights[i]
    for i, orig in enumerate(split.right_edges):
        out[orig] = right.weights[i]
    return Weighting(split.graph, tuple(out), left.level)


# -- the bigon coordinate change ------------------------------------------


class B2Coords(NamedTuple):
    A: int
    B: int
    C: int
    D: int

    def label(self) -> str:
        return "[" + ",".join(map(str, self)) + "]"


def b2_transform(w: Weighting) -> B2Coords:
    """``(2a, x, y, 2b) -> (a, (x - y)/2, (x + y)/2 - 1, b)`` for level-2 bigon points."""
    if w.graph != build_b2():
        raise StructuralError("b2_transform needs a weighting on the bigon gadget")
    if w.level != 2:
        raise StructuralError("b2_transform is defined on level 2")
    left, x, y, right = w.weights
    if left % 2 or right % 2 or (x - y) % 2:
        raise StructuralError(f"parity violation in {w}")
    return B2Coords(left // 2, (x - y) // 2, (x + y) // 2 - 1, right // 2)


def b2_untransform(c: Sequence[int], level: int = 2) -> Weighting:
    a, bb, cc, d = c
    s = cc + 1
    w = (2 * a, s + bb, s - bb, 2 * d)
    if any(v < 0 for v in w):
        raise StructuralError(f"coordinates {tuple(c)} have no non-negative preimage")
    return Weighting(build_b2(), w, level)


# -- serialization ---------------------------------------------------------


def to_json(w: Weighting) -> dict:
    return {
        "graph": w.graph.name or w.graph.digest,
        "level": w.level,
        "w": {str(e): x for e, x in enumerate(w.weights)},
    }


def from_json(data: dict, graph: MarkedGraph) -> Weighting:
    try:
        return from_mapping(graph, data["w"], int(data["level"]))
    except KeyError as exc:
        raise StructuralError(f"malformed weighting JSON: missing {exc}") from exc
