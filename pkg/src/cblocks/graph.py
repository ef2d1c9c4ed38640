"""Marked trivalent graphs: construction, validation, gluing and splitting.

A graph here carries its boundary explicitly.  Every leaf edge ends in a
degree-1 *boundary* vertex, every other vertex is trivalent (a self-loop
counts twice), and the first Betti number is ``|E| - |V| + components``
with boundary vertices included in ``V``.

Canonical shapes
----------------
``build_gamma(g, 1)`` is a horizontal chain: a self-loop vertex on the left,
then ``g - 1`` bigons, consecutive gadgets joined by horizontal edges, and
the leaf on the far right.  Edge ids are assigned left to right::

    loop, (h1, x1, y1), (h2, x2, y2), ..., leaf

``build_gamma(0, m)`` is the caterpillar with leaves hanging off a path,
and ``build_gamma(g, n)`` for ``n >= 2`` is the chain glued to the first
leaf of the caterpillar on ``n + 1`` leaves.  ``build_gamma(g, 0)`` keeps
the chain's leaf edge but pins it to weight zero (``capped``).

Edges listed in ``even`` are restricted to even weights.  Only the
standalone bigon ``build_b2`` uses this: inside a chain both of its
outer edges are horizontal and therefore even, and the gadget semigroup
keeps that restriction.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import StructuralError

Ends = tuple[int, int]


@dataclass(frozen=True)
class MarkedGraph:
    vertices: tuple[int, ...]
    edges: tuple[Ends, ...]
    leaves: tuple[int, ...]
    even: frozenset[int] = frozenset()
    capped: frozenset[int] = frozenset()
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        self.validate()

    # -- derived structure -------------------------------------------------

    @cached_property
    def degree(self) -> dict[int, int]:
        deg = {v: 0 for v in self.vertices}
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    @cached_property
    def internal_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if self.degree[v] == 3)

    @cached_property
    def boundary_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if self.degree[v] == 1)

    @cached_property
    def slots(self) -> dict[int, tuple[int, int, int]]:
        """Incident edge ids of each internal vertex; a self-loop appears twice."""
        inc: dict[int, list[int]] = {v: [] for v in self.internal_vertices}
        for e, (a, b) in enumerate(self.edges):
            if a in inc:
                inc[a].append(e)
            if b in inc:
                inc[b].append(e)
        return {v: tuple(es) for v, es in inc.items()}  # type: ignore[misc]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def components(self) -> int:
        return len(_components(self.vertices, self.edges))

    @cached_property
    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + self.components

    @property
    def is_tree(self) -> bool:
        return self.betti == 0

    @cached_property
    def digest(self) -> str:
        """Content hash of the structure; the name does not participate."""
        payload = to_json(self)
        payload.pop("name")
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def boundary_end(self, e: int) -> int:
        a, b = self.edges[e]
        if self.degree[a] == 1:
            return a
        if self.degree[b] == 1:
            return b
        raise StructuralError(f"edge {e} has no boundary endpoint")

    def inner_end(self, e: int) -> int:
        a, b = self.edges[e]
        return b if a == self.boundary_end(e) else a

    def same_skeleton(self, other: MarkedGraph) -> bool:
        return self.vertices == other.vertices and self.edges == other.edges

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        if tuple(self.vertices) != tuple(range(len(self.vertices))):
            raise StructuralError("vertex ids must be dense integers 0..V-1")
        vset = set(self.vertices)
        for e, ends in enumerate(self.edges):
            if len(ends) != 2 or ends[0] not in vset or ends[1] not in vset:
                raise StructuralError(f"edge {e} has invalid ends {ends!r}")
        deg: dict[int, int] = {v: 0 for v in self.vertices}
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        bad = [v for v, d in deg.items() if d not in (1, 3)]
        if bad:
            raise StructuralError(f"vertices {bad} are neither trivalent nor boundary")
        boundary_edges = []
        for e, (a, b) in enumerate(self.edges):
            nb = (deg[a] == 1) + (deg[b] == 1)
            if nb == 2:
                raise StructuralError(f"edge {e} is isolated (no internal vertex)")
            if nb == 1:
                boundary_edges.append(e)
        if len(set(self.leaves)) != len(self.leaves):
            raise StructuralError("duplicate leaf ids")
        if set(self.leaves) | set(self.capped) != set(boundary_edges) or set(self.leaves) & set(self.capped):
            raise StructuralError(
                "every boundary edge must be exactly one of: a leaf, a capped edge"
            )
        n = len(self.edges)
        for tag, ids in (("even", self.even), ("capped", self.capped)):
            if any(not 0 <= e < n for e in ids):
                raise StructuralError(f"{tag} references unknown edge ids")


def _components(vertices: Iterable[int], edges: Iterable[Ends]) -> list[set[int]]:
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen: set[int] = set()
    comps = []
    for v in adj:
        if v in seen:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    queue.append(y)
        seen |= comp
        comps.append(comp)
    return comps


class _Builder:
    def __init__(self) -> None:
        self.nv = 0
        self.edges: list[Ends] = []

    def vertex(self) -> int:
        self.nv += 1
        return self.nv - 1

    def edge(self, a: int, b: int) -> int:
        self.edges.append((a, b))
        return len(self.edges) - 1

    def graph(self, leaves, name, even=(), capped=()) -> MarkedGraph:
        return MarkedGraph(
            vertices=tuple(range(self.nv)),
            edges=tuple(self.edges),
            leaves=tuple(leaves),
            even=frozenset(even),
            capped=frozenset(capped),
            name=name,
        )


# -- builders --------------------------------------------------------------


def _chain(g: int) -> MarkedGraph:
    bld = _Builder()
    prev = bld.vertex()
    bld.edge(prev, prev)
    for _ in range(g - 1):
        u = bld.vertex()
        w = bld.vertex()
        bld.edge(prev, u)
        bld.edge(u, w)
        bld.edge(u, w)
        prev = w
    leaf = bld.edge(prev, bld.vertex())
    return bld.graph([leaf], name=f"gamma({g},1)")


def _caterpillar(m: int) -> MarkedGraph:
    bld = _Builder()
    p0 = bld.vertex()
    c = bld.vertex()
    leaves = [bld.edge(p0, c), bld.edge(c, bld.vertex())]
    for _ in range(m - 3):
        nxt = bld.vertex()
        bld.edge(c, nxt)
        c = nxt
        leaves.append(bld.edge(c, bld.vertex()))
    leaves.append(bld.edge(c, bld.vertex()))
    return bld.graph(leaves, name=f"gamma(0,{m})")


def build_b1() -> MarkedGraph:
    """One vertex carrying a self-loop and a leaf; edges ``(loop, leaf)``."""
    g = _chain(1)
    return MarkedGraph(g.vertices, g.edges, g.leaves, name="b1")


def build_b2() -> MarkedGraph:
    """Bigon gadget with edges ``(left leaf, upper, lower, right leaf)``.

    Both leaves are restricted to even weights.
    """
    bld = _Builder()
    left, u, w, right = (bld.vertex() for _ in range(4))
    l_leaf = bld.edge(left, u)
    bld.edge(u, w)
    bld.edge(u, w)
    r_leaf = bld.edge(w, right)
    return bld.graph([l_leaf, r_leaf], name="b2", even=[l_leaf, r_leaf])


def build_gamma(g: int, n: int) -> MarkedGraph:
    if g < 0 or n < 0:
        raise StructuralError("g and n must be non-negative")
    if g == 0:
        if n < 3:
            raise StructuralError(f"no trivalent tree with {n} leaves")
        return _caterpillar(n)
    chain = _chain(g)
    if n == 1:
        return chain
    if n == 0:
        leaf = chain.leaves[0]
        return MarkedGraph(
            chain.vertices, chain.edges, (), capped=frozenset([leaf]), name=f"gamma({g},0)"
        )
    glued = glue(chain, chain.leaves[0], _caterpillar(n + 1), 0)
    return MarkedGraph(
        glued.vertices, glued.edges, glued.leaves, glued.even, glued.capped, name=f"gamma({g},{n})"
    )


def build_theta_leaf() -> MarkedGraph:
    """A genus-2 graph with one leaf that is not of the form Gamma(2, 1).

    Vertex ``c`` carries the leaf and is joined to ``a`` and ``b``, which are
    joined to each other by two parallel edges.  No self-loop.
    """
    bld = _Builder()
    p, c, a, b = (bld.vertex() for _ in range(4))
    leaf = bld.edge(p, c)
    bld.edge(c, a)
    bld.edge(c, b)
    bld.edge(a, b)
    bld.edge(a, b)
    return bld.graph([leaf], name="theta_leaf")


@dataclass(frozen=True)
class ChainLayout:
    """Edge and vertex ids of the gadgets of ``build_gamma(g, 1)``."""

    loop_edge: int
    loop_vertex: int
    bigons: tuple[tuple[int, int, int], ...]  # (horizontal, upper, lower)
    bigon_vertices: tuple[tuple[int, int], ...]
    leaf: int

    @property
    def horizontal(self) -> tuple[int, ...]:
        return tuple(h for h, _, _ in self.bigons) + (self.leaf,)


def chain_layout(g: int) -> ChainLayout:
    if g < 1:
        raise StructuralError("chain layout needs g >= 1")
    bigons = tuple((1 + 3 * k, 2 + 3 * k, 3 + 3 * k) for k in range(g - 1))
    verts = tuple((1 + 2 * k, 2 + 2 * k) for k in range(g - 1))
    return ChainLayout(0, 0, bigons, verts, 3 * g - 2)


_BUILDER_RE = re.compile(r"^\s*gamma\s*[(:]\s*(\d+)\s*,\s*(\d+)\s*\)?\s*$")


def build_named(spec: str) -> MarkedGraph:
    """Builder lookup used by the CLI: ``b1``, ``b2``, ``theta_leaf``,
    ``gamma(G,N)`` or ``gamma:G,N``."""
    key = spec.strip().lower()
    if key == "b1":
        return build_b1()
    if key == "b2":
        return build_b2()
    if key == "theta_leaf":
        return build_theta_leaf()
    m = _BUILDER_RE.match(key)
    if m:
        return build_gamma(int(m.group(1)), int(m.group(2)))
    raise StructuralError(f"unknown graph builder {spec!r}")


def identify(graph: MarkedGraph) -> tuple[str, int, int] | None:
    """Recognise the canonical family a graph belongs to.

    Returns ``("tree", 0, n)`` for any trivalent tree, ``("b2", 1, 2)`` for
    the bigon gadget, ``("gamma", g, n)`` for an exact canonical
    ``build_gamma(g, n)``, or ``None``.
    """
    if graph.is_tree:
        return ("tree", 0, len(graph.leaves))
    if graph == build_b2():
        return ("b2", 1, 2)
    g, n = graph.betti, len(graph.leaves)
    try:
        if graph == build_gamma(g, n):
            return ("gamma", g, n)
    except StructuralError:
        pass
    return None


# -- gluing and splitting --------------------------------------------------


def glue(a: MarkedGraph, leaf_a: int, b: MarkedGraph, leaf_b: int) -> MarkedGraph:
    """Identify leaf ``leaf_a`` of ``a`` with leaf ``leaf_b`` of ``b``.

    The shared edge keeps id ``leaf_a``; ``b``'s other edges follow ``a``'s
    edges in their original order.  The shared edge is even-tagged if
    either leaf was.
    """
    if leaf_a not in a.leaves:
        raise StructuralError(f"edge {leaf_a} is not a leaf of {a.name or 'a'}")
    if leaf_b not in b.leaves:
        raise StructuralError(f"edge {leaf_b} is not a leaf of {b.name or 'b'}")
    outer_a, inner_a = a.boundary_end(leaf_a), a.inner_end(leaf_a)
    outer_b, inner_b = b.boundary_end(leaf_b), b.inner_end(leaf_b)

    vmap_a = {v: i for i, v in enumerate(v for v in a.vertices if v != outer_a)}
    off = len(vmap_a)
    vmap_b = {v: off + i for i, v in enumerate(v for v in b.vertices if v != outer_b)}

    edges = []
    for e, (x, y) in enumerate(a.edges):
        if e == leaf_a:
            edges.append((vmap_a[inner_a], vmap_b[inner_b]))
        else:
            edges.append((vmap_a[x], vmap_a[y]))
    emap_b = {}
    for e, (x, y) in enumerate(b.edges):
        if e == leaf_b:
            continue
        emap_b[e] = len(edges)
        edges.append((vmap_b[x], vmap_b[y]))

    leaves = [e for e in a.leaves if e != leaf_a] + [emap_b[e] for e in b.leaves if e != leaf_b]
    even = set(a.even) | {emap_b[e] for e in b.even if e != leaf_b}
    if leaf_b in b.even:
        even.add(leaf_a)
    capped = set(a.capped) | {emap_b[e] for e in b.capped}
    return MarkedGraph(
        vertices=tuple(range(len(vmap_a) + len(vmap_b))),
        edges=tuple(edges),
        leaves=tuple(leaves),
        even=frozenset(even),
        capped=frozenset(capped),
        name=f"glue({a.name},{b.name})",
    )


@dataclass(frozen=True)
class SplitDescriptor:
    """Result of cutting a graph along a bridge.

    ``left_edges[i]`` is the original id of edge ``i`` of ``left`` (same for
    the right side); the shared edge appears on both sides as a new leaf.
    """

    left: MarkedGraph
    right: MarkedGraph
    shared_edge: int
    left_leaf: int
    right_leaf: int
    left_edges: tuple[int, ...]
    right_edges: tuple[int, ...]
    graph: MarkedGraph = field(compare=False, repr=False, default=None)  # type: ignore[assignment]

    def reassemble(self) -> MarkedGraph:
        return glue(self.left, self.left_leaf, self.right, self.right_leaf)


def split_along_edge(graph: MarkedGraph, e: int) -> SplitDescriptor:
    """Cut ``graph`` at the bridge ``e``; inverse of :func:`glue`."""
    if not 0 <= e < graph.num_edges:
        raise StructuralError(f"unknown edge {e}")
    a, b = graph.edges[e]
    if graph.degree[a] != 3 or graph.degree[b] != 3:
        raise StructuralError(f"edge {e} is a leaf or boundary edge, not an internal edge")
    rest = [ends for i, ends in enumerate(graph.edges) if i != e]
    side_a = next(c for c in _components(graph.vertices, rest) if a in c)
    if b in side_a:
        raise StructuralError(f"edge {e} lies on a cycle; removing it does not disconnect")

    def half(comp: set[int], new_first: bool, keep_end: int):
        verts = sorted(comp)
        new_v = len(verts)
        if new_first:
            vmap = {v: i + 1 for i, v in enumerate(verts)}
            new_v = 0
        else:
            vmap = {v: i for i, v in enumerate(verts)}
        orig_edges = [i for i, (x, _) in enumerate(graph.edges) if i == e or (i != e and x in comp)]
        emap = {old: new for new, old in enumerate(orig_edges)}
        edges = []
        for old in orig_edges:
            if old == e:
                edges.append((new_v, vmap[keep_end]) if new_first else (vmap[keep_end], new_v))
            else:
                x, y = graph.edges[old]
                edges.append((vmap[x], vmap[y]))
        own_leaves = [emap[i] for i in graph.leaves if i in emap]
        leaves = [emap[e]] + own_leaves if new_first else own_leaves + [emap[e]]
        sub = MarkedGraph(
            vertices=tuple(range(len(verts) + 1)),
            edges=tuple(edges),
            leaves=tuple(leaves),
            even=frozenset(emap[i] for i in graph.even if i in emap),
            capped=frozenset(emap[i] for i in graph.capped if i in emap),
            name=f"{graph.name}|{'right' if new_first else 'left'}@{e}",
        )
        return sub, emap[e], tuple(orig_edges)

    side_b = set(graph.vertices) - side_a
    left, lleaf, ledges = half(side_a, False, a)
    right, rleaf, redges = half(side_b, True, b)
    return SplitDescriptor(left, right, e, lleaf, rleaf, ledges, redges, graph)


def isomorphic(a: MarkedGraph, b: MarkedGraph) -> bool:
    """Exact multigraph isomorphism (self-loops and parallel edges respected).

    Ignores leaf order and edge tags.  Intended for small graphs.
    """
    import networkx as nx

    def nxg(g: MarkedGraph):
        m = nx.MultiGraph()
        m.add_nodes_from(g.vertices)
        m.add_edges_from(g.edges)
        return m

    return nx.is_isomorphic(nxg(a), nxg(b))


# -- serialization ---------------------------------------------------------


def to_json(graph: MarkedGraph) -> dict:
    out = {
        "name": graph.name,
        "vertices": list(graph.vertices),
        "edges": [{"id": i, "ends": list(ends)} for i, ends in enumerate(graph.edges)],
        "leaves": list(graph.leaves),
    }
    if graph.even:
        out["even"] = sorted(graph.even)
    if graph.capped:
        out["capped"] = sorted(graph.capped)
    return out


def from_json(data: dict) -> MarkedGraph:
    try:
        edges = sorted(data["edges"], key=lambda d: d["id"])
        if [d["id"] for d in edges] != list(range(len(edges))):
            raise StructuralError("edge ids must be dense integers 0..E-1")
        return MarkedGraph(
            vertices=tuple(data["vertices"]),
            edges=tuple((int(d["ends"][0]), int(d["ends"][1])) for d in edges),
            leaves=tuple(data["leaves"]),
            even=frozenset(data.get("even", ())),
            capped=frozenset(data.get("capped", ())),
            name=data.get("name", ""),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise StructuralError(f"malformed graph JSON: {exc}") from exc

def edge_automorphisms(graph: MarkedGraph, limit: int = 1000) -> list[tuple[int, ...]]:
    """Edge permutations induced by automorphisms that respect edge tags.

    Each edge becomes a node of a bipartite incidence graph, so parallel
    edges and self-loops are told apart.  ``perm[e]`` is the image of ``e``.
    """
    import networkx as nx
    from networkx.algorithms.isomorphism import GraphMatcher

    inc = nx.Graph()
    for v in graph.vertices:
        inc.add_node(("v", v), kind="v")
    for e, (a, b) in enumerate(graph.edges):
        tag = "capped" if e in graph.capped else "even" if e in graph.even else "edge"
        inc.add_node(("e", e), kind=tag)
        if a == b:
            # a loop gets a private midpoint so the incidence graph stays simple
            inc.add_node(("m", e), kind="mid")
            inc.add_edge(("e", e), ("v", a))
            inc.add_edge(("e", e), ("m", e))
        else:
            inc.add_edge(("e", e), ("v", a))
            inc.add_edge(("e", e), ("v", b))
    gm = GraphMatcher(inc, inc, node_match=lambda x, y: x["kind"] == y["kind"])
    out = []
    for iso in gm.isomorphisms_iter():
        out.append(tuple(iso[("e", e)][1] for e in range(graph.num_edges)))
        if len(out) >= limit:
            break
    return sorted(set(out))
