"""Reproduction driver: the acceptance criteria as runnable checks.

``run_all`` executes every criterion and returns one :class:`CriterionResult`
per criterion; ``cblocks repro all`` prints them and exits non-zero if any
fails.  Wall-clock limits are part of the criteria.
"""

from __future__ import annotations

import csv
import io
import itertools
import time
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .enumeration import enumerate_level, enumerate_raw, generators
from .graph import (
    build_b1,
    build_b2,
    build_gamma,
    build_theta_leaf,
    chain_layout,
    edge_automorphisms,
    isomorphic,
    split_along_edge,
)
from .relations import (
    all_factorizations,
    fiber_profile,
    find_binomial_relations,
    profile_atoms,
    verify_generation,
    verify_relation_degree,
)
from .weighting import (
    b2_untransform,
    glue_weightings,
    is_member,
    multiply,
    restrict,
    vertex_ok,
)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    limit: float | None = None

    @property
    def within_time(self) -> bool:
        return self.limit is None or self.seconds <= self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        limit = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{status}] {self.number}. {self.name}: {self.detail} [{self.seconds:.2f}s{limit}]"


def generation_ranges():
    """(graph, lmax, max_degree) triples covered by the generation criterion."""
    out = [
        (build_b2(), 6, 2),
        (build_gamma(1, 1), 6, 2),
        (build_gamma(1, 2), 4, 2),
        (build_gamma(2, 1), 4, 2),
    ]
    out += [(build_gamma(0, n), 4, 1) for n in range(3, 7)]
    return out


def relation_ranges():
    return [
        (build_b2(), 6),
        (build_gamma(1, 1), 6),
        (build_gamma(1, 2), 6),
        (build_gamma(2, 1), 5),
    ]


@lru_cache(maxsize=None)
def _generation_reports(jobs: int = 1) -> tuple[dict, ...]:
    return tuple(verify_generation(g, lmax, deg, jobs=jobs) for g, lmax, deg in generation_ranges())


# -- criteria --------------------------------------------------------------


def c1_b2_level2_count(jobs: int = 1) -> CriterionResult:
    n = len(enumerate_level(build_b2(), 2))
    return CriterionResult(1, "|B2(2)| = 8", n == 8, f"count = {n}", limit=1.0)


def c2_level1_points(jobs: int = 1) -> CriterionResult:
    b2 = {w.weights for w in enumerate_level(build_b2(), 1)}
    b1 = {w.weights for w in enumerate_level(build_b1(), 1)}
    ok = b2 == {(0, 0, 0, 0), (0, 1, 1, 0)} and b1 == {(0, 0), (1, 0)}
    return CriterionResult(2, "B1(1) = {0, o1}, B2(1) = {0, o2}", ok, f"B1(1)={sorted(b1)} B2(1)={sorted(b2)}")


def c3_b1_freeness(jobs: int = 1) -> CriterionResult:
    b1 = build_b1()
    gens = generators(b1, 2).minimal()
    sizes = Counter()
    for lv in range(1, 7):
        for w in enumerate_level(b1, lv):
            sizes[len(all_factorizations(w, gens))] += 1
    ok = len(gens) == 3 and set(sizes) == {1}
    return CriterionResult(
        3, "B1 unique factorization (L <= 6)", ok, f"{len(gens)} minimal generators; fiber sizes {dict(sizes)}", limit=10.0
    )


def c4_generation(jobs: int = 1) -> CriterionResult:
    reports = _generation_reports(jobs)
    fails = sum(r["summary"]["fail"] + r["summary"]["budget"] for r in reports)
    total = sum(r["summary"]["total"] for r in reports)
    parts = ", ".join(f"{r['graph']}<= {r['lmax']}:{r['summary']['pass']}/{r['summary']['total']}" for r in reports)
    return CriterionResult(4, "generation in degrees 1-2", fails == 0, f"{total} elements, {fails} failures ({parts})", limit=600.0)


def c5_relations(jobs: int = 1) -> CriterionResult:
    reports = [verify_relation_degree(g, d, 4, jobs=jobs) for g, d in relation_ranges()]
    bad = sum(r["summary"]["fail"] + r["summary"]["budget"] for r in reports)
    total = sum(r["summary"]["total"] for r in reports)
    largest = max(r["max_factorizations"] for r in reports)
    return CriterionResult(
        5, "fibers connected by moves of degree <= 4", bad == 0,
        f"{total} fibers, {bad} disconnected, largest fiber {largest}", limit=1800.0,
    )


def c6_square_move(jobs: int = 1) -> CriterionResult:
    gens = [g for g in generators(build_b2(), 2).items if g.level == 2]
    moves = find_binomial_relations(gens, 4)
    lhs = sorted([b2_untransform((0, 0, 0, 1)).weights, b2_untransform((1, 0, 0, 0)).weights])
    rhs = sorted([b2_untransform((0, 0, 0, 0)).weights, b2_untransform((1, 0, 0, 1)).weights])
    want = {tuple(lhs), tuple(rhs)}
    hit = [m for m in moves if {tuple(sorted(p.weights for p in m.lhs)), tuple(sorted(p.weights for p in m.rhs))} == want]
    pulled = lhs == [(0, 1, 1, 2), (2, 1, 1, 0)] and rhs == [(0, 1, 1, 0), (2, 1, 1, 2)]
    ok = bool(hit) and pulled and all(not m.problems() for m in hit)
    detail = f"{len(moves)} moves among level-2 points; square move {'found' if hit else 'missing'}: {hit[0] if hit else '-'}"
    return CriterionResult(6, "[0001][1000] = [0000][1001] found", ok, detail)


def c7_constructive_vs_search(jobs: int = 1) -> CriterionResult:
    mismatches = 0
    total = 0
    for r in _generation_reports(jobs):
        for e in r["elements"]:
            total += 1
            if (e["constructive"] == "valid") != (e["search"] == "found"):
                mismatches += 1
    return CriterionResult(7, "constructive output exists iff search succeeds", mismatches == 0, f"{total} elements, {mismatches} mismatches")


def c8_properties(jobs: int = 1) -> CriterionResult:
    results = property_suite()
    failed = [k for k, (ok, _) in results.items() if not ok]
    detail = "; ".join(f"{k}: {msg}" for k, (_, msg) in results.items())
    return CriterionResult(8, "property suite", not failed, detail if not failed else f"FAILED {failed}: {detail}")


def c9_genus2_degree_bound(jobs: int = 1) -> CriterionResult:
    g = build_theta_leaf()
    r3 = verify_generation(g, 4, 3, constructive=False, jobs=jobs)
    r2 = verify_generation(g, 4, 2, constructive=False, jobs=jobs)
    bad = r3["summary"]["fail"] + r3["summary"]["budget"]
    return CriterionResult(
        9, "non-chain genus-2 graph generated in degree <= 3", bad == 0,
        f"{r3['summary']['total']} elements, {bad} failures (degree <= 2 alone: {r2['summary']['fail']} failures)",
    )


CRITERIA: list[Callable[..., CriterionResult]] = [
    c1_b2_level2_count,
    c2_level1_points,
    c3_b1_freeness,
    c4_generation,
    c5_relations,
    c6_square_move,
    c7_constructive_vs_search,
    c8_properties,
    c9_genus2_degree_bound,
]


def run_criterion(fn: Callable[..., CriterionResult], jobs: int = 1) -> CriterionResult:
    t0 = time.perf_counter()
    res = fn(jobs)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(jobs: int = 1) -> list[CriterionResult]:
    return [run_criterion(fn, jobs) for fn in CRITERIA]


def summary_csv(results: list[CriterionResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["criterion", "name", "status", "within_time", "detail"])
    for r in results:
        w.writerow([r.number, r.name, "pass" if r.ok else "fail", r.within_time, r.detail])
    return buf.getvalue()


# -- property suite --------------------------------------------------------


def _prop_parity() -> tuple[bool, str]:
    n = 0
    for g in (1, 2, 3):
        graph = build_gamma(g, 1)
        horiz = chain_layout(g).horizontal
        for lv in range(5):
            for w in enumerate_raw(graph, lv):
                n += 1
                if any(w[e] % 2 for e in horiz):
                    return False, f"odd horizontal edge in {w} at level {lv}"
    return True, f"{n} chain elements, all horizontal edges even"


def _prop_edge_bound() -> tuple[bool, str]:
    n = 0
    for graph, lmax, _ in generation_ranges():
        for lv in range(lmax + 1):
            for w in enumerate_raw(graph, lv):
                n += 1
                if max(w, default=0) > lv:
                    return False, f"{w} exceeds level {lv} on {graph.name}"
    return True, f"{n} elements within edge bound"


def _prop_symmetry() -> tuple[bool, str]:
    for lv in range(7):
        for a, b, c in itertools.product(range(2 * lv + 2), repeat=3):
            base = vertex_ok(a, b, c, lv)
            if any(vertex_ok(*p, lv) != base for p in itertools.permutations((a, b, c))):
                return False, f"vertex predicate not symmetric at {(a, b, c)}, L={lv}"
    n = 0
    for graph, lmax, _ in generation_ranges():
        perms = edge_automorphisms(graph)
        for lv in range(lmax + 1):
            members = set(enumerate_raw(graph, lv))
            for perm in perms:
                for w in members:
                    n += 1
                    image = [0] * len(w)
                    for e, x in enumerate(w):
                        image[perm[e]] = x
                    if tuple(image) not in members:
                        return False, f"automorphism {perm} maps member {w} of {graph.name} outside"
    return True, f"vertex predicate symmetric; {n} automorphism images stay members"


def _prop_closure() -> tuple[bool, str]:
    n = 0
    for graph, lmax, _ in generation_ranges():
        levels = {lv: enumerate_level(graph, lv) for lv in range(lmax + 1)}
        sets = {lv: {w.weights for w in ws} for lv, ws in levels.items()}
        for i in range(1, lmax):
            for j in range(i, lmax - i + 1):
                for u in levels[i]:
                    for v in levels[j]:
                        n += 1
                        s = multiply(u, v)
                        if not is_member(s) or s.weights not in sets[i + j]:
                            return False, f"{u} * {v} = {s} not in P({i + j}) on {graph.name}"
    return True, f"{n} products closed"


def _moves_for(graph, max_degree: int = 4):
    return find_binomial_relations(generators(graph, 2).items, max_degree)


def _prop_move_soundness() -> tuple[bool, str]:
    n_moves = n_apps = 0
    for graph, _ in relation_ranges():
        gens = generators(graph, 2).items
        for m in _moves_for(graph):
            n_moves += 1
            if m.problems():
                return False, f"invalid move {m}: {m.problems()}"
            # apply inside the move's own fiber and inside fibers one level-1 factor larger
            for extra in [()] + [(g,) for g in gens if g.level == 1]:
                start = tuple(m.lhs) + extra
                facts = all_factorizations(multiply_all_w(start), gens)
                keyset = {tuple(sorted((p.weights, p.level) for p in f)) for f in facts}
                moved = m.apply(start)
                n_apps += 1
                if tuple(sorted((p.weights, p.level) for p in moved)) not in keyset:
                    return False, f"applying {m} to {start} leaves the fiber"
    return True, f"{n_moves} moves sound over {n_apps} applications"


def _separating_edges(graph):
    out = []
    for e in range(graph.num_edges):
        try:
            split_along_edge(graph, e)
        except Exception:
            continue
        out.append(e)
    return out


def _prop_profiles() -> tuple[bool, str]:
    checked = homogeneous = 0
    for graph in (build_gamma(2, 1), build_gamma(3, 1), build_gamma(1, 2)):
        gens = generators(graph, 2).items
        edges = [e for e in _separating_edges(graph) if all(g.weights[e] % 2 == 0 for g in gens)]
        for m in _moves_for(graph):
            for e in edges:
                lp = [fiber_profile(p, e) for p in m.lhs]
                rp = [fiber_profile(p, e) for p in m.rhs]
                checked += 1
                atoms = lambda ps: tuple(map(sum, zip(*(profile_atoms(p) for p in ps))))  # noqa: E731
                if atoms(lp) != atoms(rp):
                    return False, f"move {m} changes the profile atoms across edge {e}"
                if sorted(p.level for p in m.lhs) == sorted(p.level for p in m.rhs):
                    homogeneous += 1
                    if sorted(lp) != sorted(rp):
                        return False, f"move {m} changes the profile list across edge {e}"
    return True, f"{checked} (move, edge) pairs conserve profile atoms; {homogeneous} equal-signature moves conserve the profile list"


def _prop_round_trips() -> tuple[bool, str]:
    n_graph = n_w = 0
    for g in range(0, 4):
        for n in range(0, 5):
            try:
                graph = build_gamma(g, n)
            except Exception:
                continue
            for e in _separating_edges(graph):
                s = split_along_edge(graph, e)
                n_graph += 1
                back = s.reassemble()
                if not isomorphic(back, graph) or back.betti != graph.betti or len(back.leaves) != len(graph.leaves):
                    return False, f"split/glue of {graph.name} at {e} is not a round trip"
    for graph, lmax, _ in generation_ranges():
        splits = [split_along_edge(graph, e) for e in _separating_edges(graph)]
        for lv in range(lmax + 1):
            for w in enumerate_level(graph, lv):
                for s in splits:
                    left, right = restrict(w, s, "left"), restrict(w, s, "right")
                    n_w += 1
                    if not (is_member(left) and is_member(right)):
                        return False, f"restriction of {w} at {s.shared_edge} is not a member"
                    if glue_weightings(s, left, right) != w:
                        return False, f"restrict/glue of {w} at {s.shared_edge} is not a round trip"
    return True, f"{n_graph} graph splits and {n_w} weighting splits round-trip"


def _prop_lifting() -> tuple[bool, str]:
    """Moves on the self-loop side of gamma(2,1) lift through any compatible
    bigon-side completion."""
    whole = build_gamma(2, 1)
    s = split_along_edge(whole, chain_layout(2).bigons[0][0])
    left_gens = generators(s.left, 2).items
    right_gens = generators(s.right, 2).items
    whole_gens = {(g.weights, g.level) for g in generators(whole, 2).items}
    lifted = skipped = 0
    for m in find_binomial_relations(left_gens, 4):
        prof = lambda p: (p.level, p.weights[s.left_leaf])  # noqa: E731
        if sorted(map(prof, m.lhs)) != sorted(map(prof, m.rhs)):
            skipped += 1
            continue
        choices = [[r for r in right_gens if (r.level, r.weights[s.right_leaf]) == prof(p)] for p in m.lhs]
        for combo in itertools.product(*choices):
            pool: dict = {}
            for p, r in zip(m.lhs, combo):
                pool.setdefault(prof(p), []).append(r)
            glued_l = [glue_weightings(s, p, r) for p, r in zip(m.lhs, combo)]
            glued_r = [glue_weightings(s, p, pool[prof(p)].pop()) for p in m.rhs]
            lifted += 1
            if any((q.weights, q.level) not in whole_gens for q in glued_l + glued_r):
                return False, f"lift of {m} is not made of generators"
            if sum(q.level for q in glued_l) != sum(q.level for q in glued_r):
                return False, f"lift of {m} changes degree"
            if multiply_all(glued_l) != multiply_all(glued_r):
                return False, f"lift of {m} changes the sum"
    return True, f"{lifted} lifts valid ({skipped} moves change the level signature and have no fixed cut profile)"


def multiply_all_w(parts):
    out = parts[0]
    for p in parts[1:]:
        out = multiply(out, p)
    return out


def multiply_all(parts):
    return multiply_all_w(parts).weights


PROPERTIES = {
    "parity": _prop_parity,
    "edge_bound": _prop_edge_bound,
    "symmetry": _prop_symmetry,
    "closure": _prop_closure,
    "move_soundness": _prop_move_soundness,
    "profiles": _prop_profiles,
    "round_trips": _prop_round_trips,
    "lifting": _prop_lifting,
}


def property_suite() -> dict[str, tuple[bool, str]]:
    return {name: fn() for name, fn in PROPERTIES.items()}
