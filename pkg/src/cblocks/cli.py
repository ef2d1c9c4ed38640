"""Command-line entry point.

Exit codes: 0 success, 1 a verification failed, 2 usage, budget or I/O error.
Every artifact is written with sorted keys so that a fixed configuration
produces byte-identical output regardless of ``--jobs``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import graph as graphs
from . import weighting as wts
from .config import RunConfig, resolve
from .enumeration import count_level, enumerate_raw, generators, hilbert
from .errors import BudgetExceeded, CblocksError, StructuralError, TheoremViolation
from .factorize import factor_full, factor_search, supports_constructive
from .relations import b2_quadrant_analysis, find_binomial_relations, verify_generation, verify_relation_degree

log = logging.getLogger("cblocks")

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class OutputExists(CblocksError):
    pass


# -- helpers ---------------------------------------------------------------


def load_graph(spec: str) -> graphs.MarkedGraph:
    """A JSON file path, or a builder name such as ``b2`` or ``gamma(2,1)``."""
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        try:
            return graphs.from_json(json.loads(path.read_text()))
        except json.JSONDecodeError as exc:
            raise StructuralError(f"{spec}: not valid JSON ({exc})") from exc
    return graphs.build_named(spec)


def load_weighting(path: str, graph: graphs.MarkedGraph) -> wts.Weighting:
    data = json.loads(Path(path).read_text())
    tag = data.get("graph")
    if tag is not None and tag not in (graph.name, graph.digest):
        raise StructuralError(f"{path} is for graph {tag!r}, not {graph.name or graph.digest!r}")
    return wts.from_json(data, graph)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def emit(text: str, cfg: RunConfig, force: bool = False) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    path = Path(cfg.out)
    if path.exists() and not force:
        raise OutputExists(f"{path} exists; pass --force to overwrite")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info("wrote %s", path)


def _require(value, flag: str):
    if value is None:
        raise StructuralError(f"{flag} is required (flag or config file)")
    return value


def _report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["graph", "kind", "total", "pass", "fail", "budget", "status"])
    s = report["summary"]
    w.writerow([report["graph"], report["kind"], s["total"], s["pass"], s["fail"], s["budget"], report["status"]])
    return buf.getvalue()


def _status_code(status: str) -> int:
    return {"pass": EXIT_OK, "fail": EXIT_FAIL}.get(status, EXIT_ERROR)


def _factor_json(f) -> dict:
    return {
        "target": wts.to_json(f.target),
        "parts": [wts.to_json(p) for p in f.parts],
        "method": f.method,
        "validated": True,
    }


# -- subcommands -----------------------------------------------------------


def cmd_graph_build(args, cfg: RunConfig) -> int:
    kind = args.kind
    if kind == "gamma":
        g = graphs.build_gamma(_require(args.g, "--g"), _require(args.n, "--n"))
    else:
        g = graphs.build_named(kind)
    emit(dumps(graphs.to_json(g)), cfg, args.force)
    return EXIT_OK


def cmd_graph_split(args, cfg: RunConfig) -> int:
    g = load_graph(_require(cfg.graph, "--graph"))
    s = graphs.split_along_edge(g, args.edge)
    payload = {
        "left": graphs.to_json(s.left),
        "right": graphs.to_json(s.right),
        "shared_edge": s.shared_edge,
        "left_leaf": s.left_leaf,
        "right_leaf": s.right_leaf,
        "left_edges": list(s.left_edges),
        "right_edges": list(s.right_edges),
    }
    emit(dumps(payload), cfg, args.force)
    return EXIT_OK


def cmd_wt_check(args, cfg: RunConfig) -> int:
    g = load_graph(_require(cfg.graph, "--graph"))
    w = load_weighting(args.weighting[0], g)
    member = wts.is_member(w)
    emit(dumps({"weighting": wts.to_json(w), "member": member}), cfg, args.force)
    return EXIT_OK if member else EXIT_FAIL


def cmd_wt_mul(args, cfg: RunConfig) -> int:
    g = load_graph(_require(cfg.graph, "--graph"))
    if len(args.weighting) < 2:
        raise StructuralError("wt mul needs at least two --weighting files")
    parts = [load_weighting(p, g) for p in args.weighting]
    emit(dumps(wts.to_json(wts.product(parts))), cfg, args.force)
    return EXIT_OK


def cmd_wt_restrict(args, cfg: RunConfig) -> int:
    g = load_graph(_require(cfg.graph, "--graph"))
    w = load_weighting(args.weighting[0], g)
    s = graphs.split_along_edge(g, args.edge)
    emit(dumps(wts.to_json(wts.restrict(w, s, args.side))), cfg, args.force)
    return EXIT_OK


def cmd_wt_b2map(args, cfg: RunConfig) -> int:
    if args.coords:
        coords = [int(x) for x in args.coords.split(",")]
        emit(dumps(wts.to_json(wts.b2_untransform(coords))), cfg, args.force)
        return EXIT_OK
    if not args.weighting:
        raise StructuralError("wt b2map needs --weighting or --coords")
    w = load_weighting(args.weighting[0], graphs.build_b2())
    c = wts.b2_transform(w)
    emit(dumps({"coords": list(c), "label": c.label()}), cfg, args.force)
    return EXIT_OK


def cmd_enum(args, cfg: RunConfig) -> int:
    g = load_graph(_require(cfg.graph, "--graph"))
    level = _require(cfg.level, "--level")
    if args.count_only:
        emit(f"{count_level(g, level, cfg.budget)}\n", cfg, args.force)
        return EXIT_OK
    pts = enumerate_raw(g, level, budget=cfg.budget)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"e{e}" for e in range(g.num_edges)])
        w.writerows(pts)
        emit(buf.getvalue(), cfg, args.force)
    else:
        emit(dumps({"graph": g.name or g.digest, "level": level, "count": len(pts), "points": [list(p) for p in pts]}), cfg, args.force)
    return EXIT_OK


def cmd_hilbert(args, cfg: RunConfig) -> int:
    g = load_graph(_require(cfg.graph, "--graph"))
    table = hilbert(g, cfg.lmax, cache_dir=cfg.cache_dir, budget=cfg.budget, jobs=cfg.jobs)
    if cfg.format == "json":
        emit(dumps({"graph": table.graph_name, "graph_hash": table.graph_hash, "counts": table.counts()}), cfg, args.force)
    else:
        emit(table.to_csv(), cfg, args.force)
    return EXIT_OK


def cmd_factor(args, cfg: RunConfig) -> int:
    g = load_graph(_require(cfg.graph, "--graph"))
    w = load_weighting(args.weighting[0], g)
    if args.method == "auto" and supports_constructive(g):
        f = factor_full(w)
    else:
        gens = generators(g, cfg.max_degree).items
        f = factor_search(w, gens, budget=cfg.search_budget)
        if f is None:
            print(f"no factorization over generators of degree <= {cfg.max_degree}", file=sys.stderr)
            return EXIT_FAIL
    emit(dumps(_factor_json(f)), cfg, args.force)
    return EXIT_OK


def _emit_report(report: dict, cfg: RunConfig, force: bool) -> int:
    emit(_report_csv(report) if cfg.format == "csv" else dumps(report), cfg, force)
    if report["status"] != "pass":
        print(f"{report['kind']} check on {report['graph']}: {report['status']}", file=sys.stderr)
    return _status_code(report["status"])


def cmd_verify_gen(args, cfg: RunConfig) -> int:
    g = load_graph(_require(cfg.graph, "--graph"))
    report = verify_generation(g, cfg.lmax, cfg.max_degree, budget=cfg.search_budget, jobs=cfg.jobs)
    return _emit_report(report, cfg, args.force)


def cmd_verify_rel(args, cfg: RunConfig) -> int:
    g = load_graph(_require(cfg.graph, "--graph"))
    report = verify_relation_degree(
        g, cfg.dmax, cfg.move_bound, minimal=args.minimal, budget=cfg.search_budget, jobs=cfg.jobs
    )
    return _emit_report(report, cfg, args.force)


def cmd_relations_find(args, cfg: RunConfig) -> int:
    g = load_graph(_require(cfg.graph, "--graph"))
    gs = generators(g, 2)
    gens = gs.minimal() if args.minimal else gs.items
    moves = find_binomial_relations(gens, cfg.max_degree)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "move"])
        w.writerows((m.degree, str(m)) for m in moves)
        emit(buf.getvalue(), cfg, args.force)
    else:
        payload = {
            "kind": "moves",
            "graph": g.name,
            "max_degree": cfg.max_degree,
            "status": "pass",
            "moves": [
                {"degree": m.degree, "lhs": [wts.to_json(p) for p in m.lhs], "rhs": [wts.to_json(p) for p in m.rhs]}
                for m in moves
            ],
        }
        emit(dumps(payload), cfg, args.force)
    return EXIT_OK


def cmd_b2_analyze(args, cfg: RunConfig) -> int:
    report = b2_quadrant_analysis()
    emit(dumps(report), cfg, args.force)
    return _status_code(report["status"])


def cmd_repro_all(args, cfg: RunConfig) -> int:
    from .repro import run_all, summary_csv

    results = run_all(cfg.jobs)
    for r in results:
        print(r.line(), file=sys.stderr if cfg.out is None else sys.stdout)
    if cfg.format == "json":
        table = dumps([{"criterion": r.number, "name": r.name, "status": "pass" if r.ok else "fail", "detail": r.detail} for r in results])
    else:
        table = summary_csv(results)
    emit(table, cfg, args.force)
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file (flags override it)")
    common.add_argument("--format", choices=["json", "csv"], default=None)
    common.add_argument("--jobs", type=int, default=None, help="worker processes")
    common.add_argument("--cache-dir", default=None, help="Hilbert count cache (else $CBLOCKS_CACHE)")
    common.add_argument("--seed", type=int, default=None, help="scheduling seed; never affects results")
    common.add_argument("--budget", type=int, default=None, help="enumeration node budget")
    common.add_argument("--search-budget", type=int, default=None, help="factorization search node budget")
    common.add_argument("--out", default=None, help="output path (stdout if omitted)")
    common.add_argument("--force", action="store_true", help="overwrite an existing --out")
    common.add_argument("-v", "--verbose", action="store_true")

    with_graph = argparse.ArgumentParser(add_help=False, parents=[common])
    with_graph.add_argument("--graph", default=None, help="graph JSON file or builder name (b1, b2, theta_leaf, gamma(G,N))")

    p = argparse.ArgumentParser(prog="cblocks", description="Conformal block semigroup certifier.")
    sub = p.add_subparsers(dest="command", required=True)

    gp = sub.add_parser("graph", help="build and split marked graphs").add_subparsers(dest="action", required=True)
    b = gp.add_parser("build", parents=[common])
    b.add_argument("--kind", default="gamma", choices=["gamma", "b1", "b2", "theta_leaf"])
    b.add_argument("--g", type=int)
    b.add_argument("--n", type=int)
    b.set_defaults(func=cmd_graph_build)
    s = gp.add_parser("split", parents=[with_graph])
    s.add_argument("--edge", type=int, required=True)
    s.set_defaults(func=cmd_graph_split)

    wp = sub.add_parser("wt", help="weighting operations").add_subparsers(dest="action", required=True)
    for name, func in (("check", cmd_wt_check), ("mul", cmd_wt_mul), ("restrict", cmd_wt_restrict), ("b2map", cmd_wt_b2map)):
        q = wp.add_parser(name, parents=[with_graph])
        q.add_argument("--weighting", action="append", default=[], help="weighting JSON (repeat for mul)")
        q.set_defaults(func=func)
        if name == "restrict":
            q.add_argument("--edge", type=int, required=True)
            q.add_argument("--side", choices=["left", "right"], required=True)
        if name == "b2map":
            q.add_argument("--coords", help="A,B,C,D to map back to a level-2 weighting")
        if name in ("check", "restrict"):
            q.set_defaults(_need_weighting=True)

    e = sub.add_parser("enum", parents=[with_graph], help="enumerate lattice points at one level")
    e.add_argument("--level", type=int)
    e.add_argument("--count-only", action="store_true")
    e.set_defaults(func=cmd_enum)

    h = sub.add_parser("hilbert", parents=[with_graph], help="counts per level (CSV)")
    h.add_argument("--lmax", type=int)
    h.set_defaults(func=cmd_hilbert, _format="csv")

    f = sub.add_parser("factor", parents=[with_graph], help="factor one weighting")
    f.add_argument("--weighting", action="append", default=[], required=True)
    f.add_argument("--method", choices=["auto", "search"], default="auto")
    f.add_argument("--max-degree", type=int)
    f.set_defaults(func=cmd_factor)

    vp = sub.add_parser("verify", help="generation and relation certificates").add_subparsers(dest="action", required=True)
    v = vp.add_parser("gen", parents=[with_graph])
    v.add_argument("--lmax", type=int)
    v.add_argument("--max-degree", type=int)
    v.set_defaults(func=cmd_verify_gen)
    v = vp.add_parser("rel", parents=[with_graph])
    v.add_argument("--dmax", type=int)
    v.add_argument("--move-bound", type=int)
    v.add_argument("--minimal", action="store_true", help="use minimal generators only")
    v.set_defaults(func=cmd_verify_rel)

    rp = sub.add_parser("relations", help="binomial moves").add_subparsers(dest="action", required=True)
    r = rp.add_parser("find", parents=[with_graph])
    r.add_argument("--max-degree", type=int)
    r.add_argument("--minimal", action="store_true")
    r.set_defaults(func=cmd_relations_find, _max_degree=4)

    bp = sub.add_parser("b2", help="B2 subdivision analysis").add_subparsers(dest="action", required=True)
    bp.add_parser("analyze", parents=[common]).set_defaults(func=cmd_b2_analyze)

    pp = sub.add_parser("repro", help="acceptance suite").add_subparsers(dest="action", required=True)
    pp.add_parser("all", parents=[common]).set_defaults(func=cmd_repro_all, _format="csv")
    return p


_CONFIG_KEYS = ("graph", "level", "lmax", "dmax", "move_bound", "max_degree", "budget", "search_budget",
                "cache_dir", "out", "jobs", "seed", "format")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    flags = {k: getattr(args, k, None) for k in _CONFIG_KEYS}
    # per-command defaults sit below the config file
    defaults = {}
    if getattr(args, "_format", None):
        defaults["format"] = args._format
    if getattr(args, "_max_degree", None):
        defaults["max_degree"] = args._max_degree
    try:
        cfg = resolve(flags, args.config, defaults)
        if getattr(args, "_need_weighting", False) and not args.weighting:
            raise StructuralError("--weighting is required")
        return args.func(args, cfg)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OutputExists as exc:
        print(f"refusing to overwrite: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except TheoremViolation as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (StructuralError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
