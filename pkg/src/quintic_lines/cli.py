"""Batch driver: seeds -> heights -> curves -> census -> analysis -> files.

Subcommands
    generate    write a heights file for a seed and magnitude
    census      enumerate all rigid lines with multiplicities
    analyze     conflict graph, ranks, disjoint families
    export-viz  OBJ polylines per facet
    verify      run the structural invariant suite

Every output embeds the seed, magnitude and artifact version; reruns with
equal configuration are byte-identical regardless of --threads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import arrangement, multiplicity, polytope, search, serialize
from .curves import build_curve_set
from .polytope import SIMPLEX, HeightFunction, make_heights

OUT_ENV = "QUINTIC_LINES_OUT"


def _out_dir(args) -> Path:
    out = args.out or os.environ.get(OUT_ENV) or "."
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _load_heights(args) -> HeightFunction:
    if args.heights:
        return serialize.heights_from_json(Path(args.heights).read_text())
    return make_heights(args.seed, Fraction(args.magnitude))


def _parse_facets(spec: str):
    if not spec or spec == "all":
        return list(range(5))
    facets = sorted({int(tok) - 1 for tok in spec.split(",")})
    if any(f < 0 or f > 4 for f in facets):
        raise SystemExit("facets must be in 1..5")
    return facets


# ---------------------------------------------------------------------------

def cmd_generate(args) -> int:
    h = make_heights(args.seed, Fraction(args.magnitude))
    out = _out_dir(args) / "heights.json"
    out.write_text(serialize.heights_to_json(h))
    print(f"wrote {out} (seed={h.seed}, magnitude={h.magnitude})")
    return 0


def cmd_census(args) -> int:
    t_start = time.time()
    h = _load_heights(args)
    facets = _parse_facets(args.facets)
    curveset = build_curve_set(h)

    def run_facet(k):
        census = search.enumerate_facet(curveset, k)
        enriched = []
        for line in census.lines:
            planes = multiplicity.line_planes(curveset, line)
            m = multiplicity.multiplicity(line, planes)
            enriched.append((line, m))
        return census, enriched

    results = {}
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            futures = {k: pool.submit(run_facet, k) for k in facets}
            results = {k: f.result() for k, f in futures.items()}
    else:
        for k in facets:
            results[k] = run_facet(k)

    records = []
    per_facet = {}
    totals = Counter()
    total_weighted = 0
    for k in facets:
        census, enriched = results[k]
        mults = Counter(m.value for _, m in enriched)
        weighted = sum(m.value for _, m in enriched)
        admissible = [line for line, _ in enriched
                      if multiplicity.is_admissible(line)]
        adm_mults = Counter(m.value for line, m in enriched
                            if multiplicity.is_admissible(line))
        per_facet[str(k + 1)] = {
            "raw": len(enriched),
            "by_mult": {str(v): c for v, c in sorted(mults.items())},
            "weighted": weighted,
            "admissible": len(admissible),
            "admissible_by_mult": {str(v): c
                                   for v, c in sorted(adm_mults.items())},
            "search_space": census.accounting,
        }
        totals.update(mults)
        total_weighted += weighted
        records.extend(serialize.line_record(line, m) for line, m in enriched)

    out = _out_dir(args)
    (out / "lines.jsonl").write_text(serialize.census_to_jsonl(h, records))
    summary = {
        "config": serialize.meta_dict(h, {
            "facets": [k + 1 for k in facets],
            "threads": args.threads,
        }),
        "per_facet": per_facet,
        "totals": {
            "raw": sum(totals.values()),
            "by_mult": {str(v): c for v, c in sorted(totals.items())},
            "weighted": total_weighted,
        },
        "runtime_sec": round(time.time() - t_start, 3),
    }
    (out / "summary.json").write_text(json.dumps(summary, sort_keys=True,
                                                 indent=1))
    print(f"census: {sum(totals.values())} lines, weighted {total_weighted}, "
          f"wrote {out / 'lines.jsonl'} and {out / 'summary.json'}")
    return 0


def cmd_analyze(args) -> int:
    h = _load_heights(args)
    curveset = build_curve_set(h)
    meta, records = serialize.census_from_jsonl(
        Path(args.lines).read_text())
    parsed = [serialize.line_from_record(r) for r in records]
    lines = [p[0] for p in parsed]
    mults = [p[1] for p in parsed]

    graph = arrangement.build_conflict_graph(curveset, lines)
    rank_q, rank_2 = arrangement.adjacency_rank(graph)
    degrees = graph.degree()
    isolated = [i for i, d in enumerate(degrees) if d == 0]

    admissible_ids = [i for i, line in enumerate(lines)
                      if multiplicity.is_admissible(line)]
    sub, node_map = graph.subgraph(admissible_ids)
    greedy = arrangement.independent_set(sub, "greedy")
    family = [node_map[i] for i in greedy]
    fam_mults = Counter(mults[i] for i in family if mults[i] is not None)

    cross_edges = sum(1 for i, j in graph.edges
                      if lines[i].facet != lines[j].facet)
    adm_set = set(admissible_ids)
    cross_adm = sum(1 for i, j in graph.edges
                    if lines[i].facet != lines[j].facet
                    and (i in adm_set or j in adm_set))

    report = {
        "config": serialize.meta_dict(h),
        "n_lines": graph.n,
        "n_edges": len(graph.edges),
        "rank": {
            "over_Q": rank_q,
            "over_GF2": rank_2,
            "full_over_Q": rank_q == graph.n,
            "certificate": "exact" if rank_q == graph.n
            else "max over GF(2) and two large primes (lower bound)",
        },
        "isolated_lines": len(isolated),
        "admissible": {
            "count": len(admissible_ids),
            "by_mult": {str(v): c for v, c in sorted(Counter(
                mults[i] for i in admissible_ids
                if mults[i] is not None).items())},
        },
        "disjoint_family": {
            "size": len(family),
            "S3": fam_mults.get(1, 0),
            "RP3": fam_mults.get(2, 0),
        },
        "cross_facet": {
            "edges": cross_edges,
            "edges_touching_admissible": cross_adm,
        },
    }
    out = _out_dir(args)
    (out / "graph.csv").write_text(arrangement.edges_csv(graph))
    (out / "graph.mtx").write_text(arrangement.matrix_market(graph))
    (out / "report.json").write_text(json.dumps(report, sort_keys=True,
                                                indent=1))
    print(f"analyze: {graph.n} lines, {len(graph.edges)} edges, "
          f"rank Q={rank_q} GF2={rank_2}, isolated={len(isolated)}, "
          f"disjoint family {len(family)} "
          f"(S3={fam_mults.get(1, 0)}, RP3={fam_mults.get(2, 0)})")
    return 0 if not isolated else 1


def cmd_export_viz(args) -> int:
    h = _load_heights(args)
    curveset = build_curve_set(h)
    lines = []
    if args.lines and Path(args.lines).exists():
        _, records = serialize.census_from_jsonl(Path(args.lines).read_text())
        lines = [serialize.line_from_record(r)[0] for r in records]
    by_facet = {}
    for line in lines:
        by_facet.setdefault(line.facet, []).append(line)
    out = _out_dir(args)
    radius = Fraction(args.radius)
    for k in _parse_facets(args.facets):
        text = serialize.facet_obj(curveset, k, by_facet.get(k, []), radius)
        (out / f"facet{k + 1}.obj").write_text(text)
    print(f"wrote OBJ files to {out}")
    return 0


def cmd_verify(args) -> int:
    h = _load_heights(args)
    failures = []

    def check(name, fn):
        try:
            fn()
            print(f"[PASS] {name}")
        except Exception as exc:
            failures.append(name)
            print(f"[FAIL] {name}: {exc}")

    import itertools
    from . import curves as curves_mod
    from .polytope import (dual_polytope, induced_subdivision, is_unimodular)
    from . import linalg

    def faces_regular():
        for k in range(5):
            sub = induced_subdivision(h, SIMPLEX.facets[k],
                                      require_triangulation=True)
            if not is_unimodular(sub):
                raise AssertionError(f"facet {k + 1} not unimodular")
        for kl in itertools.combinations(range(5), 2):
            sub = induced_subdivision(h, SIMPLEX.two_faces[kl],
                                      require_triangulation=True)
            if len(sub.cells) != 25 or not is_unimodular(sub):
                raise AssertionError(f"2-face {kl} degenerate")
    check("faces: unimodular regular triangulations", faces_regular)

    def restriction():
        for k in range(5):
            fsub = induced_subdivision(h, SIMPLEX.facets[k])
            for kl in [p for p in itertools.combinations(range(5), 2)
                       if k in p]:
                face = SIMPLEX.two_faces[kl]
                pts = set(face.point_ids)
                restricted = {c & frozenset(pts) for c in fsub.cells}
                tris = {c for c in restricted if len(c) == 3}
                direct = set(induced_subdivision(h, face).cells)
                if direct != tris:
                    raise AssertionError(
                        f"facet {k + 1} does not restrict to 2-face {kl}")
    check("subdivision restriction compatibility", restriction)

    def curve_suite():
        cs = build_curve_set(h)
        for (k, j), c in sorted(cs.curves.items()):
            if len(c.edges) != 45 or len(c.vertices) != 25:
                raise AssertionError(f"curve C_{k + 1}{j + 1} wrong shape")
            if c.internal_edge_count() != 30 or c.outer_edge_count() != 15:
                raise AssertionError(f"curve C_{k + 1}{j + 1} edge split")
            c.verify()
    check("curves: 20 x (25 vertices, 30+15 edges), balanced, dual",
          curve_suite)

    def dual_poly():
        dp = dual_polytope(h)
        cands = set()
        for k in range(5):
            sub = induced_subdivision(h, SIMPLEX.facets[k])
            for cell in sub.cells:
                ids = sorted(cell)
                res = linalg.solve_rational(
                    [list(SIMPLEX.boundary_points[i]) for i in ids],
                    [-h.value_by_id(i) for i in ids])
                if res.kind != "unique":
                    raise AssertionError("cell functional not unique")
                cands.add(res.point)
        feasible = {n for n in cands if all(
            sum(Fraction(mi) * ni for mi, ni in zip(m, n)) + h.value(m) >= 0
            for m in SIMPLEX.boundary_points)}
        if set(dp.vertices) != feasible:
            raise AssertionError("vertex set differs from feasible cell "
                                 "functionals")
        for tight in dp.tight:
            if len(tight) < 4:
                raise AssertionError("vertex with fewer than 4 tight rows")
    check("dual polytope: vertices = feasible cell functionals", dual_poly)

    def phi_convex():
        from .polytope import base_height
        for i, p in enumerate(SIMPLEX.boundary_points[:40]):
            for q in SIMPLEX.boundary_points[i + 1:i + 6]:
                mid = tuple(Fraction(a + b, 2) for a, b in zip(p, q))
                lhs = polytope.phi1(tuple(
                    c + polytope.HEIGHT_EVAL_SHIFT for c in mid))
                rhs = Fraction(base_height(p) + base_height(q), 2)
                if lhs > rhs:
                    raise AssertionError("base height function not convex")
    check("height base function convex on lattice segments", phi_convex)

    print(f"verify: {'ALL PASS' if not failures else f'{len(failures)} FAIL'}")
    return 0 if not failures else 1


# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="quintic-lines",
        description="Exact census of rigid tropical lines meeting four "
                    "plane quintic curves at infinity, per facet of the "
                    "degenerate quintic.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, heights=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--magnitude", default="1/100",
                       help="perturbation bound as p/q (multiple of 1e-6)")
        p.add_argument("--out", default=None,
                       help=f"output directory (default ${OUT_ENV} or .)")
        if heights:
            p.add_argument("--heights", default=None,
                           help="heights.json path (overrides seed/magnitude)")

    p = sub.add_parser("generate", help="write heights.json")
    common(p, heights=False)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("census", help="full line census with multiplicities")
    common(p)
    p.add_argument("--facets", default="all", help="e.g. 1,3,5")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=cmd_census)

    p = sub.add_parser("analyze", help="conflict graph and statistics")
    common(p)
    p.add_argument("--lines", required=True, help="lines.jsonl from census")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("export-viz", help="OBJ polyline export")
    common(p)
    p.add_argument("--lines", default=None)
    p.add_argument("--facets", default="all")
    p.add_argument("--radius", default="40", help="leg truncation radius")
    p.set_defaults(fn=cmd_export_viz)

    p = sub.add_parser("verify", help="structural invariant suite")
    common(p)
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
