"""Line solver and facet enumeration."""

import random
from dataclasses import dataclass
from fractions import Fraction

from quintic_lines import search as se
from quintic_lines.curves import RAYS, project
from quintic_lines.curves import CurveEdge


@dataclass
class FakeCurve:
    """Minimal curve stub: explicit edges plus an independent membership
    test, used to pin solver behaviour on hand-built constraint tuples."""
    edges: tuple

    def point_on_edge(self, index, p):
        e = self.edges[index]
        p = (Fraction(p[0]), Fraction(p[1]))
        if p[0] * e.normal[0] + p[1] * e.normal[1] != e.offset:
            return "outside"
        lam = p[0] * e.direction[0] + p[1] * e.direction[1]
        ends = [sum(x * d for x, d in zip(pt, e.direction))
                for pt in e.endpoints]
        if e.kind == "outer":
            if lam == ends[0]:
                return "vertex"
            return "interior" if lam > ends[0] else "outside"
        if lam in ends:
            return "vertex"
        return "interior" if min(ends) < lam < max(ends) else "outside"


@dataclass
class FakeCurveSet:
    curves: dict
    scale: int = 1


def edge(kind, normal, offset, direction, endpoints):
    return CurveEdge(0, kind, (0, 0), normal, offset, direction, endpoints)


def toy_curveset():
    """Constraints forcing the balanced line with vertices (0,0,0) and
    (1,1,0): legs 1,2 attach at (1,1,0) landing at (1,0); legs 3,4 attach
    at (0,0,0) landing at (0,0)."""
    c0 = FakeCurve((edge("internal", (1, 0), 1, (0, 1),
                         ((1, -2), (1, 2))),))
    c1 = FakeCurve((edge("internal", (1, 0), 1, (0, 1),
                         ((1, -2), (1, 2))),))
    c2 = FakeCurve((edge("internal", (1, -2), 0, (2, 1),
                         ((-2, -1), (2, 1))),))
    c3 = FakeCurve((edge("internal", (2, -1), 0, (1, 2),
                         ((-1, -2), (1, 2))),))
    return FakeCurveSet({(0, j): c for j, c in
                         enumerate((c0, c1, c2, c3))})


class TestSolveLineToy:
    def test_expected_line(self):
        cs = toy_curveset()
        out = se.solve_line(cs, 0, (0, 0, 0, 0), "12|34")
        assert out.status == "line"
        line = out.line
        assert line.v1 == (0, 0, 0)
        assert line.v2 == (1, 1, 0)
        assert line.t == 1
        assert line.direction == (1, 1, 0)
        assert line.legs_at(True) == (2, 3)   # legs 3,4 at the low vertex
        assert line.legs_at(False) == (0, 1)
        # substitution check of all four incidences
        for j in range(4):
            v = line.vertex_of_leg(j)
            z = project(j, v)
            assert z == line.legs[j].landing
            assert cs.curves[(0, j)].point_on_edge(0, z) == "interior"
        report = se.check_tropical_axioms(line)
        assert report.balanced and report.primitive and report.saturated

    def test_other_types_rejected(self):
        cs = toy_curveset()
        # type 13|24 solves but lands on a curve vertex: special
        out = se.solve_line(cs, 0, (0, 0, 0, 0), "13|24")
        assert out.status == "special"
        # type 14|23 forces negative edge length: no line
        out = se.solve_line(cs, 0, (0, 0, 0, 0), "14|23")
        assert out.status == "miss"

    def test_family_outcome(self):
        cs = toy_curveset()
        # replace legs 1,2 constraints by one repeated plane: rank drops
        par = FakeCurve((edge("internal", (0, 1), 0, (1, 0),
                              ((-3, 0), (3, 0))),))
        cs.curves[(0, 0)] = par
        cs.curves[(0, 1)] = FakeCurve((edge("internal", (0, 1), 0, (1, 0),
                                            ((-3, 0), (3, 0))),))
        out = se.solve_line(cs, 0, (0, 0, 0, 0), "12|34")
        assert out.status == "family"
        assert out.kernel


class TestAxiomChecker:
    def test_imprimitive_direction_fails(self):
        line = _hand_line(direction=(2, 2, 0))
        assert not se.check_tropical_axioms(line).primitive

    def test_balanced_line_passes(self):
        line = _hand_line(direction=(1, 1, 0))
        rep = se.check_tropical_axioms(line)
        assert rep.balanced and rep.primitive and rep.saturated

    def test_saturation_failure_detected(self):
        from quintic_lines import linalg as la
        assert la.lattice_index([(1, 0, 0), (0, 2, 0)]) == 2


def _hand_line(direction):
    legs = (
        se.LegIncidence(0, False, 0, "internal", (Fraction(1), Fraction(0))),
        se.LegIncidence(1, False, 0, "internal", (Fraction(1), Fraction(0))),
        se.LegIncidence(2, True, 0, "internal", (Fraction(0), Fraction(0))),
        se.LegIncidence(3, True, 0, "internal", (Fraction(0), Fraction(0))),
    )
    return se.TropicalLine(0, "12|34", (Fraction(0),) * 3,
                           (Fraction(1), Fraction(1), Fraction(0)),
                           Fraction(1), direction, legs)


class TestEnumerateFacet:
    def test_accounting_partitions(self, facet0_census):
        for acc in facet0_census.accounting.values():
            total = sum(v for k, v in acc.items() if k != "total")
            assert total == acc["total"] == 45 ** 4

    def test_weighted_count_is_575(self, curveset1, facet0_census):
        from quintic_lines.multiplicity import line_planes, multiplicity
        weighted = sum(
            multiplicity(l, line_planes(curveset1, l)).value
            for l in facet0_census.lines)
        assert weighted == 575

    def test_lines_pass_axioms_and_are_unique(self, facet0_census):
        keys = set()
        for line in facet0_census.lines:
            assert se.check_tropical_axioms(line).all_pass
            key = (line.v1, line.v2, line.line_type)
            assert key not in keys
            keys.add(key)
            assert line.t > 0

    def test_lines_sorted_canonically(self, facet0_census):
        keys = [l.sort_key() for l in facet0_census.lines]
        assert keys == sorted(keys)

    def test_engine_agrees_with_reference_solver(self, curveset1,
                                                 facet0_census):
        by_key = {}
        for line in facet0_census.lines:
            eids = tuple(inc.edge_index for inc in line.legs)
            by_key[(eids, line.line_type)] = line
        rng = random.Random(99)
        hits = 0
        for _ in range(400):
            eids = tuple(rng.randrange(45) for _ in range(4))
            for ty in se.LINE_TYPES:
                out = se.solve_line(curveset1, 0, eids, ty)
                if out.status == "line":
                    assert (eids, ty) in by_key
                    hits += 1
                else:
                    assert (eids, ty) not in by_key
        # every emitted line solves back to itself
        for (eids, ty), line in list(by_key.items())[::37]:
            out = se.solve_line(curveset1, 0, eids, ty)
            assert out.status == "line"
            assert out.line == line

    def test_family_samples_are_families(self, curveset1, facet0_census):
        for eids, ty in facet0_census.family_samples[:10]:
            assert se.solve_line(curveset1, 0, eids, ty).status == "family"

    def test_special_samples_are_special(self, curveset1, facet0_census):
        for eids, ty in facet0_census.special_samples[:10]:
            assert se.solve_line(curveset1, 0, eids, ty).status == "special"

    def test_landing_edges_match_tuple(self, facet0_census):
        for line in facet0_census.lines[::23]:
            for inc in line.legs:
                assert inc.edge_kind in ("internal", "outer")
