"""Facet frames and the plane quintic curves at infinity."""

import itertools
from fractions import Fraction

from quintic_lines import curves as cv
from quintic_lines import linalg as la
from quintic_lines import polytope as pt
from quintic_lines.polytope import SIMPLEX


class TestFacetFrame:
    def test_rays_primitive_and_balanced(self):
        assert tuple(sum(r[i] for r in cv.RAYS) for i in range(3)) == (0, 0, 0)
        for r in cv.RAYS:
            assert la.is_primitive(r)

    def test_projection_kernels(self):
        for j, r in enumerate(cv.RAYS):
            assert cv.project(j, r) == (0, 0)
            # surjective with kernel exactly Z r: lift is a section
            for z in ((1, 0), (0, 1), (3, -2)):
                assert cv.project(j, cv.lift(j, z)) == z

    def test_wall_assignment_covers_all_two_faces(self):
        seen = {}
        for k in range(5):
            frame = cv.FacetFrame(k)
            for j in range(4):
                seen.setdefault(frame.wall_two_face(j), []).append((k, j))
        assert set(seen) == set(SIMPLEX.two_faces)
        assert all(len(v) == 2 for v in seen.values())


class TestCurveStructure:
    def test_counts_symmetric(self):
        cs = cv.build_curve_set(pt.make_heights(0, 0))
        for c in cs.curves.values():
            assert len(c.vertices) == 25
            assert len(c.edges) == 45
            assert c.internal_edge_count() == 30
            assert c.outer_edge_count() == 15

    def test_counts_and_axioms_perturbed(self, curveset1):
        assert len(curveset1.curves) == 20
        for c in curveset1.curves.values():
            assert len(c.vertices) == 25
            assert (c.internal_edge_count(), c.outer_edge_count()) == (30, 15)
            c.verify()  # balancing + exact dual positions

    def test_edge_directions_primitive(self, curveset1):
        for c in curveset1.curves.values():
            for e in c.edges:
                assert la.is_primitive(e.direction)

    def test_unit_triangle_toy(self):
        # a degree-1 dual: one vertex, no bounded edges, three rays
        curve = cv.TropicalPlaneCurve(
            0, 0, 1,
            newton={0: (0, 0), 1: (1, 0), 2: (0, 1)},
            heights_scaled={0: 0, 1: 0, 2: 0},
            triangles=[frozenset({0, 1, 2})])
        assert len(curve.vertices) == 1 and curve.vertices[0] == (0, 0)
        assert curve.internal_edge_count() == 0
        assert curve.outer_edge_count() == 3
        dirs = sorted(e.direction for e in curve.edges)
        assert dirs == [(-1, -1), (0, 1), (1, 0)]
        curve.verify()


class TestPairings:
    def test_each_two_face_has_two_instances(self, curveset1):
        firsts = {p.first for p in curveset1.pairings.values()}
        seconds = {p.second for p in curveset1.pairings.values()}
        assert len(curveset1.pairings) == 10
        assert firsts.isdisjoint(seconds)
        assert len(firsts | seconds) == 20

    def test_pairing_maps_curves_edge_for_edge(self, curveset1):
        for kl, pr in curveset1.pairings.items():
            c1 = curveset1.curves[pr.first]
            c2 = curveset1.curves[pr.second]
            k, j = pr.first
            mapped = {curveset1.map_to_partner(k, j, v)[1]
                      for v in c1.vertices}
            assert mapped == set(c2.vertices)
            # dual pairs give the edge identification
            pairs1 = {e.dual_pair for e in c1.edges}
            pairs2 = {e.dual_pair for e in c2.edges}
            assert pairs1 == pairs2
            kinds1 = {e.dual_pair: e.kind for e in c1.edges}
            kinds2 = {e.dual_pair: e.kind for e in c2.edges}
            assert kinds1 == kinds2

    def test_pairing_map_unimodular(self, curveset1):
        for pr in curveset1.pairings.values():
            det = (pr.linear[0][0] * pr.linear[1][1]
                   - pr.linear[0][1] * pr.linear[1][0])
            assert det in (1, -1)


class TestPointOnEdge:
    def test_classification(self, curveset1):
        c = curveset1.curves[(0, 0)]
        e = next(e for e in c.edges if e.kind == "internal")
        p, q = e.endpoints
        mid = (Fraction(p[0] + q[0], 2), Fraction(p[1] + q[1], 2))
        assert c.point_on_edge(e.index, mid) == "interior"
        assert c.point_on_edge(e.index, p) == "vertex"
        assert c.point_on_edge(e.index, q) == "vertex"
        off = (p[0] + e.normal[0], p[1] + e.normal[1])
        assert c.point_on_edge(e.index, off) == "outside"
        beyond = (2 * q[0] - p[0], 2 * q[1] - p[1])
        assert c.point_on_edge(e.index, beyond) == "outside"

    def test_ray_classification(self, curveset1):
        c = curveset1.curves[(2, 3)]
        e = next(e for e in c.edges if e.kind == "outer")
        base = e.endpoints[0]
        out = (base[0] + e.direction[0], base[1] + e.direction[1])
        back = (base[0] - e.direction[0], base[1] - e.direction[1])
        assert c.point_on_edge(e.index, base) == "vertex"
        assert c.point_on_edge(e.index, out) == "interior"
        assert c.point_on_edge(e.index, back) == "outside"


def test_degenerate_heights_surface_the_face():
    import pytest
    big = pt.make_heights(0, 0)
    entries = list(big.entries)
    # flatten one 2-face so its triangulation collapses
    face = SIMPLEX.two_faces[(0, 1)]
    for pid in face.point_ids:
        entries[pid] = Fraction(1)
    bad = pt.HeightFunction.from_entries(entries)
    with pytest.raises(pt.DegenerateHeights):
        cv.build_curve_set(bad)
