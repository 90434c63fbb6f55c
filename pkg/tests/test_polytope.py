"""Simplex data, height functions, regular subdivisions, dual polytope."""

import itertools
import json
from fractions import Fraction

import pytest

from quintic_lines import linalg as la
from quintic_lines import polytope as pt
from quintic_lines.polytope import SIMPLEX


class TestPhi:
    def test_phi0_values(self):
        assert pt.phi0(0) == 0
        assert pt.phi0(3) == 3
        assert pt.phi0(Fraction(5, 2)) == 2  # between phi0(2)=1, phi0(3)=3

    def test_phi0_convex_second_differences(self):
        xs = [Fraction(k, 4) for k in range(-20, 21)]
        for a, b, c in zip(xs, xs[1:], xs[2:]):
            assert pt.phi0(a) + pt.phi0(c) >= 2 * pt.phi0(b)

    def test_phi1_values(self):
        assert pt.phi1((0, 0, 0, 0)) == 0
        assert pt.phi1((1, 0, 0, 0)) == 0
        assert pt.phi1((2, 0, 0, 0)) == 4

    def test_phi1_convex_on_segments(self):
        pts = SIMPLEX.boundary_points
        for p, q in zip(pts[::7], pts[5::7]):
            mid = tuple(Fraction(a + b, 2) for a, b in zip(p, q))
            assert 2 * pt.phi1(mid) <= pt.phi1(p) + pt.phi1(q)


class TestSimplexData:
    def test_boundary_count(self):
        assert len(SIMPLEX.boundary_points) == 125
        assert (0, 0, 0, 0) not in SIMPLEX.boundary_points

    def test_faces(self):
        for k in range(5):
            assert len(SIMPLEX.facets[k].point_ids) == 56
        assert len(SIMPLEX.two_faces) == 10
        for face in SIMPLEX.two_faces.values():
            assert len(face.point_ids) == 21

    def test_facet_chart_unimodular_position(self):
        for k in range(5):
            face = SIMPLEX.facets[k]
            images = {SIMPLEX.facet_chart(SIMPLEX.boundary_points[i], k)
                      for i in face.point_ids}
            # the chart puts the tetrahedron at conv{0, 5e1, 5e2, 5e3}
            assert (0, 0, 0) in images and (5, 0, 0) in images
            assert all(min(y) >= 0 and sum(y) <= 5 for y in images)
            for i in face.point_ids:
                p = SIMPLEX.boundary_points[i]
                y = SIMPLEX.facet_chart(p, k)
                assert SIMPLEX.facet_unchart(y, k) == p


class TestHeights:
    def test_magnitude_zero_is_symmetric(self):
        h = pt.make_heights(123, 0)
        for p in SIMPLEX.boundary_points[:20]:
            assert h.value(p) == pt.base_height(p)

    def test_deterministic(self):
        a = pt.make_heights(5, Fraction(1, 1000))
        b = pt.make_heights(5, Fraction(1, 1000))
        assert a == b

    def test_distinct_seeds_differ(self):
        a = pt.make_heights(1, Fraction(1, 1000))
        b = pt.make_heights(2, Fraction(1, 1000))
        assert a.entries != b.entries

    def test_magnitude_bound_and_positivity(self):
        h = pt.make_heights(9, Fraction(1, 100))
        for p, v in zip(SIMPLEX.boundary_points, h.entries):
            assert abs(v - pt.base_height(p)) <= Fraction(1, 100)
            assert v > 0

    def test_magnitude_quantization(self):
        with pytest.raises(ValueError):
            pt.make_heights(0, Fraction(1, 3 * 10 ** 6))

    def test_json_roundtrip(self):
        from quintic_lines import serialize
        h = pt.make_heights(77, Fraction(1, 100))
        text = serialize.heights_to_json(h)
        h2 = serialize.heights_from_json(text)
        assert h2 == h
        d = json.loads(text)
        assert d["seed"] == 77 and d["magnitude"] == "1/100"
        assert len(d["entries"]) == 125


class TestSubdivision:
    def test_two_face_symmetric(self):
        h = pt.make_heights(0, 0)
        sub = pt.induced_subdivision(h, SIMPLEX.two_faces[(0, 1)],
                                     require_triangulation=True)
        assert len(sub.cells) == 25
        assert pt.is_unimodular(sub)
        # area oracle: normalized areas sum to that of the dilated triangle
        total = sum(pt.cell_normalized_volume(sub, c) for c in sub.cells)
        assert total == 25

    def test_facet_symmetric_unimodular(self):
        h = pt.make_heights(0, 0)
        sub = pt.induced_subdivision(h, SIMPLEX.facets[2],
                                     require_triangulation=True)
        assert len(sub.cells) == 125
        assert pt.is_unimodular(sub)
        total = sum(pt.cell_normalized_volume(sub, c) for c in sub.cells)
        assert total == 125

    def test_single_segment_one_cell(self):
        cells = pt.lower_hull_cells([(0,), (1,)], [Fraction(3), Fraction(7)])
        assert len(cells) == 1 and cells[0][0] == frozenset({0, 1})

    def test_non_unimodular_detected(self):
        cells = pt.lower_hull_cells([(0, 0), (2, 0), (0, 1)],
                                    [Fraction(0)] * 3)
        sub = pt.RegularSubdivision(
            pt.Face(2, (), (0, 1, 2), ((0, 0), (2, 0), (0, 1))),
            (frozenset({0, 1, 2}),), (cells[0][1],), 2)
        assert not pt.is_unimodular(sub)

    def test_lower_hull_certificate(self):
        h = pt.make_heights(3, Fraction(1, 100))
        face = SIMPLEX.two_faces[(1, 3)]
        sub = pt.induced_subdivision(h, face)
        chart = dict(zip(face.point_ids, face.chart_points))
        hts = {pid: h.value_by_id(pid) for pid in face.point_ids}
        for cell, func in zip(sub.cells, sub.functionals):
            for pid in face.point_ids:
                val = (sum(c * x for c, x in zip(func[0], chart[pid]))
                       + func[1])
                if pid in cell:
                    assert val == hts[pid]
                else:
                    assert val < hts[pid]

    def test_polyhedral_complex_property(self):
        # any two cells of a 2-face triangulation meet in a common face
        h = pt.make_heights(4, Fraction(1, 100))
        face = SIMPLEX.two_faces[(2, 4)]
        sub = pt.induced_subdivision(h, face, require_triangulation=True)
        chart = dict(zip(face.point_ids, face.chart_points))
        for c1, c2 in itertools.combinations(sub.cells, 2):
            shared = c1 & c2
            assert len(shared) <= 2
            if len(shared) == 2:
                p, q = [chart[i] for i in sorted(shared)]
                # shared pair must be an edge of both triangles: no third
                # cell point on the open segment between them
                mid = tuple(Fraction(a + b, 2) for a, b in zip(p, q))
                for other in (c1 | c2) - shared:
                    assert chart[other] != mid

    def test_restriction_compatibility(self):
        h = pt.make_heights(6, Fraction(1, 100))
        for k in (0, 3):
            fsub = pt.induced_subdivision(h, SIMPLEX.facets[k])
            for kl, face in SIMPLEX.two_faces.items():
                if k not in kl:
                    continue
                pts = frozenset(face.point_ids)
                restricted = {c & pts for c in fsub.cells}
                tris = {c for c in restricted if len(c) == 3}
                direct = set(pt.induced_subdivision(h, face).cells)
                assert tris == direct

    def test_degenerate_heights_raise(self):
        flat = pt.HeightFunction.from_entries([0] * 125)
        with pytest.raises(pt.DegenerateHeights):
            pt.induced_subdivision(flat, SIMPLEX.two_faces[(0, 1)],
                                   require_triangulation=True)


class TestDualPolytope:
    def test_constant_heights_polar_dual(self):
        ones = pt.HeightFunction.from_entries([1] * 125)
        dp = pt.dual_polytope(ones)
        want = {(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
                (-1, -1, -1, -1)}
        got = {tuple(int(c) for c in v) for v in dp.vertices}
        assert len(dp.vertices) == 5 and got == want

    def test_symmetric_heights_cell_bijection(self):
        h = pt.make_heights(0, 0)
        dp = pt.dual_polytope(h)
        cands = set()
        for k in range(5):
            sub = pt.induced_subdivision(h, SIMPLEX.facets[k])
            for cell in sub.cells:
                ids = sorted(cell)
                res = la.solve_rational(
                    [list(SIMPLEX.boundary_points[i]) for i in ids],
                    [-h.value_by_id(i) for i in ids])
                assert res.kind == "unique"
                cands.add(res.point)
        assert len(dp.vertices) == 625
        assert set(dp.vertices) == cands

    def test_vertices_satisfy_all_and_tight(self):
        h = pt.make_heights(0, 0)
        dp = pt.dual_polytope(h)
        for v, tight in zip(dp.vertices[:40], dp.tight[:40]):
            assert len(tight) >= 4
            for i, (m, a) in enumerate(dp.halfspaces):
                val = sum(Fraction(mi) * vi for mi, vi in zip(m, v)) + a
                assert val >= 0
                assert (val == 0) == (i in tight)

    def test_global_shift_preserves_combinatorics(self):
        h = pt.make_heights(0, 0)
        shifted = pt.HeightFunction.from_entries(
            [v + 3 for v in h.entries])
        a = pt.dual_polytope(h)
        b = pt.dual_polytope(shifted)
        assert len(a.vertices) == len(b.vertices)
        assert sorted(a.tight) == sorted(b.tight)

    def test_unbounded_detected(self):
        with pytest.raises(pt.Unbounded):
            pt.halfspace_vertices([((1, 0, 0, 0), Fraction(1))], dim=4)
