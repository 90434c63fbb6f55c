"""Facet frames and the plane quintic curves at infinity.

Each facet of the simplex carries a unimodular chart putting its
tetrahedron at ``conv{0, 5e1, 5e2, 5e3}``.  Walking to infinity inside the
facet along one of the four leg directions

    r1 = (1,0,0), r2 = (0,1,0), r3 = (0,0,1), r4 = (-1,-1,-1)

the min-plus tropical surface of the facet degenerates to a plane tropical
quintic curve, one per wall of the tetrahedron, dual to the induced
triangulation of the corresponding 2-face.  Curves are stored in integer
coordinates scaled by the common height denominator, so every vertex,
normal and offset is an exact integer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .polytope import (SIMPLEX, DegenerateHeights, HeightFunction,
                       RegularSubdivision, induced_subdivision)


#: Leg directions of a tropical line, indexed 0..3.
RAYS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1))


def project(j: int, y):
    """Quotient coordinates of ``y`` modulo the leg direction ``RAYS[j]``.

    Legs 0..2 drop the matching coordinate; leg 3 uses (y1-y3, y2-y3).
    """
    if j == 0:
        return (y[1], y[2])
    if j == 1:
        return (y[0], y[2])
    if j == 2:
        return (y[0], y[1])
    return (y[0] - y[2], y[1] - y[2])


def lift(j: int, z):
    """A section of ``project(j, .)`` into the facet chart."""
    if j == 0:
        return (0, z[0], z[1])
    if j == 1:
        return (z[0], 0, z[1])
    if j == 2:
        return (z[0], z[1], 0)
    return (z[0], z[1], 0)


def newton_coords(j: int, y):
    """Newton-polygon coordinates of a wall lattice point.

    On wall ``y_j = 0`` (j <= 2) the pairing <y, m> restricted to wall
    points equals <project(j, y), newton_coords(j, m)> exactly; on the wall
    ``sum = 5`` it does so up to a summand constant across the wall.
    """
    if j <= 2:
        return project(j, y)
    return (y[0], y[1])


@dataclass(frozen=True)
class FacetFrame:
    """Coordinate bookkeeping for one facet of the simplex."""
    facet: int

    @property
    def rays(self):
        return RAYS

    def chart(self, m):
        return SIMPLEX.facet_chart(m, self.facet)

    def unchart(self, y):
        return SIMPLEX.facet_unchart(y, self.facet)

    def wall_two_face(self, j: int):
        """Global 2-face key (facet pair) seen by leg direction j."""
        k = self.facet
        if j <= 2:
            other = SIMPLEX.facet_columns(k)[j] + 1
        else:
            # the sum=5 wall: on facet 0 it is the m_1 = -1 wall (facet 1),
            # on any other facet the sum=1 wall (facet 0)
            other = 1 if k == 0 else 0
        return (min(k, other), max(k, other))

    def project(self, j, y):
        return project(j, y)


# ---------------------------------------------------------------------------
# Plane tropical curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveEdge:
    """One edge of a plane tropical curve, scaled integer data.

    ``normal`` and ``offset`` give the supporting line ``<Z, normal> =
    offset``; ``direction`` is the primitive edge direction (for internal
    edges oriented from ``endpoints[0]`` to ``endpoints[1]``, for outer
    edges outward).  ``dual_pair`` are the global ids of the triangulation
    edge the curve edge is dual to.
    """
    index: int
    kind: str                  # "internal" or "outer"
    dual_pair: tuple
    normal: tuple
    offset: int
    direction: tuple
    endpoints: tuple           # 1 base point (outer) or 2 endpoints (internal)


class TropicalPlaneCurve:
    """A quintic tropical curve dual to a triangulated 2-face.

    Vertices sit at the exact tie points of the scaled tropical polynomial
    ``min_m <Z, nu(m)> + A_m``; one vertex per triangle, one internal edge
    per interior triangulation edge, one outer ray per boundary edge.
    """

    def __init__(self, facet, leg, scale, newton, heights_scaled,
                 triangles):
        self.facet = facet
        self.leg = leg
        self.scale = scale
        self.newton = dict(newton)            # pid -> integer 2-vector
        self.heights_scaled = dict(heights_scaled)  # pid -> integer
        self.triangles = tuple(sorted(triangles, key=lambda c: sorted(c)))
        self.vertices = tuple(self._dual_vertex(c) for c in self.triangles)
        self._tri_index = {c: i for i, c in enumerate(self.triangles)}
        self.edges = self._build_edges()

    def _dual_vertex(self, cell):
        a, b, c = sorted(cell)
        na, nb, nc = self.newton[a], self.newton[b], self.newton[c]
        ha, hb, hc = (self.heights_scaled[a], self.heights_scaled[b],
                      self.heights_scaled[c])
        # <Z, na - nb> = hb - ha ; <Z, na - nc> = hc - ha
        m00, m01 = na[0] - nb[0], na[1] - nb[1]
        m10, m11 = na[0] - nc[0], na[1] - nc[1]
        det = m00 * m11 - m01 * m10
        if det == 0:
            raise DegenerateHeights("degenerate triangle in curve duality")
        r0, r1 = hb - ha, hc - ha
        z0 = r0 * m11 - r1 * m01
        z1 = m00 * r1 - m10 * r0
        if det < 0:
            det, z0, z1 = -det, -z0, -z1
        if det != 1:
            # unimodular triangulations always give det 1 in newton coords
            if z0 % det or z1 % det:
                raise DegenerateHeights("curve vertex is not lattice-exact")
            z0 //= det
            z1 //= det
        return (z0, z1)

    def _build_edges(self):
        by_pair = {}
        for cell in self.triangles:
            for pair in itertools.combinations(sorted(cell), 2):
                by_pair.setdefault(pair, []).append(cell)
        edges = []
        for pair in sorted(by_pair):
            tris = by_pair[pair]
            a, b = pair
            g = (self.newton[a][0] - self.newton[b][0],
                 self.newton[a][1] - self.newton[b][1])
            off = self.heights_scaled[b] - self.heights_scaled[a]
            rot = (-g[1], g[0])
            if len(tris) == 2:
                p = self.vertices[self._tri_index[tris[0]]]
                q = self.vertices[self._tri_index[tris[1]]]
                d = (q[0] - p[0], q[1] - p[1])
                if d == (0, 0):
                    raise DegenerateHeights("zero-length internal curve edge")
                gg = gcd(abs(d[0]), abs(d[1]))
                d = (d[0] // gg, d[1] // gg)
                assert d in (rot, (-rot[0], -rot[1]))
                edges.append(("internal", pair, g, off, d, (p, q)))
            else:
                (tri,) = tris
                base = self.vertices[self._tri_index[tri]]
                third = next(iter(set(tri) - set(pair)))
                w = (self.newton[third][0] - self.newton[a][0],
                     self.newton[third][1] - self.newton[a][1])
                s = rot[0] * w[0] + rot[1] * w[1]
                assert s != 0, "outer edge parallel to its triangle"
                d = rot if s > 0 else (-rot[0], -rot[1])
                edges.append(("outer", pair, g, off, d, (base,)))
        return tuple(CurveEdge(i, *e) for i, e in enumerate(edges))

    # -- queries -------------------------------------------------------------

    def point_on_edge(self, edge_index: int, p) -> str:
        """Classify a scaled point against a closed edge:
        "interior", "vertex" or "outside"."""
        e = self.edges[edge_index]
        p = (Fraction(p[0]), Fraction(p[1]))
        if p[0] * e.normal[0] + p[1] * e.normal[1] != e.offset:
            return "outside"
        lam = p[0] * e.direction[0] + p[1] * e.direction[1]
        lam0 = sum(x * d for x, d in zip(e.endpoints[0], e.direction))
        if e.kind == "outer":
            if lam == lam0:
                return "vertex"
            return "interior" if lam > lam0 else "outside"
        lam1 = sum(x * d for x, d in zip(e.endpoints[1], e.direction))
        if lam in (lam0, lam1):
            return "vertex"
        return "interior" if lam0 < lam < lam1 else "outside"

    def internal_edge_count(self):
        return sum(1 for e in self.edges if e.kind == "internal")

    def outer_edge_count(self):
        return sum(1 for e in self.edges if e.kind == "outer")

    def vertex_star(self, tri_index: int):
        """Outgoing primitive directions of the edges at one curve vertex."""
        cell = self.triangles[tri_index]
        v = self.vertices[tri_index]
        dirs = []
        for e in self.edges:
            if not set(e.dual_pair) <= set(cell):
                continue
            if e.kind == "outer":
                dirs.append(e.direction)
            else:
                if e.endpoints[0] == v:
                    dirs.append(e.direction)
                else:
                    dirs.append((-e.direction[0], -e.direction[1]))
        return dirs

    def verify(self):
        """Exact structural checks: balancing and dual positions."""
        for i, cell in enumerate(self.triangles):
            v = self.vertices[i]
            vals = {pid: v[0] * n[0] + v[1] * n[1] + self.heights_scaled[pid]
                    for pid, n in self.newton.items()}
            tie = min(vals.values())
            for pid in cell:
                if vals[pid] != tie:
                    raise AssertionError("dual vertex misses its triangle tie")
            for pid, val in vals.items():
                if val < tie:
                    raise AssertionError("dual vertex below global minimum")
            star = self.vertex_star(i)
            if len(star) != 3:
                raise AssertionError("curve vertex is not trivalent")
            if (sum(d[0] for d in star), sum(d[1] for d in star)) != (0, 0):
                raise AssertionError("balancing fails at a curve vertex")
        return True

    def vertex_unscaled(self, i):
        z = self.vertices[i]
        return (Fraction(z[0], self.scale), Fraction(z[1], self.scale))

    def to_json_dict(self):
        return {
            "facet": self.facet,
            "leg": self.leg + 1,
            "vertices": [[str(Fraction(z[0], self.scale)),
                          str(Fraction(z[1], self.scale))]
                         for z in self.vertices],
            "edges": [{
                "index": e.index,
                "kind": e.kind,
                "dual_pair": list(e.dual_pair),
                "direction": list(e.direction),
                "endpoints": [[str(Fraction(c, self.scale)) for c in pt]
                              for pt in e.endpoints],
            } for e in self.edges],
        }


# ---------------------------------------------------------------------------
# The full 5 x 4 curve family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FramePairing:
    """Unimodular affine identification of the two frame instances of one
    geometric 2-face: ``nu_second = linear @ nu_first + shift``."""
    first: tuple    # (facet, leg)
    second: tuple
    linear: tuple   # 2x2 integer matrix, |det| = 1
    shift: tuple


class QuinticCurveSet:
    """All 20 curve instances (5 facets x 4 legs) over one height function."""

    def __init__(self, heights: HeightFunction):
        self.heights = heights
        denoms = [a.denominator for a in heights.entries]
        scale = 1
        for d in denoms:
            scale = scale * d // gcd(scale, d)
        self.scale = scale
        self.frames = tuple(FacetFrame(k) for k in range(5))
        self.subdivisions = {}
        for kl in itertools.combinations(range(5), 2):
            face = SIMPLEX.two_faces[kl]
            sub = induced_subdivision(heights, face,
                                      require_triangulation=True)
            if len(sub.cells) != 25:
                raise DegenerateHeights(
                    f"2-face {kl} has {len(sub.cells)} cells, expected 25")
            self.subdivisions[kl] = sub
        self.curves = {}
        for k in range(5):
            for j in range(4):
                self.curves[(k, j)] = self._build_curve(k, j)
        self.pairings = self._build_pairings()

    def _newton_map(self, k: int, j: int):
        frame = self.frames[k]
        kl = frame.wall_two_face(j)
        face = SIMPLEX.two_faces[kl]
        return {pid: newton_coords(j, frame.chart(SIMPLEX.boundary_points[pid]))
                for pid in face.point_ids}

    def _build_curve(self, k: int, j: int) -> TropicalPlaneCurve:
        frame = self.frames[k]
        kl = frame.wall_two_face(j)
        sub = self.subdivisions[kl]
        newton = self._newton_map(k, j)
        hts = {pid: int(self.heights.value_by_id(pid) * self.scale)
               for pid in newton}
        return TropicalPlaneCurve(k, j, self.scale, newton, hts, sub.cells)

    def _build_pairings(self):
        seen = {}
        for (k, j) in sorted(self.curves):
            kl = self.frames[k].wall_two_face(j)
            seen.setdefault(kl, []).append((k, j))
        pairings = {}
        for kl, inst in seen.items():
            assert len(inst) == 2, "each 2-face must appear in two frames"
            first, second = inst
            nu1 = self._newton_map(*first)
            nu2 = self._newton_map(*second)
            pids = sorted(nu1)
            # affine map: nu2 = L @ nu1 + shift, solved from the point cloud
            rows = []
            rhs0 = []
            rhs1 = []
            for pid in pids:
                rows.append([nu1[pid][0], nu1[pid][1], 1])
                rhs0.append(nu2[pid][0])
                rhs1.append(nu2[pid][1])
            s0 = linalg.solve_rational(rows, rhs0)
            s1 = linalg.solve_rational(rows, rhs1)
            assert s0.kind == "unique" and s1.kind == "unique"
            lin = ((int(s0.point[0]), int(s0.point[1])),
                   (int(s1.point[0]), int(s1.point[1])))
            shift = (int(s0.point[2]), int(s1.point[2]))
            det = lin[0][0] * lin[1][1] - lin[0][1] * lin[1][0]
            assert det in (1, -1), "frame pairing must be unimodular"
            pairings[kl] = FramePairing(first, second, lin, shift)
        return pairings

    def map_to_partner(self, k: int, j: int, z):
        """Send a scaled point in frame (k, j) to the partner frame of the
        same geometric 2-face; returns ((k', j'), z')."""
        kl = self.frames[k].wall_two_face(j)
        pr = self.pairings[kl]
        lin, shift = pr.linear, pr.shift
        s = self.scale
        if pr.first == (k, j):
            z2 = (lin[0][0] * z[0] + lin[0][1] * z[1] + shift[0] * s,
                  lin[1][0] * z[0] + lin[1][1] * z[1] + shift[1] * s)
            return pr.second, z2
        assert pr.second == (k, j)
        det = lin[0][0] * lin[1][1] - lin[0][1] * lin[1][0]
        inv = ((lin[1][1] * det, -lin[0][1] * det),
               (-lin[1][0] * det, lin[0][0] * det))
        w = (z[0] - shift[0] * s, z[1] - shift[1] * s)
        z2 = (inv[0][0] * w[0] + inv[0][1] * w[1],
              inv[1][0] * w[0] + inv[1][1] * w[1])
        return pr.first, z2

    def geometric_edge_id(self, k: int, j: int, edge_index: int):
        """Frame-independent name of a curve edge: 2-face plus dual pair."""
        kl = self.frames[k].wall_two_face(j)
        e = self.curves[(k, j)].edges[edge_index]
        return (kl, e.dual_pair)


def build_curve_set(heights: HeightFunction) -> QuinticCurveSet:
    return QuinticCurveSet(heights)
