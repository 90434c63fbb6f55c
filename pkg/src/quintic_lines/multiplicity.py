"""Tropical multiplicity of a rigid line via a Čech-style lattice map.

The line is covered by six opens (one per vertex of the >-< graph: two
trivalent, four ends) overlapping along its five edges.  The cover data is
a map of lattices

    Z^3 (+) Z^3 (+) Z^4_ends  ->  (+)_edges Z^3 / Z edge_direction

sending a trivalent-vertex class to its restrictions and an end class to
its image in the adjacent edge quotient, with a sign per overlap fixed by
a global vertex order.  The absolute cokernel torsion of this 10 x 10
integer matrix is the tropical multiplicity; it equals |H_1| of the mirror
Lagrangian, so 1 labels a 3-sphere and 2 a real projective 3-space.

Each end's rank-one contribution comes from its constraint plane: the
saturated rank-2 sublattice spanned by the leg direction and a lift of the
landing edge's direction (the monodromy-invariant plane at the point where
the line hits the discriminant).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .curves import RAYS, QuinticCurveSet, lift
from .search import TropicalLine, TYPE_PAIRS


class PlaneMissingLegDirection(ValueError):
    """Constraint plane does not contain its leg direction."""


class NotRigid(ValueError):
    """Čech matrix is singular: the configuration moves in a family."""


@dataclass(frozen=True)
class ConstraintPlane:
    """Saturated rank-2 sublattice containing a leg direction."""
    leg: int
    basis: tuple        # two integer 3-vectors, canonical Hermite basis

    def contains(self, v) -> bool:
        res = linalg.solve_rational(
            [[self.basis[0][i], self.basis[1][i]] for i in range(3)], list(v))
        return res.kind == "unique" and all(x.denominator == 1
                                            for x in res.point)


def constraint_plane(curveset: QuinticCurveSet, facet: int, leg: int,
                     edge_index: int) -> ConstraintPlane:
    """Plane spanned by the leg direction and the landing edge's lift."""
    curve = curveset.curves[(facet, leg)]
    e = curve.edges[edge_index]
    return constraint_plane_from_direction(leg, e.direction)


def constraint_plane_from_direction(leg: int, edge_dir) -> ConstraintPlane:
    d3 = lift(leg, edge_dir)
    basis = linalg.saturate([RAYS[leg], d3])
    if len(basis) != 2:
        raise PlaneMissingLegDirection(
            f"leg {leg}: direction {edge_dir} does not span a plane")
    plane = ConstraintPlane(leg, tuple(tuple(b) for b in basis))
    if not plane.contains(RAYS[leg]):
        raise PlaneMissingLegDirection(
            f"leg {leg}: plane misses the leg direction")
    return plane


def quotient_map(v):
    """Canonical 2x3 presentation of Z^3 / Z v for a primitive v."""
    u = linalg.primitive_completion(v)
    return (tuple(u[1]), tuple(u[2]))


def _plane_mod_direction_generator(plane: ConstraintPlane, r):
    """Generator of plane / Z r as an element of the plane."""
    b0, b1 = plane.basis
    res = linalg.solve_rational([[b0[i], b1[i]] for i in range(3)], list(r))
    if res.kind != "unique" or any(x.denominator != 1 for x in res.point):
        raise PlaneMissingLegDirection("leg direction not in its plane")
    x, y = int(res.point[0]), int(res.point[1])
    if gcd(abs(x), abs(y)) != 1:
        raise PlaneMissingLegDirection("leg direction imprimitive in plane")
    # complete (x, y) to a unimodular 2x2; second row generates the quotient
    u, v = _ext_gcd_pair(x, y)
    return tuple(u * b0[i] + v * b1[i] for i in range(3))


def _ext_gcd_pair(x, y):
    """(u, v) with x*v - y*u = 1 for coprime (x, y)."""
    # extended euclid: find p,q with p*x + q*y = 1, then (u,v) = (-q, p)
    a, b = x, y
    p0, p1, q0, q1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        p0, p1 = p1, p0 - k * p1
        q0, q1 = q1, q0 - k * q1
    if a < 0:
        p0, q0 = -p0, -q0
    return (-q0, p0)


@dataclass(frozen=True)
class CechData:
    """The 10x10 integer matrix plus labels of its blocks."""
    matrix: tuple
    vertex_order: tuple   # "A", "B", "end0".."end3"
    edge_order: tuple


def build_cech_matrix(line: TropicalLine, planes,
                      flip_overlap_signs=(), swap_vertices=False,
                      transform=None):
    """Signed restriction matrix of the admissible cover of a line.

    Column blocks: 3 for each trivalent vertex, then one per end (the rank
    of its plane modulo the leg direction).  Row blocks: two rows per edge
    of the line in the canonical quotient basis of Z^3 / Z direction.
    ``flip_overlap_signs``, ``swap_vertices`` and ``transform`` (a
    unimodular 3x3 change of the ambient frame) exist so invariance of the
    cokernel under these conventions can be tested directly.
    """
    pa = tuple(line.legs_at(True))   # legs at v1
    pb = tuple(line.legs_at(False))
    if len(pa) != 2 or len(pb) != 2:
        raise ValueError("line must carry two legs per vertex")

    if transform is None:
        tv = lambda v: tuple(v)
    else:
        if abs(linalg.det_int(transform)) != 1:
            raise ValueError("frame change must be unimodular")
        tv = lambda v: tuple(sum(transform[i][k] * v[k] for k in range(3))
                             for i in range(3))
    leg_dirs = [tv(RAYS[j]) for j in range(4)]
    t_planes = [ConstraintPlane(p.leg, tuple(tv(b) for b in p.basis))
                for p in planes]

    # vertex order: trivalent first (v1 < v2), then ends by leg index
    edges = [("bounded", None)] + [("leg", j) for j in range(4)]
    rows = []
    for eidx, (kind, j) in enumerate(edges):
        if kind == "bounded":
            direction = tv(line.direction) if not swap_vertices else tv(
                tuple(-x for x in line.direction))
            q = quotient_map(direction)
            lower, upper = ("A", "B") if not swap_vertices else ("B", "A")
        else:
            direction = leg_dirs[j]
            q = quotient_map(direction)
            lower = "A" if (j in pa) != swap_vertices else "B"
            upper = f"end{j}"
        sign = -1 if eidx in flip_overlap_signs else 1
        for qrow in q:
            row = []
            for col_v in ("A", "B"):
                if col_v == lower:
                    row.extend(sign * x for x in qrow)
                elif col_v == upper:
                    row.extend(-sign * x for x in qrow)
                else:
                    row.extend((0, 0, 0))
            for k in range(4):
                name = f"end{k}"
                if name == upper and kind == "leg" and k == j:
                    g = _plane_mod_direction_generator(t_planes[k],
                                                       leg_dirs[k])
                    val = sum(qr * gi for qr, gi in zip(qrow, g))
                    row.append(-sign * val)
                elif name == lower:
                    raise AssertionError("ends are never the lower vertex")
                else:
                    row.append(0)
            rows.append(row)
    matrix = tuple(tuple(r) for r in rows)
    return CechData(matrix, ("A", "B", "end0", "end1", "end2", "end3"),
                    tuple(e[0] if e[0] == "bounded" else f"leg{e[1]}"
                          for e in edges))


@dataclass(frozen=True)
class Multiplicity:
    value: int
    topology: str


def topology_label(m: int) -> str:
    if m == 1:
        return "S3"
    if m == 2:
        return "RP3"
    return f"QHS(H1={m})"


def multiplicity(line: TropicalLine, planes) -> Multiplicity:
    """Cokernel torsion of the Čech matrix; requires a rigid line."""
    cech = build_cech_matrix(line, planes)
    tor = linalg.cokernel_torsion([list(r) for r in cech.matrix])
    if tor is None:
        raise NotRigid("Čech matrix has positive corank")
    return Multiplicity(tor, topology_label(tor))


def line_planes(curveset: QuinticCurveSet, line: TropicalLine):
    return tuple(constraint_plane(curveset, line.facet, j,
                                  line.legs[j].edge_index)
                 for j in range(4))


def is_admissible(line: TropicalLine) -> bool:
    """All four ends land on bounded (internal) curve edges."""
    return all(inc.edge_kind == "internal" for inc in line.legs)
