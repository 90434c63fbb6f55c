"""Lattice simplex data, height functions and regular subdivisions.

The ambient object is the dilated 4-simplex ``conv{0, 5e_1, ..., 5e_4}``
translated by ``(-1,-1,-1,-1)`` so its unique interior lattice point is the
origin.  Heights live on the 125 boundary lattice points; lifting a face's
points by its heights and taking the lower convex hull induces the regular
subdivision that everything downstream (curves, lines, multiplicities) is
dual to.

All hull computations are exact: integer points, ``Fraction`` heights, and
a gift-wrapping walk over lower facets.  No floats.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Iterable, Sequence

from . import linalg


HEIGHT_DENOMINATOR = 10 ** 6


class DegenerateHeights(ValueError):
    """A face's lower hull has a non-simplicial cell where a triangulation
    is required, or a lattice point fails to lift to a hull vertex."""


class NotATriangulation(ValueError):
    """Operation requires all cells to be simplices."""


class Unbounded(ValueError):
    """Half-space intersection is not a polytope."""


# ---------------------------------------------------------------------------
# The one-parabola and ten-term convex height functions
# ---------------------------------------------------------------------------

def phi0(x) -> Fraction:
    """Piecewise linear 'discrete parabola': value n(n-1)/2 at integers,
    linear in between, slope increasing by 1 at each integer."""
    x = Fraction(x)
    k = floor(x)
    return Fraction(k * (k - 1), 2) + (x - k) * k


_PHI1_SUMS = ((0,), (1,), (2,), (3,), (0, 1), (1, 2), (2, 3),
              (0, 1, 2), (1, 2, 3), (0, 1, 2, 3))


def phi1(x: Sequence) -> Fraction:
    """Sum of ten discrete parabolas over the consecutive coordinate sums
    x1, .., x4, x1+x2, x2+x3, x3+x4, x1+x2+x3, x2+x3+x4, x1+x2+x3+x4."""
    x = [Fraction(v) for v in x]
    total = Fraction(0)
    for idx in _PHI1_SUMS:
        total += phi0(sum(x[i] for i in idx))
    return total


HEIGHT_EVAL_SHIFT = 2


def base_height(m) -> Fraction:
    """Symmetric height of a boundary lattice point: ``phi1`` evaluated at
    ``m + (2,2,2,2)``.

    The shift keeps every one of the ten consecutive sums at or above 1,
    i.e. outside the flat stretch [0,1] of the discrete parabola.  This is
    what makes every boundary lattice point a ray of the lifted cone and
    every one of the 625 maximal cones simplicial (checked in the test
    suite; smaller shifts flatten the cones at the simplex corners).
    """
    return phi1(tuple(c + HEIGHT_EVAL_SHIFT for c in m))


# ---------------------------------------------------------------------------
# The simplex and its face data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """A proper face of the simplex, with a unimodular lattice chart.

    ``point_ids`` index into ``QuinticSimplex.boundary_points``; the chart
    maps each face lattice point into Z^dim so lower hulls can run in the
    face's intrinsic coordinates.
    """
    dim: int
    vertex_ids: tuple
    point_ids: tuple
    chart_points: tuple  # chart image per point, aligned with point_ids


class QuinticSimplex:
    """Vertex and boundary-lattice-point bookkeeping for the dilated
    4-simplex, its five facets and ten 2-faces."""

    def __init__(self):
        shift = (-1, -1, -1, -1)
        verts = [shift]
        for i in range(4):
            v = list(shift)
            v[i] += 5
            verts.append(tuple(v))
        self.vertices = tuple(verts)

        pts = []
        for comp in itertools.product(range(6), repeat=4):
            if sum(comp) <= 5:
                pts.append(tuple(c - 1 for c in comp))
        pts.sort()
        self.all_points = tuple(pts)
        self.boundary_points = tuple(p for p in pts if p != (0, 0, 0, 0))
        self.point_index = {p: i for i, p in enumerate(self.boundary_points)}

        self.facets = tuple(self._build_facet(k) for k in range(5))
        self.two_faces = {}
        for k, l in itertools.combinations(range(5), 2):
            self.two_faces[(k, l)] = self._build_two_face(k, l)

    # facet k omits vertex k; its chart puts its tetrahedron at
    # conv{0, 5e1, 5e2, 5e3}
    @staticmethod
    def facet_columns(k: int) -> tuple:
        if k == 0:
            return (1, 2, 3)
        return tuple(j for j in range(4) if j != k - 1)

    def _on_facet(self, p, k) -> bool:
        if k == 0:
            return sum(p) == 1
        return p[k - 1] == -1

    def facet_chart(self, p, k) -> tuple:
        return tuple(p[j] + 1 for j in self.facet_columns(k))

    def facet_unchart(self, y, k) -> tuple:
        """Inverse of ``facet_chart`` back onto facet ``k``."""
        if k == 0:
            m = [0, y[0] - 1, y[1] - 1, y[2] - 1]
            m[0] = 1 - m[1] - m[2] - m[3]
            return tuple(m)
        m = [-1] * 4
        for y_i, j in zip(y, self.facet_columns(k)):
            m[j] = y_i - 1
        return tuple(m)

    def _build_facet(self, k) -> Face:
        ids = tuple(i for i, p in enumerate(self.boundary_points)
                    if self._on_facet(p, k))
        chart = tuple(self.facet_chart(self.boundary_points[i], k)
                      for i in ids)
        vids = tuple(j for j in range(5) if j != k)
        return Face(3, vids, ids, chart)

    def _build_two_face(self, k, l) -> Face:
        ids = tuple(i for i, p in enumerate(self.boundary_points)
                    if self._on_facet(p, k) and self._on_facet(p, l))
        vids = tuple(j for j in range(5) if j not in (k, l))
        # chart drops to the two largest surviving vertex directions
        b, c = vids[1] - 1, vids[2] - 1
        chart = tuple((self.boundary_points[i][b] + 1,
                       self.boundary_points[i][c] + 1) for i in ids)
        return Face(2, vids, ids, chart)

    def two_face_of_facets(self, k, l) -> Face:
        return self.two_faces[(min(k, l), max(k, l))]


SIMPLEX = QuinticSimplex()


# ---------------------------------------------------------------------------
# Height functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeightFunction:
    """Rational heights on the boundary lattice points.

    ``make`` draws the perturbed model: base value ``base_height(m)`` plus
    a noise term ``eps_m = u / 10^6`` with ``u`` a seeded uniform integer in
    ``[-K, K]`` and ``magnitude = K / 10^6``.  The base values are >= 15, so
    perturbed heights stay positive for any sane magnitude.
    """
    seed: int
    magnitude: Fraction
    entries: tuple  # Fraction per boundary point, canonical point order

    @staticmethod
    def make(seed: int, magnitude) -> "HeightFunction":
        magnitude = Fraction(magnitude)
        if magnitude < 0:
            raise ValueError("magnitude must be nonnegative")
        k_int = magnitude * HEIGHT_DENOMINATOR
        if k_int.denominator != 1:
            raise ValueError(
                f"magnitude must be a multiple of 1/{HEIGHT_DENOMINATOR}")
        k = int(k_int)
        rng = random.Random(seed)
        vals = []
        for p in SIMPLEX.boundary_points:
            base = base_height(p)
            eps = Fraction(rng.randint(-k, k), HEIGHT_DENOMINATOR) if k else Fraction(0)
            if base + eps < 0:  # cannot trigger for the shifted base, kept as a guard
                eps = -eps
            vals.append(base + eps)
        return HeightFunction(seed, magnitude, tuple(vals))

    @staticmethod
    def from_entries(entries, seed: int = -1, magnitude=0) -> "HeightFunction":
        """Explicit heights (bypasses the perturbed-parabola model)."""
        vals = tuple(Fraction(v) for v in entries)
        if len(vals) != len(SIMPLEX.boundary_points):
            raise ValueError("need one height per boundary lattice point")
        return HeightFunction(seed, Fraction(magnitude), vals)

    def value(self, point) -> Fraction:
        return self.entries[SIMPLEX.point_index[tuple(point)]]

    def value_by_id(self, pid: int) -> Fraction:
        return self.entries[pid]

    # -- serialization ------------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "magnitude": _frac_str(self.magnitude),
            "entries": [
                {"m": list(p), "a": _frac_str(a)}
                for p, a in zip(SIMPLEX.boundary_points, self.entries)
            ],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "HeightFunction":
        vals = [None] * len(SIMPLEX.boundary_points)
        for e in d["entries"]:
            pid = SIMPLEX.point_index[tuple(e["m"])]
            vals[pid] = Fraction(e["a"])
        if any(v is None for v in vals):
            raise ValueError("heights file does not cover all lattice points")
        return HeightFunction(int(d["seed"]), Fraction(d["magnitude"]),
                              tuple(vals))


def _frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def make_heights(seed: int, magnitude) -> HeightFunction:
    return HeightFunction.make(seed, magnitude)


# ---------------------------------------------------------------------------
# Exact lower hulls / regular subdivisions
# ---------------------------------------------------------------------------

def _affine_rank(points) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    return linalg.rank_rational(rows)


def _kernel_functionals(points):
    """Basis of affine functionals vanishing on all given chart points."""
    d = len(points[0])
    rows = [list(p) + [1] for p in points]
    res = linalg.solve_rational(rows, [0] * len(rows))
    if res.kind == "unique":
        return []
    return [(tuple(v[:d]), v[d]) for v in res.kernel]


def _eval_aff(func, p) -> Fraction:
    c, c0 = func
    return sum(ci * pi for ci, pi in zip(c, p)) + c0


def lower_hull_cells(points, heights):
    """All maximal cells of the lower hull of ``(point, height)`` lifts.

    ``points`` are integer chart coordinates affinely spanning their space;
    returns ``[(cell_indices_frozenset, functional)]`` where the functional
    ``(c, c0)`` satisfies ``<c, p> + c0 <= h(p)`` everywhere, with equality
    exactly on the cell.  Deterministic wrap order.
    """
    n = len(points)
    d = len(points[0])
    heights = [Fraction(h) for h in heights]
    if _affine_rank(list(points)) != d:
        raise ValueError("point set must affinely span its chart space")

    # initial support touching exactly the lexicographically least point
    i0 = min(range(n), key=lambda i: points[i])
    p0 = points[i0]
    spread = max(abs(p[i] - q[i]) for p in points for q in points
                 for i in range(d))
    big = 2 * spread + 2
    w = tuple(-(big ** (d - 1 - idx)) for idx in range(d))
    ratios = []
    for i, p in enumerate(points):
        if i == i0:
            continue
        wq = sum(wi * (pi - p0i) for wi, pi, p0i in zip(w, p, p0))
        assert wq < 0
        ratios.append(Fraction(heights[i] - heights[i0]) / wq)
    scale = max(ratios + [Fraction(0)]) + 1
    c = tuple(scale * wi for wi in w)
    c0 = heights[i0] - sum(ci * pi for ci, pi in zip(c, p0))
    func = (c, c0)

    def tie_set(f):
        return [i for i in range(n) if _eval_aff(f, points[i]) == heights[i]]

    def rotate(f, g):
        """Tilt support f along g (>=0 somewhere) until a new point ties."""
        best = None
        for i in range(n):
            gv = _eval_aff(g, points[i])
            if gv > 0:
                gap = heights[i] - _eval_aff(f, points[i])
                r = gap / gv
                if best is None or r < best:
                    best = r
        if best is None:
            return None
        c, c0 = f
        gc, g0 = g
        return (tuple(x + best * y for x, y in zip(c, gc)), c0 + best * g0)

    support = [i0]
    while _affine_rank([points[i] for i in support]) < d:
        kers = _kernel_functionals([points[i] for i in support])
        g = None
        for cand in kers:
            vals = [_eval_aff(cand, p) for p in points]
            if any(v != 0 for v in vals):
                g = cand if max(vals) > 0 else (
                    tuple(-x for x in cand[0]), -cand[1])
                break
        assert g is not None
        func = rotate(func, g)
        support = tie_set(func)

    first = frozenset(support)
    cells = {first: func}
    queue = [first]
    while queue:
        cell = queue.pop()
        func = cells[cell]
        cpts = sorted(cell)
        for ridge, outward in _cell_ridges(cpts, points):
            nxt = rotate(func, outward)
            if nxt is None:
                continue  # hull boundary
            nset = frozenset(tie_set(nxt))
            if nset not in cells:
                cells[nset] = nxt
                queue.append(nset)
    ordered = sorted(cells, key=lambda s: tuple(sorted(s)))
    return [(s, cells[s]) for s in ordered]


def _cell_ridges(cell_indices, points):
    """(ridge index set, outward affine functional) per facet of the cell.

    The outward functional vanishes on the ridge and is negative on the rest
    of the cell, so tilting along it walks to the neighboring cell.
    """
    d = len(points[0])
    cpts = [points[i] for i in cell_indices]
    out = {}
    for sub in itertools.combinations(range(len(cpts)), d):
        subset = [cpts[i] for i in sub]
        if _affine_rank(subset) != d - 1:
            continue
        kers = _kernel_functionals(subset)
        g = next((k for k in kers
                  if any(_eval_aff(k, p) != 0 for p in cpts)), None)
        if g is None:
            continue
        vals = [_eval_aff(g, p) for p in cpts]
        if all(v <= 0 for v in vals):
            pass
        elif all(v >= 0 for v in vals):
            g = (tuple(-x for x in g[0]), -g[1])
            vals = [-v for v in vals]
        else:
            continue  # subset hyperplane cuts the cell: not a face
        ridge = frozenset(cell_indices[i] for i, v in enumerate(vals)
                          if v == 0)
        if ridge not in out:
            out[ridge] = g
    return sorted(out.items(), key=lambda kv: tuple(sorted(kv[0])))


@dataclass(frozen=True)
class RegularSubdivision:
    """Lower-hull subdivision of one face: cells are frozensets of global
    boundary-point ids; functionals live in the face chart."""
    face: Face
    cells: tuple          # frozenset of global point ids per cell
    functionals: tuple    # (c, c0) per cell, chart coordinates
    dim: int

    @property
    def is_triangulation(self) -> bool:
        return all(len(c) == self.dim + 1 for c in self.cells)

    def adjacency(self):
        """Pairs of cell indices sharing a ridge (dim-1 many points)."""
        pairs = []
        for i, j in itertools.combinations(range(len(self.cells)), 2):
            if len(self.cells[i] & self.cells[j]) >= self.dim:
                pairs.append((i, j))
        return tuple(pairs)


def induced_subdivision(heights: HeightFunction, face: Face,
                        require_triangulation: bool = False) -> RegularSubdivision:
    """Regular subdivision of a face's lattice points under the heights."""
    pts = list(face.chart_points)
    hts = [heights.value_by_id(i) for i in face.point_ids]
    raw = lower_hull_cells(pts, hts)
    cells = []
    funcs = []
    for local, func in raw:
        cells.append(frozenset(face.point_ids[i] for i in local))
        funcs.append(func)
    sub = RegularSubdivision(face, tuple(cells), tuple(funcs), face.dim)
    if require_triangulation and not sub.is_triangulation:
        bad = next(c for c in sub.cells if len(c) != face.dim + 1)
        raise DegenerateHeights(
            f"cell {sorted(bad)} of a {face.dim}-face is not a simplex")
    if require_triangulation:
        used = set().union(*sub.cells)
        if used != set(face.point_ids):
            raise DegenerateHeights(
                "some lattice point is not a vertex of the subdivision")
    return sub


def cell_normalized_volume(sub: RegularSubdivision, cell: frozenset) -> int:
    """Normalized volume (d! * euclidean) of a simplex cell in chart coords."""
    ids = sorted(cell)
    chart = {pid: sub.face.chart_points[sub.face.point_ids.index(pid)]
             for pid in ids}
    base = chart[ids[0]]
    rows = [[chart[p][i] - base[i] for i in range(sub.dim)] for p in ids[1:]]
    if len(rows) != sub.dim:
        raise NotATriangulation("volume needs a simplex cell")
    return abs(linalg.det_int(rows))


def is_unimodular(sub: RegularSubdivision) -> bool:
    if not sub.is_triangulation:
        raise NotATriangulation("subdivision has non-simplex cells")
    return all(cell_normalized_volume(sub, c) == 1 for c in sub.cells)


# ---------------------------------------------------------------------------
# Dual polytope by exact double description
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualPolytope:
    """Vertices of the intersection of the height half-spaces
    ``<n, m> >= -a_m`` together with per-vertex tight constraint sets."""
    vertices: tuple       # Fraction 4-tuples, lexicographically sorted
    tight: tuple          # frozenset of half-space indices per vertex
    halfspaces: tuple     # (m, a) pairs


def dual_polytope(heights: HeightFunction) -> DualPolytope:
    halfspaces = [(p, heights.value_by_id(i))
                  for i, p in enumerate(SIMPLEX.boundary_points)]
    verts, tights = halfspace_vertices(halfspaces, dim=4)
    return DualPolytope(tuple(verts), tuple(tights), tuple(halfspaces))


def halfspace_vertices(halfspaces, dim):
    """Exact vertex enumeration of ``{n : <n, m> + a >= 0}``.

    Incremental double description seeded with a box that provably contains
    any bounded intersection (Cramer bound on basic solutions); a vertex
    still touching the box certifies unboundedness.
    """
    amax = max((abs(a) for _, a in halfspaces), default=Fraction(1))
    # any vertex solves a dim x dim system with integer coefficients |m|<=5:
    # |coordinate| <= dim! * 5^(dim-1) * max|a| since |det| >= 1
    bound = 24 * 125 * (amax + 1)
    r = Fraction(int(bound) + 1)

    box = []
    for i in range(dim):
        e = [0] * dim
        e[i] = 1
        box.append((tuple(e), r))          # n_i + r >= 0
        box.append((tuple(-x for x in e), r))  # -n_i + r >= 0
    nreal = len(halfspaces)
    allhs = list(halfspaces) + box

    def value(hs, pt):
        m, a = hs
        return sum(Fraction(mi) * pi for mi, pi in zip(m, pt)) + a

    def true_tight(pt, upto):
        mask = 0
        for idx in range(upto):
            if value(allhs[idx], pt) == 0:
                mask |= 1 << idx
        for b in range(len(box)):
            if value(allhs[nreal + b], pt) == 0:
                mask |= 1 << (nreal + b)
        return mask

    verts = []
    for corner in itertools.product((-r, r), repeat=dim):
        mask = 0
        for b, (e, _) in enumerate(box):
            if value((e, r), corner) == 0:
                mask |= 1 << (nreal + b)
        verts.append((tuple(corner), mask))

    for idx in range(nreal):
        hs = allhs[idx]
        vals = [value(hs, pt) for pt, _ in verts]
        if all(v >= 0 for v in vals):
            verts = [(pt, mask | (1 << idx) if vals[i] == 0 else mask)
                     for i, (pt, mask) in enumerate(verts)]
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        new_pts = {}
        for i in pos:
            pt_i, m_i = verts[i]
            for j in neg:
                pt_j, m_j = verts[j]
                common = m_i & m_j
                if bin(common).count("1") < dim - 1:
                    continue
                # combinatorial adjacency: nothing else dominates the pair
                dominated = False
                for k, (_, m_k) in enumerate(verts):
                    if k != i and k != j and (common & m_k) == common:
                        dominated = True
                        break
                if dominated:
                    continue
                lam = vals[i] / (vals[i] - vals[j])
                pt = tuple(a + lam * (b - a) for a, b in zip(pt_i, pt_j))
                if pt not in new_pts:
                    new_pts[pt] = true_tight(pt, idx + 1)
        verts = [(verts[i][0], verts[i][1]) for i in pos] + \
                [(verts[i][0], verts[i][1] | (1 << idx)) for i in zero] + \
                [(pt, m) for pt, m in sorted(new_pts.items())]

    final = []
    for pt, mask in verts:
        if any(abs(c) >= r for c in pt):
            raise Unbounded("half-spaces do not bound a polytope")
        real = frozenset(i for i in range(nreal) if mask & (1 << i))
        if len(real) < dim:
            raise Unbounded("vertex supported by box constraints only")
        final.append((pt, real))
    final.sort(key=lambda t: t[0])
    seen = {}
    for pt, real in final:
        seen[pt] = real
    pts = sorted(seen)
    return pts, [seen[p] for p in pts]
