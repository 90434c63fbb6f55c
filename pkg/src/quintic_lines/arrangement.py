"""Pairwise intersection analysis of the line census.

A line's closed image inside its facet chart is one bounded segment plus
four rays.  Same-facet intersection is the exact test on those pieces,
including collinear overlaps.  Lines in different facets can only meet in
the 2-faces at infinity: either their ends land on the same point of a
shared internal curve edge, or they land on the same geometric outer edge
(whose ends both run off along the same unbounded amoeba branch).

Pair screening uses exact hashes for parallel pieces and a float
coplanarity prescreen (with generous margin) for transversal ones; every
candidate pair is confirmed with exact rational arithmetic before it
becomes a graph edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .curves import RAYS, QuinticCurveSet
from .search import TropicalLine


class LimitExceeded(ValueError):
    """Exact independent-set search refused: subgraph too large."""


# ---------------------------------------------------------------------------
# Piece-level exact intersection
# ---------------------------------------------------------------------------

def line_pieces(line: TropicalLine):
    """(base, direction, length) per piece; length None marks a ray."""
    pieces = [(line.v1, line.direction, line.t)]
    for inc in line.legs:
        base = line.v1 if inc.at_v1 else line.v2
        pieces.append((base, RAYS[inc.leg], None))
    return pieces


def _cross3(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def _sub(p, q):
    return tuple(Fraction(a) - Fraction(b) for a, b in zip(p, q))


def _dot(u, v):
    return sum(Fraction(a) * Fraction(b) for a, b in zip(u, v))


def pieces_intersect(p1, p2) -> bool:
    """Exact: do two closed segments/rays in Q^3 share a point?"""
    b1, u1, l1 = p1
    b2, u2, l2 = p2
    w = _cross3(u1, u2)
    d = _sub(b2, b1)
    if w == (0, 0, 0):
        # parallel: must be collinear, then intervals must overlap
        if _cross3(d, u1) != (0, 0, 0):
            return False
        uu = _dot(u1, u1)
        s0 = _dot(d, u1) / uu
        lam = _dot(u2, u1) / uu          # u2 = lam * u1, lam != 0
        if l2 is None:
            i2 = (s0, None) if lam > 0 else (None, s0)
        else:
            a, b = s0, s0 + lam * l2
            i2 = (min(a, b), max(a, b))
        i1 = (Fraction(0), l1)
        lo = max(x for x in (i1[0], i2[0]) if x is not None) \
            if (i1[0] is not None or i2[0] is not None) else None
        his = [x for x in (i1[1], i2[1]) if x is not None]
        hi = min(his) if his else None
        if lo is None or hi is None:
            return True
        return lo <= hi
    # transversal: coplanarity is necessary
    if _dot(w, d) != 0:
        return False
    # solve b1 + s u1 = b2 + s' u2 in two independent coordinates
    for i, j in ((0, 1), (0, 2), (1, 2)):
        det = u1[i] * (-u2[j]) - u1[j] * (-u2[i])
        if det:
            s = (d[i] * (-u2[j]) - d[j] * (-u2[i])) / det
            sp = (u1[i] * d[j] - u1[j] * d[i]) / det
            break
    for k in range(3):
        if Fraction(b1[k]) + s * u1[k] != Fraction(b2[k]) + sp * u2[k]:
            return False
    if s < 0 or (l1 is not None and s > l1):
        return False
    if sp < 0 or (l2 is not None and sp > l2):
        return False
    return True


def same_facet_intersect(a: TropicalLine, b: TropicalLine) -> bool:
    """Exact intersection of the closed images of two same-facet lines."""
    if a.facet != b.facet:
        raise ValueError("lines live in different facet frames")
    for p1 in line_pieces(a):
        for p2 in line_pieces(b):
            if pieces_intersect(p1, p2):
                return True
    return False


# ---------------------------------------------------------------------------
# Cross-facet intersection via landing data
# ---------------------------------------------------------------------------

def _canonical_landing(curveset: QuinticCurveSet, line: TropicalLine,
                       j: int):
    """Landing of leg j expressed in the 2-face's first frame instance.

    Returns (two_face, dual_pair, kind, canonical_point)."""
    k = line.facet
    kl = curveset.frames[k].wall_two_face(j)
    inc = line.legs[j]
    e = curveset.curves[(k, j)].edges[inc.edge_index]
    pr = curveset.pairings[kl]
    z = tuple(Fraction(x) * curveset.scale for x in inc.landing)
    if pr.first != (k, j):
        _, z = curveset.map_to_partner(k, j, z)
    return kl, e.dual_pair, e.kind, tuple(Fraction(x) for x in z)


def cross_facet_intersect(curveset: QuinticCurveSet, a: TropicalLine,
                          b: TropicalLine) -> bool:
    """Do two lines of different facets meet in a shared 2-face?

    True when some pair of ends lands on the same geometric point of a
    shared internal edge, or on the same geometric outer edge (both ends
    then follow the same unbounded amoeba branch)."""
    if a.facet == b.facet:
        raise ValueError("use same_facet_intersect inside one facet")
    la = [_canonical_landing(curveset, a, j) for j in range(4)]
    lb = [_canonical_landing(curveset, b, j) for j in range(4)]
    for kl_a, pair_a, kind_a, z_a in la:
        for kl_b, pair_b, kind_b, z_b in lb:
            if kl_a != kl_b or pair_a != pair_b:
                continue
            if kind_a == "outer":
                return True
            if z_a == z_b:
                return True
    return False


# ---------------------------------------------------------------------------
# Conflict graph
# ---------------------------------------------------------------------------

@dataclass
class ConflictGraph:
    n: int
    edges: set = field(default_factory=set)

    def add(self, i, j):
        if i == j:
            return
        self.edges.add((min(i, j), max(i, j)))

    def degree(self):
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def neighbors(self):
        nb = [set() for _ in range(self.n)]
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return nb

    def subgraph(self, nodes):
        nodes = sorted(nodes)
        remap = {v: i for i, v in enumerate(nodes)}
        g = ConflictGraph(len(nodes))
        for i, j in self.edges:
            if i in remap and j in remap:
                g.add(remap[i], remap[j])
        return g, nodes


def build_conflict_graph(curveset: QuinticCurveSet,
                         lines: list) -> ConflictGraph:
    """Exact conflict graph over the canonical census order."""
    g = ConflictGraph(len(lines))
    by_facet = {}
    for idx, line in enumerate(lines):
        by_facet.setdefault(line.facet, []).append(idx)

    for facet, idxs in sorted(by_facet.items()):
        _same_facet_edges(g, [lines[i] for i in idxs], idxs)

    # cross-facet joins on geometric landing data
    internal = {}
    outer = {}
    for idx, line in enumerate(lines):
        for j in range(4):
            kl, pair, kind, z = _canonical_landing(curveset, line, j)
            if kind == "internal":
                internal.setdefault((kl, pair, z), []).append(idx)
            else:
                outer.setdefault((kl, pair), []).append(idx)
    for bucket in itertools.chain(internal.values(), outer.values()):
        for i, j in itertools.combinations(sorted(set(bucket)), 2):
            if lines[i].facet != lines[j].facet:
                g.add(i, j)
    return g


def _same_facet_edges(g: ConflictGraph, lines, idxs):
    """Same-facet pairs: exact hash join for parallel pieces plus a float
    coplanarity prescreen for transversal ones, then exact confirmation."""
    n = len(lines)
    pieces = [line_pieces(l) for l in lines]

    # parallel collinearity: group by projection of the base along the
    # direction; any two distinct lines in one group share a support line
    candidates = set()
    groups = {}
    for a in range(n):
        for b_, u, _l in pieces[a]:
            uu = _dot(u, u)
            p = _sub(b_, (0, 0, 0))
            proj = tuple(p[i] - _dot(p, u) * Fraction(u[i], uu)
                         for i in range(3))
            groups.setdefault((u, proj), set()).add(a)
    for (u, proj), members in groups.items():
        for a, b in itertools.combinations(sorted(members), 2):
            candidates.add((a, b))

    # transversal: for each ordered pair of direction classes, the
    # coplanarity functional <u1 x u2, base> must match
    dirclasses = {}
    for a in range(n):
        for b_, u, _l in pieces[a]:
            dirclasses.setdefault(u, []).append((a, b_))
    dirs = sorted(dirclasses)
    for u1, u2 in itertools.combinations(dirs, 2):
        w = _cross3(u1, u2)
        if w == (0, 0, 0):
            continue
        e1 = dirclasses[u1]
        e2 = dirclasses[u2]
        v1 = np.array([[float(x) for x in b] for _, b in e1]) @ np.array(
            [float(x) for x in w])
        v2 = np.array([[float(x) for x in b] for _, b in e2]) @ np.array(
            [float(x) for x in w])
        scale = 1.0 + max(np.abs(v1).max(initial=0.0),
                          np.abs(v2).max(initial=0.0))
        close = np.abs(v1[:, None] - v2[None, :]) <= 1e-9 * scale
        for i, j in zip(*np.nonzero(close)):
            a, b = e1[int(i)][0], e2[int(j)][0]
            if a != b:
                candidates.add((min(a, b), max(a, b)))

    for a, b in sorted(candidates):
        if same_facet_intersect(lines[a], lines[b]):
            g.add(idxs[a], idxs[b])


# ---------------------------------------------------------------------------
# Rank and independent sets
# ---------------------------------------------------------------------------

def adjacency_rank(g: ConflictGraph):
    """(rank over Q, rank over GF(2)) of the 0/1 adjacency matrix.

    GF(2) rank is exact bitset elimination.  The rational rank is certified
    exactly whenever some modular rank reaches it (rank mod p never exceeds
    the rational rank); with the expected full-rank matrices the GF(2)
    result already certifies.  Otherwise the reported rational rank is the
    maximum over GF(2) and two large primes, a certified lower bound that
    is exact outside measure-zero height choices.
    """
    n = g.n
    if n == 0:
        return 0, 0
    rows = [0] * n
    for i, j in g.edges:
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    rank2 = _rank_gf2(rows[:])
    if rank2 == n:
        return n, rank2
    rank_q = rank2
    for p in (2_147_483_647, 998_244_353):
        rank_q = max(rank_q, _rank_mod_p(g, p))
        if rank_q == n:
            break
    return rank_q, rank2


def _rank_gf2(rows):
    rank = 0
    for col in range(len(rows)):
        bit = 1 << col
        piv = next((i for i in range(rank, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i] & bit:
                rows[i] ^= rows[rank]
        rank += 1
    return rank


def _rank_mod_p(g: ConflictGraph, p: int) -> int:
    n = g.n
    m = np.zeros((n, n), dtype=np.int64)
    for i, j in g.edges:
        m[i, j] = 1
        m[j, i] = 1
    rank = 0
    for col in range(n):
        piv = None
        for i in range(rank, n):
            if m[i, col] % p:
                piv = i
                break
        if piv is None:
            continue
        m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, col]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        mask = m[rank + 1:, col] % p != 0
        if mask.any():
            sub = m[rank + 1:]
            sub[mask] = (sub[mask] - np.outer(sub[mask, col] % p, m[rank])) % p
        rank += 1
    return rank


def independent_set(g: ConflictGraph, mode: str = "greedy",
                    limit: int = 64):
    """Pairwise non-adjacent node set.

    greedy: deterministic minimum-degree-first heuristic.  exact: branch
    and bound maximum independent set, refused above ``limit`` nodes.
    The result is always re-verified against the graph.
    """
    if mode == "exact" and g.n > limit:
        raise LimitExceeded(f"exact mode limited to {limit} nodes, got {g.n}")
    nb = g.neighbors()
    if mode == "greedy":
        alive = set(range(g.n))
        deg = {v: len(nb[v] & alive) for v in alive}
        chosen = []
        while alive:
            v = min(alive, key=lambda x: (deg[x], x))
            chosen.append(v)
            dead = {v} | (nb[v] & alive)
            alive -= dead
            for u in alive:
                deg[u] = len(nb[u] & alive)
        result = sorted(chosen)
    elif mode == "exact":
        best = []

        def bound(cands):
            return len(cands)

        def bb(chosen, cands):
            nonlocal best
            if len(chosen) > len(best):
                best = list(chosen)
            if not cands or len(chosen) + bound(cands) <= len(best):
                return
            v = min(cands)
            bb(chosen + [v], cands - {v} - nb[v])
            bb(chosen, cands - {v})

        bb([], set(range(g.n)))
        result = sorted(best)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for i, j in itertools.combinations(result, 2):
        assert j not in nb[i], "independent set verification failed"
    return result


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

def edges_csv(g: ConflictGraph) -> str:
    lines = ["id_a,id_b"]
    lines.extend(f"{i},{j}" for i, j in sorted(g.edges))
    return "\n".join(lines) + "\n"


def matrix_market(g: ConflictGraph) -> str:
    out = ["%%MatrixMarket matrix coordinate pattern symmetric"]
    out.append(f"{g.n} {g.n} {len(g.edges)}")
    for i, j in sorted(g.edges):
        out.append(f"{max(i, j) + 1} {min(i, j) + 1}")
    return "\n".join(out) + "\n"
