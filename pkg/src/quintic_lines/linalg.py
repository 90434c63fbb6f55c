"""Exact integer and rational linear algebra.

Everything in this package that decides anything (rank, rigidity, landing
tests) runs on Python ints and ``fractions.Fraction``; no floats appear on
any decision path.  Matrices are plain list-of-lists / tuple-of-tuples with
explicit shapes; the helpers below validate shape but never resize.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence


class ShapeError(ValueError):
    """Matrix rows of unequal length, or dimension mismatch."""


def _check_rect(rows: Sequence[Sequence], what: str = "matrix"):
    if len(rows) == 0:
        raise ShapeError(f"{what} needs at least one row")
    ncols = len(rows[0])
    for r in rows:
        if len(r) != ncols:
            raise ShapeError(f"{what} rows have unequal lengths")
    return len(rows), ncols


def copy_int_matrix(m: Sequence[Sequence[int]]) -> list[list[int]]:
    _check_rect(m, "integer matrix")
    return [[int(x) for x in row] for row in m]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k = _check_rect(a)
    k2, m = _check_rect(b)
    if k != k2:
        raise ShapeError("inner dimensions differ")
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def mat_vec(a, v):
    n, k = _check_rect(a)
    if len(v) != k:
        raise ShapeError("matrix/vector dimension mismatch")
    return [sum(a[i][t] * v[t] for t in range(k)) for i in range(n)]


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix, fraction-free (Bareiss)."""
    n, c = _check_rect(m)
    if n != c:
        raise ShapeError("determinant needs a square matrix")
    a = copy_int_matrix(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(m: Sequence[Sequence[int]]):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns ``(diag, left, right)`` with ``left @ m @ right`` diagonal,
    ``diag[k] >= 0``, ``diag[k] | diag[k+1]``, and ``|det left| = |det right|
    = 1``.  Pivoting is by minimal absolute value with (row, col) tie-break,
    so the factors are deterministic.
    """
    nrows, ncols = _check_rect(m, "integer matrix")
    a = copy_int_matrix(m)
    left = identity(nrows)
    right = identity(ncols)

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        left[i] = [x - q * y for x, y in zip(left[i], left[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in a:
            r[i] -= q * r[j]
        for r in right:
            r[i] -= q * r[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in right:
            r[i], r[j] = r[j], r[i]

    t = 0
    limit = min(nrows, ncols)
    while t < limit:
        # locate the deterministic pivot: smallest |value| > 0, then position
        pivot = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best = v
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column and row t
            dirty = True
            while dirty:
                dirty = False
                for i in range(t + 1, nrows):
                    if a[i][t]:
                        q = a[i][t] // a[t][t]
                        row_op(i, t, q)
                        if a[i][t]:  # remainder became the smaller pivot
                            swap_rows(t, i)
                            dirty = True
                for j in range(t + 1, ncols):
                    if a[t][j]:
                        q = a[t][j] // a[t][t]
                        col_op(j, t, q)
                        if a[t][j]:
                            swap_cols(t, j)
                            dirty = True
            # pivot must divide every entry of the remaining block, else the
            # divisibility chain d_t | d_{t+1} would fail later
            offender = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(t, offender, -1)  # fold the offending row in and repeat
        t += 1

    for k in range(limit):
        if a[k][k] < 0:
            for r in a:
                r[k] = -r[k]
            for r in right:
                r[k] = -r[k]
    diag = [a[k][k] for k in range(limit)]
    return diag, left, right


def invariant_factors(m) -> list[int]:
    diag, _, _ = smith_normal_form(m)
    return [d for d in diag if d != 0]


def cokernel_torsion(m):
    """Order of the torsion of ``coker(m)``, or ``None`` for positive rank.

    ``m`` maps column vectors; the cokernel is ``Z^rows / im(m)``.  When the
    cokernel has a free part (rank of m below its row count) the function
    returns ``None`` — callers use that as the non-rigidity marker.
    """
    nrows, _ = _check_rect(m)
    diag, _, _ = smith_normal_form(m)
    nonzero = [d for d in diag if d != 0]
    if len(nonzero) < nrows:
        return None
    order = 1
    for d in nonzero:
        order *= d
    return order


# ---------------------------------------------------------------------------
# Rational solving
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveResult:
    """Exact classification of the solution set of ``a @ x = b``.

    kind is one of "unique", "none", "family".  ``point`` is a particular
    solution (unique or family); ``kernel`` is a basis of the homogeneous
    solution space for the family case.
    """
    kind: str
    point: tuple | None = None
    kernel: tuple = ()


def solve_rational(a, b) -> SolveResult:
    nrows, ncols = _check_rect(a)
    if len(b) != nrows:
        raise ShapeError("rhs length differs from row count")
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])]
           for i, row in enumerate(a)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if aug[i][ncols] != 0:
            return SolveResult("none")
    point = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        point[c] = aug[i][ncols]
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return SolveResult("unique", tuple(point))
    kernel = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -aug[i][fc]
        kernel.append(tuple(v))
    return SolveResult("family", tuple(point), tuple(kernel))


def rank_rational(a) -> int:
    nrows, ncols = _check_rect(a)
    rows = [[Fraction(x) for x in row] for row in a]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == nrows:
            break
    return r


# ---------------------------------------------------------------------------
# Lattice utilities: Hermite form, saturation, primitive completions
# ---------------------------------------------------------------------------

def hnf_rows(m):
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u @ m = h``, ``u`` unimodular, ``h`` in row
    echelon form with positive pivots, entries above a pivot reduced into
    ``[0, pivot)``, and zero rows last.
    """
    nrows, ncols = _check_rect(m)
    a = copy_int_matrix(m)
    u = identity(nrows)
    r = 0
    for c in range(ncols):
        # gcd-reduce column c below row r
        while True:
            nz = [i for i in range(r, nrows) if a[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(a[i][c]), i))
            if i0 != r:
                a[r], a[i0] = a[i0], a[r]
                u[r], u[i0] = u[i0], u[r]
            done = True
            for i in range(r + 1, nrows):
                if a[i][c] != 0:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if a[i][c] != 0:
                        done = False
            if done:
                break
        if r < nrows and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
            r += 1
            if r == nrows:
                break
    return a, u


def saturate(vectors):
    """Basis of the saturation of the span of integer vectors.

    The result generates ``{x : k x in span for some k >= 1}``; rows are the
    canonical Hermite basis, so equal lattices give equal bases.
    """
    vecs = [list(v) for v in vectors]
    if not vecs:
        return []
    n = len(vecs[0])
    _check_rect(vecs, "vector list")
    diag, left, right = smith_normal_form(vecs)
    rank = sum(1 for d in diag if d != 0)
    # rows of right^{-1} spanning the rational row space; since `right` is
    # unimodular the first `rank` rows of right^{-1} form a basis of the
    # saturated lattice.
    rinv = _unimodular_inverse(right)
    basis = [rinv[i] for i in range(rank)]
    h, _ = hnf_rows(basis) if basis else ([], None)
    return [tuple(row) for row in h[:rank]]


def _unimodular_inverse(u):
    n, c = _check_rect(u)
    if n != c:
        raise ShapeError("inverse needs a square matrix")
    d = det_int(u)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    # adjugate via cofactors; n is small throughout this package
    inv = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [[u[a][b] for b in range(n) if b != i]
                     for a in range(n) if a != j]
            cof = det_int(minor) if minor else 1
            row.append(((-1) ** (i + j)) * cof * d)
        inv.append(row)
    return inv


def lattice_index(vectors) -> int:
    """Index of the span of the vectors inside its saturation.

    1 means the vectors already span a saturated sublattice.
    """
    diag, _, _ = smith_normal_form([list(v) for v in vectors])
    nonzero = [d for d in diag if d != 0]
    idx = 1
    for d in nonzero:
        idx *= d
    return idx


def primitive_completion(v):
    """Unimodular matrix ``u`` with ``u @ v = (1, 0, ..., 0)``.

    Requires ``v`` primitive (gcd of entries 1).  Rows ``1..n-1`` of ``u``
    then present the quotient by ``Z v`` in a canonical basis.
    """
    v = [int(x) for x in v]
    n = len(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g != 1:
        raise ValueError("vector is not primitive")
    col = [[x] for x in v]
    h, u = hnf_rows(col)
    if h[0][0] != 1:
        raise AssertionError("hnf of a primitive column must be e1")
    return u


def is_primitive(v) -> bool:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1
