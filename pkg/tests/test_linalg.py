"""Exact linear algebra: Smith form, cokernels, solving, saturation."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quintic_lines import linalg as la


def cofactor_det(m):
    """Independent determinant oracle by first-row expansion."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def gcd_all(m):
    import math
    g = 0
    for row in m:
        for x in row:
            g = math.gcd(g, abs(x))
    return g


class TestSmithNormalForm:
    def test_identity(self):
        diag, left, right = la.smith_normal_form(la.identity(3))
        assert diag == [1, 1, 1]

    def test_upper_triangular_2x2(self):
        # 2x2 oracle: d1 = gcd of entries, d1*d2 = |det|
        m = [[2, 1], [0, 2]]
        assert gcd_all(m) == 1 and abs(cofactor_det(m)) == 4
        assert la.smith_normal_form(m)[0] == [1, 4]

    def test_diagonal_2x3_gcd(self):
        m = [[2, 0], [0, 3]]
        assert gcd_all(m) == 1 and abs(cofactor_det(m)) == 6
        assert la.smith_normal_form(m)[0] == [1, 6]

    def test_factorization_and_chain_random(self):
        rng = random.Random(20240)
        for _ in range(300):
            nr = rng.randint(1, 4)
            nc = rng.randint(1, 4)
            m = [[rng.randint(-9, 9) for _ in range(nc)] for _ in range(nr)]
            diag, left, right = la.smith_normal_form(m)
            assert abs(la.det_int(left)) == 1
            assert abs(la.det_int(right)) == 1
            prod = la.mat_mul(la.mat_mul(left, m), right)
            for i in range(nr):
                for j in range(nc):
                    want = diag[i] if i == j and i < len(diag) else 0
                    assert prod[i][j] == want
            nonzero = [d for d in diag if d]
            assert all(d > 0 for d in diag if d)
            for a, b in zip(nonzero, nonzero[1:]):
                assert b % a == 0

    @settings(max_examples=120, deadline=None)
    @given(st.lists(st.lists(st.integers(-20, 20), min_size=3, max_size=3),
                    min_size=3, max_size=3))
    def test_snf_matches_cofactor_det(self, m):
        d = cofactor_det(m)
        tor = la.cokernel_torsion(m)
        if d != 0:
            assert tor == abs(d)
        else:
            assert tor is None


class TestCokernelTorsion:
    def test_identity(self):
        assert la.cokernel_torsion(la.identity(4)) == 1

    def test_det_case(self):
        assert la.cokernel_torsion([[2, 1], [0, 2]]) == 4

    def test_zero_matrix_has_free_part(self):
        assert la.cokernel_torsion([[0, 0, 0], [0, 0, 0]]) is None

    def test_wide_full_rank(self):
        # Z^3 -> Z^2 surjective-after-saturation: torsion only
        assert la.cokernel_torsion([[1, 0, 0], [0, 2, 0]]) == 2


class TestSolveRational:
    def test_identity(self):
        res = la.solve_rational(la.identity(2), [3, 5])
        assert res.kind == "unique" and res.point == (3, 5)

    def test_one_equation_family(self):
        res = la.solve_rational([[1, 1]], [0])
        assert res.kind == "family"
        assert len(res.kernel) == 1
        k = res.kernel[0]
        assert k[0] + k[1] == 0 and k != (0, 0)

    def test_inconsistent(self):
        assert la.solve_rational([[1, 0], [1, 0]], [1, 2]).kind == "none"

    def test_classification_matches_rank(self):
        rng = random.Random(7)
        for _ in range(200):
            nr = rng.randint(1, 4)
            nc = rng.randint(1, 4)
            a = [[rng.randint(-4, 4) for _ in range(nc)] for _ in range(nr)]
            b = [rng.randint(-4, 4) for _ in range(nr)]
            res = la.solve_rational(a, b)
            r = la.rank_rational(a)
            aug = la.rank_rational([row + [bi] for row, bi in zip(a, b)])
            if aug > r:
                assert res.kind == "none"
            elif r == nc:
                assert res.kind == "unique"
            else:
                assert res.kind == "family"
                assert len(res.kernel) == nc - r
            if res.kind != "none":
                pt = res.point
                for row, bi in zip(a, b):
                    assert sum(Fraction(x) * p for x, p in zip(row, pt)) == bi


class TestSaturation:
    def test_double_vector(self):
        assert la.saturate([(2, 0, 0)]) == [(1, 0, 0)]

    def test_index_two_span(self):
        assert la.saturate([(1, 1, 0), (1, -1, 0)]) == [(1, 0, 0), (0, 1, 0)]

    def test_already_saturated(self):
        assert la.saturate([(1, 0, 0), (0, 1, 0)]) == [(1, 0, 0), (0, 1, 0)]

    def test_lattice_index(self):
        assert la.lattice_index([(1, 0, 0), (0, 2, 0)]) == 2
        assert la.lattice_index([(1, 0, 0), (0, 1, 0)]) == 1

    def test_saturation_is_saturated(self):
        rng = random.Random(11)
        for _ in range(100):
            vecs = [tuple(rng.randint(-5, 5) for _ in range(4))
                    for _ in range(rng.randint(1, 3))]
            if all(v == (0,) * 4 for v in vecs):
                continue
            basis = la.saturate(vecs)
            if basis:
                assert la.lattice_index(basis) == 1
                # original vectors lie in the rational span of the basis
                for v in vecs:
                    res = la.solve_rational(
                        [[b[i] for b in basis] for i in range(4)], list(v))
                    assert res.kind != "none"


class TestPrimitiveCompletion:
    def test_examples(self):
        for v in ((1, 0, 0), (2, 3, 5), (0, -1, 0), (3, 7, 1)):
            u = la.primitive_completion(v)
            assert abs(la.det_int(u)) == 1
            assert la.mat_vec(u, list(v)) == [1, 0, 0]

    def test_rejects_imprimitive(self):
        with pytest.raises(ValueError):
            la.primitive_completion((2, 4, 6))


def test_hnf_canonical():
    h1, u1 = la.hnf_rows([[1, 1, 0], [1, -1, 0]])
    h2, u2 = la.hnf_rows([[1, 1, 0], [2, 0, 0]])
    # same lattice (x + y even in the plane) -> same Hermite form
    assert h1 == h2
    assert abs(la.det_int(u1)) == 1
