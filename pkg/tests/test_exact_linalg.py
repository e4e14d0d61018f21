from itertools import product
from math import gcd
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diophbound.exact_linalg import (
    DimensionError,
    IntMatrix,
    determinant,
    hermite_normal_form,
    kernel_lattice_basis,
    maximal_minors,
    rank,
    smith_normal_form,
    solve_linear_integer,
    unimodular_inverse,
    xgcd,
)
from oracles import cofactor_det, in_integer_row_span, is_row_hnf, is_smith_form, rational_rank

M = IntMatrix.from_rows


@st.composite
def int_matrices(draw, max_rows=5, max_cols=6, bound=9, min_rows=0, min_cols=0):
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    entries = draw(st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c))
    return IntMatrix(r, c, tuple(entries))


@st.composite
def square_matrices(draw, max_n=5, bound=9):
    n = draw(st.integers(0, max_n))
    entries = draw(st.lists(st.integers(-bound, bound), min_size=n * n, max_size=n * n))
    return IntMatrix(n, n, tuple(entries))


class TestIntMatrix:
    def test_shape_validation(self):
        with pytest.raises(DimensionError):
            IntMatrix(2, 2, (1, 2, 3))
        with pytest.raises(DimensionError):
            M([[1, 2], [3]])

    def test_empty_matrix(self):
        e = IntMatrix.from_rows([], cols=3)
        assert e.shape == (0, 3)
        assert e.T.shape == (3, 0)
        assert e.T.dot([]) == (0, 0, 0)

    def test_matmul(self):
        a = M([[1, 2], [3, 4]])
        assert a @ IntMatrix.identity(2) == a
        assert a @ M([[0, 1], [1, 0]]) == M([[2, 1], [4, 3]])
        with pytest.raises(DimensionError):
            a @ M([[1, 2, 3]])

    def test_big_entries_survive(self):
        big = 10**40 + 7
        a = M([[big, 1], [0, 1]])
        assert determinant(a) == big
        assert (a @ a)[0, 0] == big * big


def test_xgcd():
    for a, b in product(range(-12, 13), repeat=2):
        g, x, y = xgcd(a, b)
        assert g >= 0 and x * a + y * b == g
        if a or b:
            assert a % g == 0 and b % g == 0


class TestDeterminant:
    def test_identity(self):
        assert determinant(IntMatrix.identity(3)) == 1

    def test_two_by_two(self):
        assert determinant(M([[1, 2], [3, 4]])) == -2

    def test_random_four_by_four_matches_cofactor(self):
        rng = Random(4)
        for _ in range(50):
            rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
            assert determinant(M(rows)) == cofactor_det(rows)

    def test_needs_pivoting(self):
        assert determinant(M([[0, 1], [1, 0]])) == -1
        assert determinant(M([[0, 0], [1, 2]])) == 0

    def test_non_square(self):
        with pytest.raises(DimensionError):
            determinant(M([[1, 2]]))

    @given(square_matrices())
    def test_agrees_with_cofactor_oracle(self, a):
        assert determinant(a) == cofactor_det(a.to_rows())


class TestRank:
    def test_examples(self):
        assert rank(IntMatrix.identity(2)) == 2
        assert rank(M([[1, 2], [2, 4]])) == 1
        assert rank(IntMatrix.zeros(0, 3)) == 0

    @given(int_matrices())
    def test_agrees_with_rational_elimination(self, a):
        assert rank(a) == rational_rank(a.to_rows())


class TestMaximalMinors:
    def test_one_by_one(self):
        assert maximal_minors(M([[1, 1, 2]]), 1) == [((0,), 1), ((1,), 1), ((2,), 2)]

    def test_identity(self):
        assert maximal_minors(IntMatrix.identity(2), 2) == [((0, 1), 1)]

    def test_two_by_three(self):
        rows = [[1, 2, 3], [0, 1, 1]]
        expected = [
            ((0, 1), cofactor_det([[1, 2], [0, 1]])),
            ((0, 2), cofactor_det([[1, 3], [0, 1]])),
            ((1, 2), cofactor_det([[2, 3], [1, 1]])),
        ]
        assert expected == [((0, 1), 1), ((0, 2), 1), ((1, 2), -1)]
        assert maximal_minors(M(rows), 2) == expected

    def test_row_selection(self):
        a = M([[1, 2, 3], [4, 5, 6]])
        assert maximal_minors(a, 1, rows=[1]) == [((0,), 4), ((1,), 5), ((2,), 6)]

    def test_out_of_range(self):
        with pytest.raises(DimensionError):
            maximal_minors(M([[1, 2]]), 2)
        with pytest.raises(DimensionError):
            maximal_minors(M([[1, 2], [3, 4]]), 1)

    @given(int_matrices(max_rows=3, max_cols=5, min_rows=1, min_cols=3), st.randoms(use_true_random=False))
    def test_row_permutation_only_flips_signs(self, a, rnd):
        if a.rows > a.cols:
            return
        perm = list(range(a.rows))
        rnd.shuffle(perm)
        permuted = a.submatrix(perm, range(a.cols))
        before = maximal_minors(a, a.rows)
        after = maximal_minors(permuted, a.rows)
        assert [c for c, _ in before] == [c for c, _ in after]
        ratios = {v // w for (_, v), (_, w) in zip(before, after) if w}
        assert ratios <= {1, -1} and len(ratios) <= 1
        assert sorted(abs(v) for _, v in before) == sorted(abs(v) for _, v in after)


class TestHermite:
    def test_identity(self):
        assert hermite_normal_form(IntMatrix.identity(3)) == (IntMatrix.identity(3), IntMatrix.identity(3))

    def test_permutation(self):
        h, u = hermite_normal_form(M([[0, 1], [1, 0]]))
        assert h == IntMatrix.identity(2)
        assert u == M([[0, 1], [1, 0]])

    def test_gcd_pivot(self):
        a = M([[4], [6]])
        h, u = hermite_normal_form(a)
        assert h == M([[2], [0]])
        assert abs(determinant(u)) == 1
        assert u @ a == h

    def test_reduces_above_pivot(self):
        h, _ = hermite_normal_form(M([[1, 5], [0, 3]]))
        assert h == M([[1, 2], [0, 3]])

    @settings(max_examples=200)
    @given(int_matrices())
    def test_invariants(self, a):
        h, u = hermite_normal_form(a)
        assert u.shape == (a.rows, a.rows)
        assert abs(determinant(u)) == 1
        assert u @ a == h
        assert is_row_hnf(h)


class TestSmith:
    def test_identity(self):
        assert smith_normal_form(IntMatrix.identity(3)).s == IntMatrix.identity(3)

    def test_coprime_diagonal(self):
        a = M([[2, 0], [0, 3]])
        u, s, v = smith_normal_form(a)
        assert s == M([[1, 0], [0, 6]])
        assert u @ a @ v == s
        assert abs(determinant(u)) == abs(determinant(v)) == 1

    def test_row_vector(self):
        assert smith_normal_form(M([[2, 4]])).s == M([[2, 0]])

    def test_known_invariant_factors(self):
        a = M([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]])
        assert [smith_normal_form(a).s[i, i] for i in range(4)] == [1, 10, 30, 0]

    @settings(max_examples=200)
    @given(int_matrices())
    def test_invariants(self, a):
        u, s, v = smith_normal_form(a)
        assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
        assert u @ a @ v == s
        assert is_smith_form(s)


def test_unimodular_inverse():
    v = M([[2, 1], [1, 1]])
    assert unimodular_inverse(v) @ v == IntMatrix.identity(2)
    with pytest.raises(ValueError):
        unimodular_inverse(M([[2, 0], [0, 1]]))


class TestKernelBasis:
    def test_examples(self):
        assert kernel_lattice_basis(M([[1, 1]])).to_rows() in ([[1, -1]], [[-1, 1]])
        assert kernel_lattice_basis(M([[1, 2]])).to_rows() in ([[2, -1]], [[-2, 1]])
        assert kernel_lattice_basis(IntMatrix.identity(2)).shape == (0, 2)

    def test_non_primitive_row(self):
        # kernel of 2x + 4y = 0 is generated by (2, -1), not (4, -2)
        assert kernel_lattice_basis(M([[2, 4]])).to_rows() in ([[2, -1]], [[-2, 1]])

    @settings(max_examples=100)
    @given(int_matrices(max_rows=2, max_cols=4, bound=3, min_cols=1))
    def test_sound_and_complete(self, a):
        h = kernel_lattice_basis(a)
        assert h.shape == (a.cols - rank(a), a.cols)
        for i in range(h.rows):
            assert a.dot(h.row(i)) == (0,) * a.rows
        for z in product(range(-3, 4), repeat=a.cols):
            if not any(a.dot(z)):
                assert in_integer_row_span(h, z), z


class TestSolveLinearInteger:
    def test_parity_obstruction(self):
        assert solve_linear_integer(M([[2]]), [1]) is None

    def test_identity(self):
        assert solve_linear_integer(IntMatrix.identity(2), [3, 1]) == (3, 1)

    def test_substitution(self):
        x = solve_linear_integer(M([[1, 1]]), [2])
        assert x[0] + x[1] == 2

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            solve_linear_integer(M([[1, 1]]), [1, 2])

    def test_inconsistent_rational_system(self):
        assert solve_linear_integer(M([[1, 1], [1, 1]]), [1, 2]) is None

    @given(int_matrices(max_rows=3, max_cols=4, bound=5, min_rows=1, min_cols=1),
           st.lists(st.integers(-4, 4), min_size=4, max_size=4))
    def test_solvable_by_construction(self, a, w):
        b = a.dot(w[:a.cols])
        x = solve_linear_integer(a, b)
        assert x is not None and a.dot(x) == b

    @given(st.integers(1, 6), st.integers(1, 6), st.integers(-20, 20))
    def test_single_equation_matches_gcd(self, p, q, r):
        x = solve_linear_integer(M([[p, q]]), [r])
        assert (x is not None) == (r % gcd(p, q) == 0)
