"""Tests for the GF(2), integer and GF(2)[q] kernels."""

from fractions import Fraction

import pytest

from branchfloer.algebra import (
    POLY_ONE,
    POLY_ZERO,
    F2Matrix,
    PolyMatrix,
    ZMatrix,
    as_grading,
    f2_homology_ranks,
    f2_rank,
    f2_solve,
    fq_matrix_rank,
    fq_matrix_rank_by_evaluation,
    integer_snf,
    poly,
    smith_decomposition,
)
from branchfloer.errors import ComplexShapeError, NotAComplexError


class TestF2Matrix:
    def test_entries_outside_shape(self):
        with pytest.raises(ComplexShapeError, match="outside 2x2"):
            F2Matrix(2, 2, frozenset({(2, 0)}))

    def test_from_pairs_cancels_repeats(self):
        m = F2Matrix.from_pairs(2, 2, [(0, 0), (1, 1), (0, 0)])
        assert m.entries == frozenset({(1, 1)})

    def test_from_dense_reduces_mod_two(self):
        m = F2Matrix.from_dense([[2, 1], [3, 0]])
        assert m.entries == frozenset({(0, 1), (1, 0)})

    def test_rank(self):
        assert F2Matrix.identity(3).rank() == 3
        assert f2_rank(F2Matrix.from_dense([[1, 1], [1, 1]])) == 1
        assert F2Matrix.zeros(4, 0).rank() == 0

    def test_rank_wide_matrix(self):
        # more than one packed word per row
        m = F2Matrix.from_pairs(3, 130, [(0, 0), (1, 129), (2, 0), (2, 129)])
        assert m.rank() == 2

    def test_add_and_matmul(self):
        a = F2Matrix.from_dense([[1, 1], [0, 1]])
        assert (a + a).is_zero()
        assert a @ a == F2Matrix.identity(2)

    def test_matmul_shape_mismatch(self):
        with pytest.raises(ComplexShapeError, match="cannot compose"):
            F2Matrix.zeros(2, 3) @ F2Matrix.zeros(2, 3)

    def test_transpose_and_submatrix(self):
        m = F2Matrix.from_dense([[0, 1, 0], [0, 0, 1]])
        assert m.transpose().shape == (3, 2)
        assert m.submatrix([1], [2, 1]).entries == frozenset({(0, 0)})


class TestF2Solve:
    def test_unique_solution(self):
        m = F2Matrix.from_dense([[1, 1], [0, 1]])
        assert f2_solve(m, [1, 1]) == [0, 1]

    def test_free_variables_are_zero(self):
        m = F2Matrix.from_dense([[1, 1]])
        assert f2_solve(m, [1]) == [1, 0]

    def test_inconsistent(self):
        m = F2Matrix.from_dense([[1], [1]])
        assert f2_solve(m, [1, 0]) is None

    def test_rhs_length(self):
        with pytest.raises(ComplexShapeError):
            f2_solve(F2Matrix.identity(2), [1])


class TestHomologyRanks:
    def test_circle_one_cell(self):
        assert f2_homology_ranks([F2Matrix.zeros(1, 1)]) == [1, 1]

    def test_circle_two_cells(self):
        d1 = F2Matrix.from_dense([[1, 1], [1, 1]])
        assert f2_homology_ranks([d1]) == [1, 1]

    def test_acyclic(self):
        assert f2_homology_ranks([F2Matrix.identity(3)]) == [0, 0]

    def test_not_a_complex(self):
        one = F2Matrix.identity(1)
        with pytest.raises(NotAComplexError) as exc:
            f2_homology_ranks([one, one])
        assert exc.value.pair == (1, 2)

    def test_shape_mismatch(self):
        with pytest.raises(ComplexShapeError):
            f2_homology_ranks([F2Matrix.zeros(1, 2), F2Matrix.zeros(3, 1)])

    def test_empty(self):
        with pytest.raises(ComplexShapeError):
            f2_homology_ranks([])


class TestSmithNormalForm:
    @pytest.mark.parametrize(
        "rows,expected",
        [
            ([[2, 4], [6, 8]], (2, 4)),
            ([[1, 2], [3, 4]], (1, 2)),
            ([[0, 0], [0, 0]], (0, 0)),
            ([[3]], (3,)),
            ([[2, 0, 0], [0, 3, 0]], (1, 6)),
        ],
    )
    def test_invariant_factors(self, rows, expected):
        assert integer_snf(ZMatrix.from_rows(rows)) == expected

    def test_unimodular_invariance(self):
        m = ZMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        u = ZMatrix.from_rows([[1, 2, 0], [0, 1, 0], [3, 0, 1]])
        v = ZMatrix.from_rows([[1, 0, 0], [-1, 1, 0], [2, 5, 1]])
        assert integer_snf(u @ m @ v) == integer_snf(m)

    def test_transforms_diagonalize(self):
        m = ZMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        s = smith_decomposition(m)
        product = s.left @ m @ s.right
        for i in range(3):
            for j in range(3):
                expected = s.invariant_factors[i] if i == j else 0
                assert product.entries[i][j] == expected

    def test_divisibility_chain(self):
        factors = integer_snf(ZMatrix.from_rows([[4, 0, 0], [0, 6, 0], [0, 0, 10]]))
        assert factors == (2, 2, 60)
        assert all(b % a == 0 for a, b in zip(factors, factors[1:]))

    def test_empty_matrix(self):
        s = smith_decomposition(ZMatrix.from_rows([], 3))
        assert s.invariant_factors == ()
        assert s.rank == 0


class TestPolyMatrix:
    def test_poly_from_ascending(self):
        assert poly([1, 0, 1]) == poly([1]) + poly([0, 0, 1])
        assert poly([]) == POLY_ZERO
        assert poly([3]) == POLY_ONE

    def test_matmul(self):
        m = PolyMatrix.from_rows([[[0, 1], [1]], [[1], [0, 1]]])
        squared = m @ m
        assert squared.entries[0][0] == poly([1, 0, 1])
        assert squared.entries[0][1] == POLY_ZERO

    def test_from_coefficients(self):
        m = PolyMatrix.from_coefficients([F2Matrix.identity(2), F2Matrix.from_dense([[0, 1], [1, 0]])])
        assert m.entries[0][0] == POLY_ONE
        assert m.entries[0][1] == poly([0, 1])

    def test_from_coefficients_shape(self):
        with pytest.raises(ComplexShapeError):
            PolyMatrix.from_coefficients([F2Matrix.zeros(1, 2), F2Matrix.zeros(2, 1)])


class TestFractionFieldRank:
    @pytest.mark.parametrize(
        "rows,expected",
        [
            ([[[0, 1], [1]], [[1], [0, 1]]], 2),
            ([[[0, 1], [0, 0, 1]], [[1], [0, 1]]], 1),
            ([[[0], [0]], [[0], [0]]], 0),
            ([[[1, 1]]], 1),
            ([[[1], [1], [0, 1]], [[1], [1], [1]]], 2),
        ],
    )
    def test_exact_rank(self, rows, expected):
        assert fq_matrix_rank(PolyMatrix.from_rows(rows)) == expected

    def test_evaluation_agrees(self):
        m = PolyMatrix.from_rows([[[0, 1], [1], [0]], [[1], [0, 1], [1, 1]], [[1, 1], [1, 1], [1, 1]]])
        assert fq_matrix_rank_by_evaluation(m, seed=1) == fq_matrix_rank(m)

    def test_evaluation_never_exceeds(self):
        m = PolyMatrix.from_rows([[[0, 1], [0, 0, 1]], [[1], [0, 1]]])
        assert fq_matrix_rank_by_evaluation(m, seed=2) == 1


class TestAsGrading:
    def test_integral_becomes_int(self):
        value = as_grading(Fraction(-4, 2))
        assert value == -2
        assert type(value) is int

    def test_half_integral_kept(self):
        assert as_grading(Fraction(-1, 2)) == Fraction(-1, 2)
