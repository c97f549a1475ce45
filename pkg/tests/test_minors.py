import pytest
import numpy as np
from libs.gf import default_field
from libs.codec import code_from_coefficients, code_from_log_rows, reduced_matrix
from libs.minors import (
    MinorEvaluator,
    SizeOverflow,
    anchor_coefficient,
    anchored_at,
    code_values,
    count_anchored,
    count_proper,
    det,
    det_matrix,
    enumerate_anchored,
    enumerate_proper,
    is_k_superregular,
    is_proper,
    submatrix,
    superregular_depth,
    walk_position,
)
from data_classes.common_classes import ProperSubmatrix


def random_code(field, n, D, rng):
    k = n - 1
    rows = [tuple([1] * k)] + [tuple(int(v) for v in rng.integers(1, field.size, size=k)) for _ in range(D)]
    return code_from_coefficients(field, n, rows)


def laplace(field, matrix):
    if len(matrix) == 1:
        return matrix[0][0]
    acc = 0
    for c in range(len(matrix)):
        if matrix[0][c]:
            rest = [row[:c] + row[c + 1:] for row in matrix[1:]]
            acc ^= field.mul(matrix[0][c], laplace(field, rest))
    return acc


class TestEnumeration:

    def test_counts(self):
        """k=2, three rows: 54 proper submatrices, 43 of them reach the last row"""
        assert count_proper(2, 3) == 54
        assert count_anchored(2, 3) == 43
        assert len(enumerate_proper(2, 3)) == 54
        assert len(enumerate_anchored(2, 3)) == 43

    @pytest.mark.parametrize("k,rows", [(1, 4), (2, 3), (3, 2)])
    def test_enumeration_is_complete_and_proper(self, k, rows):
        """Cross-check against filtering every square submatrix"""
        from itertools import combinations
        expected = set()
        for size in range(1, rows + 1):
            for r in combinations(range(1, rows + 1), size):
                for c in combinations(range(1, k * rows + 1), size):
                    if all(j <= k * i for i, j in zip(r, c)):
                        expected.add((r, c))
        found = [(s.row_idx, s.col_idx) for s in enumerate_proper(k, rows)]
        assert len(found) == len(set(found))
        assert set(found) == expected
        assert all(is_proper(s, k) for s in enumerate_proper(k, rows))

    def test_anchored_groups_share_a_lower_left_entry(self):
        for anchor in range(1, 7):
            for row_idx, col_idx in anchored_at(2, 3, anchor):
                assert row_idx[-1] == 3
                assert col_idx[0] == anchor

    def test_cap(self):
        with pytest.raises(SizeOverflow):
            enumerate_proper(2, 4, cap=10)

    def test_walk_positions(self):
        """Right-to-left along the last row"""
        assert walk_position(3, 0, 3) == 0
        assert walk_position(3, 0, 1) == 2
        assert walk_position(3, 1, 3) == 3
        assert anchor_coefficient(2, 3, 6) == (0, 2)
        assert anchor_coefficient(2, 3, 1) == (2, 1)


class TestDeterminants:

    def test_gaussian_matches_laplace(self, gf16):
        rng = np.random.default_rng(7)
        for size in range(1, 5):
            for _ in range(20):
                matrix = rng.integers(0, 16, size=(size, size)).tolist()
                assert det_matrix(gf16, matrix) == laplace(gf16, matrix)

    def test_against_galois(self, gf16):
        """Independent determinant oracle"""
        galois = pytest.importorskip("galois")
        GF = galois.GF(16, irreducible_poly=gf16.poly_mask)
        rng = np.random.default_rng(11)
        for _ in range(30):
            matrix = rng.integers(0, 16, size=(3, 3))
            assert det_matrix(gf16, matrix.tolist()) == int(np.linalg.det(GF(matrix)))

    def test_evaluator_matches_direct_determinants(self, gf8):
        """Memoized expansion agrees with elimination on every proper minor"""
        rng = np.random.default_rng(5)
        code = random_code(gf8, 3, 2, rng)
        h = reduced_matrix(code, 2)
        evaluator = MinorEvaluator(gf8, code.k, code_values(code, 2))
        for sub in enumerate_proper(code.k, 3):
            assert evaluator.det(sub.row_idx, sub.col_idx) == det(sub, h)
            assert evaluator.minor(sub.row_idx, sub.col_idx) == det(sub, h)

    def test_split_is_linear_in_the_lower_left_entry(self, gf8):
        rng = np.random.default_rng(9)
        code = random_code(gf8, 2, 3, rng)
        values = code_values(code, 3)
        evaluator = MinorEvaluator(gf8, 1, values)
        rows, cols = (2, 3, 4), (1, 2, 3)
        position = walk_position(1, 3, 1)
        c1, c0 = evaluator.split(rows, cols)
        for x in range(8):
            values[position] = x
            evaluator.invalidate(position)
            assert evaluator.minor(rows, cols) == gf8.mul(c1, x) ^ c0


class TestSuperregularity:

    def test_bundled_gf8_code(self, gf8):
        """The GF(8), n=2 table code is MDS up to degree 4"""
        code = code_from_log_rows(gf8, 2, [[0], [1], [4], [3]])
        verdict = is_k_superregular(code, 4)
        assert verdict.is_superregular
        assert verdict.checked == count_anchored(1, 5)
        assert superregular_depth(code) == (4, None)

    def test_all_ones_fails_at_depth_two(self, gf8):
        code = code_from_coefficients(gf8, 2, [(1,), (1,), (1,)])
        depth, witness = superregular_depth(code)
        assert depth == 1
        h = reduced_matrix(code, 2)
        assert det(witness, h) == 0
        assert is_proper(witness, 1)

    def test_parallel_agrees(self, gf8):
        rng = np.random.default_rng(2)
        for _ in range(5):
            code = random_code(gf8, 3, 2, rng)
            assert bool(is_k_superregular(code, 2, jobs=2)) == bool(is_k_superregular(code, 2))


def test_submatrix_extraction(gf8):
    code = code_from_log_rows(gf8, 2, [[0], [1]])
    sub = ProperSubmatrix((2, 3), (1, 2))
    assert submatrix(sub, reduced_matrix(code, 2)) == [[1, 1], [2, 1]]
