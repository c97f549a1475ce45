import pytest
import numpy as np
from libs.gf import default_field
from libs.codec import (
    FieldMismatch,
    LogOutOfRange,
    NotRepresentable,
    ParseError,
    RowLengthMismatch,
    code_from_coefficients,
    code_from_file,
    code_from_log_rows,
    code_from_text,
    code_to_file,
    code_to_log_rows,
    code_to_text,
    generator_truncated,
    matmul,
    normalize,
    parity_truncated,
    reduced_matrix,
    render_parity_matrix,
    syndrome,
    with_degree,
)
from libs.construct import example_code
from libs.erasure import encode_stream

EXAMPLE_TEXT = "gf 3 0b1011\nn 3\nrows 2\n1 0\n0 3\n"


class TestLogRows:

    def test_rows_are_stored_j_ascending(self):
        """Table rows list r_{i,k} first"""
        code = example_code()
        assert code.coeffs == ((1, 1), (1, 2), (3, 1))
        assert code.coefficient(1, 2) == 2
        assert code.coefficient(3, 1) == 0

    def test_log_round_trip(self):
        assert code_to_log_rows(example_code()) == [[1, 0], [0, 3]]

    def test_log_out_of_range(self, gf8):
        with pytest.raises(LogOutOfRange):
            code_from_log_rows(gf8, 3, [[7, 0]])

    def test_row_length_mismatch(self, gf8):
        with pytest.raises(RowLengthMismatch):
            code_from_log_rows(gf8, 3, [[1, 0, 2]])

    def test_zero_coefficient_has_no_table_form(self, gf8):
        code = code_from_coefficients(gf8, 2, [(1,), (0,)])
        with pytest.raises(NotRepresentable):
            code_to_log_rows(code)


class TestTextFormat:

    def test_example_text(self):
        """The worked example serializes to the documented layout"""
        assert code_to_text(example_code()) == EXAMPLE_TEXT
        assert code_from_text(EXAMPLE_TEXT) == example_code()

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "example.code"
        code_to_file(example_code(), path)
        assert code_from_file(path) == example_code()

    def test_degree_zero_code(self):
        code = code_from_text("gf 4 0b10011\nn 2\nrows 0\n")
        assert code.degree == 0
        assert code.coeffs == ((1,),)

    def test_log_out_of_range_reports_position(self):
        """Line and column point at the offending token"""
        with pytest.raises(ParseError) as exc_info:
            code_from_text("gf 3 0b1011\nn 3\nrows 1\n1 9\n")
        assert exc_info.value.line == 4
        assert exc_info.value.column == 3
        assert exc_info.value.status_code == 400

    def test_wrong_row_length(self):
        with pytest.raises(ParseError) as exc_info:
            code_from_text("gf 3 0b1011\nn 3\nrows 1\n1\n")
        assert exc_info.value.line == 4

    def test_duplicate_header(self):
        with pytest.raises(ParseError) as exc_info:
            code_from_text("gf 3 0b1011\ngf 3 0b1011\nrows 0\n")
        assert exc_info.value.line == 2

    def test_missing_rows(self):
        with pytest.raises(ParseError) as exc_info:
            code_from_text("gf 3 0b1011\nn 2\nrows 3\n1\n2\n")
        assert exc_info.value.line == 6

    def test_trailing_content(self):
        with pytest.raises(ParseError):
            code_from_text("gf 3 0b1011\nn 2\nrows 1\n1\n2\n")

    def test_non_primitive_polynomial(self):
        """A declared polynomial that is not primitive is a field mismatch"""
        with pytest.raises(FieldMismatch):
            code_from_text("gf 4 0b11111\nn 2\nrows 0\n")

    def test_empty_file(self):
        with pytest.raises(ParseError):
            code_from_text("")


class TestMatrices:

    def test_reduced_matrix_entries(self):
        """Entry (i, c) of H'^(D) is r_{i-1-q, j}"""
        code = example_code()
        h = reduced_matrix(code, 2)
        assert h.rows == 3 and h.cols == 6
        k = code.k
        for i in range(1, 4):
            for c in range(1, 7):
                q, j = (c - 1) // k, (c - 1) % k + 1
                assert h[i - 1, c - 1] == code.coefficient(i - 1 - q, j)

    def test_generator_is_orthogonal_to_parity_check(self):
        """G_L H_L^T = 0 for every truncation"""
        code = example_code()
        for L in range(4):
            g = generator_truncated(code, L)
            h = parity_truncated(code, L)
            product = matmul(code.field, g.entries, h.entries.T)
            assert not np.any(product)

    def test_encoded_stream_has_zero_syndrome(self):
        code = example_code()
        rng = np.random.default_rng(3)
        stream = encode_stream(code, rng.integers(0, 8, size=(6, code.k)))
        assert syndrome(code, stream.blocks) == [0] * 6

    def test_render_parity_matrix(self):
        assert render_parity_matrix(example_code()) == "(1 + x + α^3 x^2, 1 + α x + x^2, 1)"


def test_normalize_makes_degree_zero_unit(gf8):
    """Column scaling by r_{0,j}^{-1}"""
    code = code_from_coefficients(gf8, 3, [(2, 3), (4, 5)])
    out = normalize(code)
    assert out.coeffs[0] == (1, 1)
    assert out.coeffs[1] == (gf8.div(4, 2), gf8.div(5, 3))


def test_with_degree_truncates_and_pads():
    code = example_code()
    assert with_degree(code, 1).coeffs == code.coeffs[:2]
    assert with_degree(code, 3).coeffs[3] == (0, 0)
