"""
Code model: coefficient storage, truncated parity-check and generator
matrices, polynomial forms and the line-oriented code file format.

File format (UTF-8):

    gf <m> <poly_mask_binary>
    n <n>
    rows <D>
    <k logs of r_{1,k} ... r_{1,1}>
    ...
    <k logs of r_{D,k} ... r_{D,1}>

Degree-0 coefficients are implied to be 1.
"""
from pathlib import Path
from typing import List, Sequence, Union
import numpy as np
from libs.errors import MdsError
from libs.gf import FieldSpec, FieldError, NotPrimitive, field_new
from data_classes.common_classes import CodeSpec, TruncMatrix


class CodecError(MdsError):
    pass


class RowLengthMismatch(CodecError):
    pass


class LogOutOfRange(CodecError):
    pass


class NotRepresentable(CodecError):
    pass


class ParseError(CodecError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}", 400)


class FieldMismatch(CodecError):
    def __init__(self, message: str):
        super().__init__(message, 400)


def code_from_coefficients(field: FieldSpec, n: int, rows: Sequence[Sequence[int]]) -> CodeSpec:
    """Build a code from full coefficient rows r_i = (r_{i,1}, ..., r_{i,k}), degree 0 first."""
    if n < 2:
        raise CodecError(f"block length must be at least 2, got {n}")
    k = n - 1
    if not rows:
        raise CodecError("a code needs at least the degree-0 coefficient row")
    for i, row in enumerate(rows):
        if len(row) != k:
            raise RowLengthMismatch(f"row {i} has {len(row)} entries, expected k={k}")
        for value in row:
            if not 0 <= value < field.size:
                raise CodecError(f"coefficient {value} is not an element of GF(2^{field.m})")
    return CodeSpec(field=field, n=n, coeffs=tuple(tuple(int(v) for v in row) for row in rows))


def code_from_log_rows(field: FieldSpec, n: int, log_rows: Sequence[Sequence[int]]) -> CodeSpec:
    """Decode table-style rows (degrees 1..D, entries j-descending, logs base alpha)."""
    k = n - 1
    rows = [tuple([1] * k)]
    for i, log_row in enumerate(log_rows, start=1):
        if len(log_row) != k:
            raise RowLengthMismatch(f"degree {i} row has {len(log_row)} entries, expected k={k}")
        for value in log_row:
            if not 0 <= value <= field.order - 1:
                raise LogOutOfRange(
                    f"log {value} in degree {i} row is outside 0..{field.order - 1}"
                )
        rows.append(tuple(field.exp(v) for v in reversed(log_row)))
    return code_from_coefficients(field, n, rows)


def code_to_log_rows(code: CodeSpec) -> List[List[int]]:
    if any(v != 1 for v in code.coeffs[0]):
        raise NotRepresentable("only codes with unit degree-0 coefficients have a table form")
    rows = []
    for i in range(1, code.degree + 1):
        if 0 in code.coeffs[i]:
            raise NotRepresentable(f"degree {i} has a zero coefficient, which has no logarithm")
        rows.append([code.field.log(v) for v in reversed(code.coeffs[i])])
    return rows


def with_degree(code: CodeSpec, degree: int) -> CodeSpec:
    """Truncate (or zero-extend) the coefficient array to the given degree."""
    rows = list(code.coeffs[:degree + 1])
    while len(rows) < degree + 1:
        rows.append(tuple([0] * code.k))
    return CodeSpec(field=code.field, n=code.n, coeffs=tuple(rows))


def normalize(code: CodeSpec) -> CodeSpec:
    """Scale column j by r_{0,j}^{-1} so that every degree-0 coefficient becomes 1."""
    field = code.field
    inverses = [field.inv(v) for v in code.coeffs[0]]
    rows = [tuple(field.mul(v, inverses[j]) for j, v in enumerate(row)) for row in code.coeffs]
    return CodeSpec(field=field, n=code.n, coeffs=tuple(rows))


# truncated matrices

def parity_truncated(code: CodeSpec, L: int) -> TruncMatrix:
    n, k = code.n, code.k
    entries = np.zeros((L + 1, n * (L + 1)), dtype=np.int64)
    for t in range(L + 1):
        for b in range(t + 1):
            i = t - b
            for j in range(1, k + 1):
                entries[t, b * n + j - 1] = code.coefficient(i, j)
            if i == 0:
                entries[t, b * n + k] = 1
    return TruncMatrix(rows=L + 1, cols=n * (L + 1), entries=entries, field=code.field)


def generator_truncated(code: CodeSpec, L: int) -> TruncMatrix:
    n, k = code.n, code.k
    entries = np.zeros((k * (L + 1), n * (L + 1)), dtype=np.int64)
    for a in range(L + 1):
        for b in range(a, L + 1):
            i = b - a
            for s in range(k):
                if i == 0:
                    entries[a * k + s, b * n + s] = 1
                entries[a * k + s, b * n + k] = code.coefficient(i, s + 1)
    return TruncMatrix(rows=k * (L + 1), cols=n * (L + 1), entries=entries, field=code.field)


def reduced_matrix(code: CodeSpec, D: int) -> TruncMatrix:
    """H'^(D): the parity-check matrix with the parity columns removed."""
    if D > code.degree:
        raise CodecError(f"degree {D} exceeds the code degree {code.degree}")
    k = code.k
    entries = np.zeros((D + 1, k * (D + 1)), dtype=np.int64)
    for t in range(D + 1):
        for q in range(t + 1):
            for j in range(1, k + 1):
                entries[t, q * k + j - 1] = code.coefficient(t - q, j)
    return TruncMatrix(rows=D + 1, cols=k * (D + 1), entries=entries, field=code.field)


def matmul(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(a.shape[1]):
        out ^= field.mul_array(a[:, s:s + 1], b[s:s + 1, :])
    return out


def syndrome(code: CodeSpec, blocks: Sequence[Sequence[int]]) -> List[int]:
    """Syndrome rows s_t = sum_{i,j} r_{i,j} v_{t-i,j} + v_{t,n} for every block t."""
    field = code.field
    k = code.k
    out = []
    for t in range(len(blocks)):
        s = blocks[t][k]
        for i in range(min(t, code.degree) + 1):
            block = blocks[t - i]
            for j in range(1, k + 1):
                s ^= field.mul(code.coefficient(i, j), block[j - 1])
        out.append(s)
    return out


# polynomial form

def polynomial_parity_matrix(code: CodeSpec) -> List[List[int]]:
    """H(x) as k+1 coefficient lists; entry j holds sum_i r_{i,j} x^i, the last is 1."""
    polys = [[code.coefficient(i, j) for i in range(code.degree + 1)] for j in range(1, code.k + 1)]
    polys.append([1])
    return polys


def render_polynomial(field: FieldSpec, coefficients: Sequence[int]) -> str:
    terms = []
    for i, c in enumerate(coefficients):
        if c == 0:
            continue
        scalar = field.format_element(c)
        if i == 0:
            terms.append(scalar)
            continue
        power = "x" if i == 1 else f"x^{i}"
        terms.append(power if c == 1 else f"{scalar} {power}")
    return " + ".join(terms) if terms else "0"


def render_parity_matrix(code: CodeSpec) -> str:
    polys = polynomial_parity_matrix(code)
    return "(" + ", ".join(render_polynomial(code.field, p) for p in polys) + ")"


# text and file forms

def code_to_text(code: CodeSpec) -> str:
    rows = code_to_log_rows(code)
    lines = [
        f"gf {code.field.m} {bin(code.field.poly_mask)}",
        f"n {code.n}",
        f"rows {code.degree}",
    ]
    lines.extend(" ".join(str(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _column(line: str, token_index: int) -> int:
    pos = 0
    for index, token in enumerate(line.split()):
        pos = line.index(token, pos)
        if index == token_index:
            return pos + 1
        pos += len(token)
    return len(line) + 1


def _parse_int(line: str, lineno: int, token_index: int, base: int = 10) -> int:
    tokens = line.split()
    if token_index >= len(tokens):
        raise ParseError("missing value", lineno, _column(line, token_index))
    try:
        return int(tokens[token_index], base)
    except ValueError:
        raise ParseError(f"invalid integer '{tokens[token_index]}'", lineno, _column(line, token_index))


def _parse_header(lines: List[str], lineno: int, key: str, arity: int, seen: set) -> str:
    if lineno > len(lines):
        raise ParseError(f"missing '{key}' header", lineno)
    line = lines[lineno - 1]
    tokens = line.split()
    if not tokens:
        raise ParseError(f"expected '{key}' header, found a blank line", lineno)
    if tokens[0] in seen:
        raise ParseError(f"duplicate header '{tokens[0]}'", lineno, _column(line, 0))
    if tokens[0] != key:
        raise ParseError(f"expected '{key}' header, found '{tokens[0]}'", lineno, _column(line, 0))
    if len(tokens) != arity + 1:
        raise ParseError(f"'{key}' takes {arity} value(s)", lineno, _column(line, min(len(tokens), arity + 1)))
    seen.add(key)
    return line


def code_from_text(text: str) -> CodeSpec:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or not "".join(lines).strip():
        raise ParseError("empty code file", 1)

    seen: set = set()
    line = _parse_header(lines, 1, "gf", 2, seen)
    m = _parse_int(line, 1, 1)
    try:
        mask = int(line.split()[2], 0)
    except ValueError:
        raise ParseError(f"invalid polynomial mask '{line.split()[2]}'", 1, _column(line, 2))
    try:
        field = field_new(m, mask)
    except NotPrimitive as e:
        raise FieldMismatch(f"declared polynomial is not primitive: {e.message}")
    except FieldError as e:
        raise ParseError(e.message, 1, _column(line, 1))

    line = _parse_header(lines, 2, "n", 1, seen)
    n = _parse_int(line, 2, 1)
    if n < 2:
        raise ParseError(f"block length must be at least 2, got {n}", 2, _column(line, 1))
    line = _parse_header(lines, 3, "rows", 1, seen)
    degree = _parse_int(line, 3, 1)
    if degree < 0:
        raise ParseError("row count must be non-negative", 3, _column(line, 1))

    k = n - 1
    log_rows = []
    for offset in range(degree):
        lineno = 4 + offset
        if lineno > len(lines):
            raise ParseError(f"expected {degree} coefficient rows, found {offset}", lineno)
        line = lines[lineno - 1]
        tokens = line.split()
        if tokens and tokens[0] in ("gf", "n", "rows"):
            raise ParseError(f"duplicate header '{tokens[0]}'", lineno, _column(line, 0))
        if len(tokens) != k:
            raise ParseError(f"expected {k} logs, found {len(tokens)}", lineno, _column(line, min(len(tokens), k)))
        row = [_parse_int(line, lineno, t) for t in range(k)]
        for t, value in enumerate(row):
            if not 0 <= value <= field.order - 1:
                raise ParseError(f"log {value} is outside 0..{field.order - 1}", lineno, _column(line, t))
        log_rows.append(row)
    if len(lines) > 3 + degree:
        raise ParseError("unexpected content after the coefficient rows", 4 + degree)
    return code_from_log_rows(field, n, log_rows)


def code_to_file(code: CodeSpec, path: Union[str, Path]) -> None:
    Path(path).write_text(code_to_text(code), encoding="utf-8")


def code_from_file(path: Union[str, Path]) -> CodeSpec:
    return code_from_text(Path(path).read_text(encoding="utf-8"))
