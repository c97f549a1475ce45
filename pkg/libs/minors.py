"""
Proper submatrices of the reduced matrix H'^(D), exact determinants and
the k-superregularity decision.

Indices are 1-based. In H'^(D) the entry at row i, column c is
r_{i-1-q, j} with q = (c-1) // k and j = (c-1) % k + 1, or 0 when
i-1-q < 0. Shifting a submatrix by t rows and t*k columns leaves every
entry unchanged, so each proper submatrix has exactly one translate
whose bottom row is the last row; that translate's lower-left column is
its anchor. Anchors are visited right to left along the last row, which
is the coefficient order r_{0,k}, ..., r_{0,1}, r_{1,k}, ..., r_{D,1}.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
from libs import config
from libs.errors import MdsError
from libs.gf import FieldSpec
from data_classes.common_classes import CodeSpec, ProperSubmatrix, SuperregularVerdict, TruncMatrix

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]


class SizeOverflow(MdsError):
    pass


def walk_position(k: int, degree: int, j: int) -> int:
    """Index of r_{degree, j} in the right-to-left order of the last row."""
    return degree * k + (k - j)


def anchor_coefficient(k: int, rows: int, anchor: int) -> Tuple[int, int]:
    """(degree, j) of the last-row entry at column `anchor`."""
    q = (anchor - 1) // k
    return rows - 1 - q, (anchor - 1) % k + 1


# counting

def _chain_counts(k: int, rows: int) -> List[int]:
    """Number of proper submatrices whose bottom row is i, for i = 1..rows."""
    cols = k * rows
    prefix = [0] * (cols + 1)
    totals = []
    for i in range(1, rows + 1):
        counts = [0] * (cols + 1)
        for j in range(1, k * i + 1):
            counts[j] = 1 + prefix[j - 1]
        totals.append(sum(counts))
        running = 0
        updated = [0] * (cols + 1)
        for j in range(1, cols + 1):
            running += counts[j]
            updated[j] = prefix[j] + running
        prefix = updated
    return totals


def count_proper(k: int, rows: int) -> int:
    return sum(_chain_counts(k, rows))


def count_anchored(k: int, rows: int) -> int:
    return _chain_counts(k, rows)[-1]


def _check_cap(count: int, cap: Optional[int]) -> None:
    cap = config.MINOR_CAP if cap is None else cap
    if count > cap:
        raise SizeOverflow(f"{count} proper submatrices exceed the enumeration cap {cap}")


# enumeration

def anchored_at(k: int, rows: int, anchor: int) -> List[Tuple[Index, Index]]:
    """All proper submatrices with lower-left corner (rows, anchor), ordered by (size, rows, cols)."""
    found: List[Tuple[Index, Index]] = [((rows,), (anchor,))]
    last_col = k * rows

    def extend(row_idx: Index, col_idx: Index) -> None:
        i_last, j_last = row_idx[-1], col_idx[-1]
        for j in range(j_last + 1, last_col + 1):
            found.append((row_idx + (rows,), col_idx + (j,)))
        for i in range(i_last + 1, rows):
            for j in range(j_last + 1, k * i + 1):
                extend(row_idx + (i,), col_idx + (j,))

    first_row = (anchor + k - 1) // k
    for i in range(first_row, rows):
        extend((i,), (anchor,))
    found.sort(key=lambda pair: (len(pair[0]), pair[0], pair[1]))
    return found


def anchored_groups(k: int, rows: int) -> Iterator[Tuple[int, List[Tuple[Index, Index]]]]:
    for anchor in range(k * rows, 0, -1):
        yield anchor, anchored_at(k, rows, anchor)


def enumerate_anchored(k: int, rows: int, cap: Optional[int] = None) -> List[ProperSubmatrix]:
    _check_cap(count_anchored(k, rows), cap)
    return [
        ProperSubmatrix(row_idx, col_idx, anchor)
        for anchor, group in anchored_groups(k, rows)
        for row_idx, col_idx in group
    ]


def enumerate_proper(k: int, rows: int, cap: Optional[int] = None) -> List[ProperSubmatrix]:
    """Every proper submatrix of a (rows) x (k*rows) block lower-triangular matrix, grouped by anchor."""
    if k < 1 or rows < 1:
        raise MdsError(f"need k >= 1 and at least one row, got k={k}, rows={rows}", 400)
    _check_cap(count_proper(k, rows), cap)
    out = []
    for anchor, group in anchored_groups(k, rows):
        for row_idx, col_idx in group:
            shift = 0
            while row_idx[0] - shift >= 1 and col_idx[0] - shift * k >= 1:
                out.append(ProperSubmatrix(
                    tuple(i - shift for i in row_idx),
                    tuple(c - shift * k for c in col_idx),
                    anchor,
                ))
                shift += 1
    return out


def is_proper(sub: ProperSubmatrix, k: int) -> bool:
    return all(j <= k * i for i, j in zip(sub.row_idx, sub.col_idx))


# determinants

def det_matrix(field: FieldSpec, matrix: Sequence[Sequence[int]]) -> int:
    """Determinant by Gaussian elimination; char 2, so row swaps carry no sign."""
    a = [list(row) for row in matrix]
    p = len(a)
    result = 1
    for col in range(p):
        pivot = next((r for r in range(col, p) if a[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        lead = a[col][col]
        result = field.mul(result, lead)
        inverse = field.inv(lead)
        for r in range(col + 1, p):
            if a[r][col]:
                factor = field.mul(a[r][col], inverse)
                a[r] = [x ^ field.mul(factor, y) for x, y in zip(a[r], a[col])]
    return result


def submatrix(sub: ProperSubmatrix, matrix: TruncMatrix) -> List[List[int]]:
    return [[int(matrix.entries[i - 1, j - 1]) for j in sub.col_idx] for i in sub.row_idx]


def det(sub: ProperSubmatrix, matrix: TruncMatrix) -> int:
    return det_matrix(matrix.field, submatrix(sub, matrix))


class MinorEvaluator:
    """Memoized Laplace expansion of submatrices of H'^(D) along their last row.

    `values[walk_position(k, i, j)]` holds r_{i,j}. A cached determinant is
    filed under the walk position of its lower-left entry, the latest
    coefficient it depends on, so `invalidate(p)` drops exactly the entries
    that a change at position p can affect.
    """

    def __init__(self, field: FieldSpec, k: int, values: List[int], cache_limit: Optional[int] = None):
        self.field = field
        self.k = k
        self.values = values
        self.caches: List[Dict[Tuple[Index, Index], int]] = [dict() for _ in range(len(values))]
        self.cache_limit = cache_limit
        self._cached = 0

    def invalidate(self, position: int) -> None:
        for cache in self.caches[position:]:
            cache.clear()

    def entry(self, i: int, c: int) -> int:
        k = self.k
        degree = i - 1 - (c - 1) // k
        if degree < 0:
            return 0
        return self.values[degree * k + k - 1 - (c - 1) % k]

    def det(self, row_idx: Index, col_idx: Index) -> int:
        p = len(row_idx)
        if p == 0:
            return 1
        k = self.k
        shift = min(row_idx[0] - 1, (col_idx[0] - 1) // k)
        if shift:
            row_idx = tuple(i - shift for i in row_idx)
            col_idx = tuple(c - shift * k for c in col_idx)
        last = row_idx[-1]
        c0 = col_idx[0]
        degree = last - 1 - (c0 - 1) // k
        if degree < 0:
            return 0
        position = degree * k + k - 1 - (c0 - 1) % k
        if p == 1:
            return self.values[position]
        cache = self.caches[position]
        key = (row_idx, col_idx)
        hit = cache.get(key)
        if hit is not None:
            return hit
        value = self._expand(row_idx, col_idx, 0)
        if self.cache_limit is not None:
            self._cached += 1
            if self._cached > self.cache_limit:
                for c in self.caches:
                    c.clear()
                self._cached = 0
        cache[key] = value
        return value

    def _expand(self, row_idx: Index, col_idx: Index, start: int) -> int:
        k = self.k
        values = self.values
        mul = self.field.mul
        last = row_idx[-1]
        top = row_idx[:-1]
        acc = 0
        for l in range(start, len(col_idx)):
            c = col_idx[l]
            degree = last - 1 - (c - 1) // k
            if degree < 0:
                break
            a = values[degree * k + k - 1 - (c - 1) % k]
            if a:
                cofactor = self.det(top, col_idx[:l] + col_idx[l + 1:])
                if cofactor:
                    acc ^= mul(a, cofactor)
        return acc

    def split(self, row_idx: Index, col_idx: Index) -> Tuple[int, int]:
        """(c1, c0) with det = c1 * x + c0, x being the lower-left entry."""
        if len(row_idx) == 1:
            return 1, 0
        c1 = self.det(row_idx[:-1], col_idx[1:])
        c0 = self._expand(row_idx, col_idx, 1)
        return c1, c0

    def minor(self, row_idx: Index, col_idx: Index) -> int:
        """Determinant of a top-level minor, without caching the result itself."""
        if len(row_idx) == 1:
            return self.entry(row_idx[0], col_idx[0])
        return self._expand(row_idx, col_idx, 0)


def code_values(code: CodeSpec, D: int) -> List[int]:
    k = code.k
    values = [0] * (k * (D + 1))
    for i in range(D + 1):
        for j in range(1, k + 1):
            values[walk_position(k, i, j)] = code.coefficient(i, j)
    return values


def _first_failure(code: CodeSpec, D: int, anchors: Sequence[int]) -> Tuple[int, Optional[ProperSubmatrix]]:
    """Walk the given anchor groups in order; return (checked, first singular minor)."""
    k = code.k
    rows = D + 1
    evaluator = MinorEvaluator(code.field, k, code_values(code, D), cache_limit=config.DET_CACHE)
    checked = 0
    for anchor in anchors:
        for row_idx, col_idx in anchored_at(k, rows, anchor):
            checked += 1
            if evaluator.minor(row_idx, col_idx) == 0:
                return checked, ProperSubmatrix(row_idx, col_idx, anchor)
    return checked, None


def _worker_first_failure(code: CodeSpec, D: int, anchors: List[int]):
    return _first_failure(code, D, anchors)


def is_k_superregular(code: CodeSpec, D: int, jobs: int = 1, cap: Optional[int] = None) -> SuperregularVerdict:
    if D > code.degree:
        raise MdsError(f"degree {D} exceeds the code degree {code.degree}", 400)
    k = code.k
    rows = D + 1
    _check_cap(count_anchored(k, rows), cap)
    walk = list(range(k * rows, 0, -1))

    if jobs <= 1 or len(walk) < 2:
        checked, witness = _first_failure(code, D, walk)
        return SuperregularVerdict(witness is None, witness, checked)

    # interleave anchors so the heavy deep groups are spread over workers
    shares = [walk[w::jobs] for w in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_worker_first_failure, [code] * jobs, [D] * jobs, shares))
    checked = sum(r[0] for r in results)
    failures = [r[1] for r in results if r[1] is not None]
    if not failures:
        return SuperregularVerdict(True, None, checked)
    witness = max(failures, key=lambda sub: sub.anchor)
    return SuperregularVerdict(False, witness, checked)


def superregular_depth(code: CodeSpec, jobs: int = 1, cap: Optional[int] = None) -> Tuple[int, Optional[ProperSubmatrix]]:
    """Largest D' <= D with H'^(D') k-superregular (-1 if none), plus the failing minor of H'^(D'+1)."""
    D = code.degree
    verdict = is_k_superregular(code, D, jobs=jobs, cap=cap)
    logger.debug(f"checked {verdict.checked} anchored minors of H'^({D})")
    if verdict.is_superregular:
        return D, None
    witness = verdict.witness
    failing_degree, _ = anchor_coefficient(code.k, D + 1, witness.anchor)
    shift = D - failing_degree
    translated = ProperSubmatrix(
        tuple(i - shift for i in witness.row_idx),
        tuple(c - shift * code.k for c in witness.col_idx),
        witness.anchor - shift * code.k,
    )
    return failing_degree - 1, translated
