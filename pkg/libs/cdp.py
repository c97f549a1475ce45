"""
Column distance profiles, computed from the superregularity of H'^(D)
and, independently, by exhaustive encoding; plus the transforms that
preserve them.
"""
import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from typing import List, Optional, Sequence
import numpy as np
from libs import config
from libs.errors import MdsError
from libs.codec import normalize
from libs.minors import superregular_depth
from data_classes.common_classes import CodeSpec, Profile

logger = logging.getLogger(__name__)


class NotCanonicalWarning(UserWarning):
    pass


class BudgetExceeded(MdsError):
    def __init__(self, message: str, result=None):
        self.result = result
        super().__init__(message, 422)


class ZeroScalar(MdsError):
    pass


class CannotShortenRateHalf(MdsError):
    pass


class BadPosition(MdsError):
    def __init__(self, message: str):
        super().__init__(message, 400)


def _mds_chain(distances: Sequence[Optional[int]]) -> int:
    depth = -1
    for j, d in enumerate(distances):
        if d != j + 2:
            break
        depth = j
    return depth


def cdp_via_minors(code: CodeSpec, jobs: int = 1, budget: Optional[int] = None) -> Profile:
    D = code.degree
    if 0 in code.coeffs[0]:
        mds_depth, witness = -1, None
    else:
        work = code
        if any(v != 1 for v in code.coeffs[0]):
            warnings.warn("degree-0 coefficients are not all 1; normalizing columns", NotCanonicalWarning)
            logger.warning("normalizing a non-canonical code before minor analysis")
            work = normalize(code)
        mds_depth, witness = superregular_depth(work, jobs=jobs)

    distances: List[Optional[int]] = [j + 2 for j in range(mds_depth + 1)]
    if mds_depth < D:
        # minors only pin down the MDS chain; later distances need the encoder
        try:
            tail = cdp_bruteforce(code, D, budget=budget).distances[mds_depth + 1:]
        except BudgetExceeded:
            logger.info(f"distances beyond depth {mds_depth} left unknown (brute force over budget)")
            tail = [None] * (D - mds_depth)
        distances.extend(tail)

    free_distance = D + 2 if mds_depth == D else distances[-1]
    return Profile(
        distances=distances,
        free_distance=free_distance,
        mds_depth=mds_depth,
        degree=D,
        witness=witness,
    )


def _parity_tables(code: CodeSpec, L: int, blocks: np.ndarray) -> List[np.ndarray]:
    """For each lag i, the parity contribution sum_j r_{i,j} u_j of every block value u."""
    field = code.field
    tables = []
    for i in range(min(code.degree, L) + 1):
        contribution = np.zeros(blocks.shape[0], dtype=np.int64)
        for j in range(code.k):
            contribution ^= field.mul_table(code.coeffs[i][j])[blocks[:, j]]
        tables.append(contribution)
    return tables


def _min_weights(code: CodeSpec, L: int, first_blocks: Sequence[int]) -> List[int]:
    q = code.field.size
    blocks = np.array(list(product(range(q), repeat=code.k)), dtype=np.int64)
    count = blocks.shape[0]
    info_weight = np.count_nonzero(blocks, axis=1).astype(np.int64)
    parity = _parity_tables(code, L, blocks)
    lags = len(parity)
    best = [np.iinfo(np.int64).max] * (L + 1)

    for u0 in first_blocks:
        pending = np.zeros((1, L + 1), dtype=np.int64)
        for i in range(lags):
            pending[0, i] = parity[i][u0]
        weight = info_weight[[u0]] + (pending[:, 0] != 0)
        best[0] = min(best[0], int(weight.min()))
        for t in range(1, L + 1):
            rows = pending.shape[0]
            u = np.tile(np.arange(count), rows)
            pending = np.repeat(pending, count, axis=0)
            for i in range(min(lags, L + 1 - t)):
                pending[:, t + i] ^= parity[i][u]
            weight = np.repeat(weight, count) + info_weight[u] + (pending[:, t] != 0)
            best[t] = min(best[t], int(weight.min()))
    return best


def cdp_bruteforce(code: CodeSpec, L: int, budget: Optional[int] = None, jobs: int = 1) -> Profile:
    """Column distances d_0..d_L by encoding every message whose first block is nonzero."""
    budget = config.BRUTEFORCE_BUDGET if budget is None else budget
    total = code.field.size ** (code.k * (L + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} encodings exceed the brute-force budget {budget}")

    first_blocks = list(range(1, code.field.size ** code.k))
    if jobs <= 1:
        best = _min_weights(code, L, first_blocks)
    else:
        shares = [first_blocks[w::jobs] for w in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            partial = list(pool.map(_min_weights, [code] * jobs, [L] * jobs, shares))
        best = [min(p[t] for p in partial) for t in range(L + 1)]

    return Profile(
        distances=best,
        free_distance=best[-1] if L >= code.degree else None,
        mds_depth=_mds_chain(best),
        degree=code.degree,
    )


# transforms

def scale_transform(code: CodeSpec, c: int) -> CodeSpec:
    """r_{i,j} -> c^i r_{i,j}."""
    if c == 0:
        raise ZeroScalar("scaling constant must be nonzero")
    field = code.field
    rows = tuple(
        tuple(field.mul(field.pow(c, i), v) for v in row)
        for i, row in enumerate(code.coeffs)
    )
    return CodeSpec(field=field, n=code.n, coeffs=rows)


def frobenius_transform(code: CodeSpec) -> CodeSpec:
    field = code.field
    rows = tuple(tuple(field.square(v) for v in row) for row in code.coeffs)
    return CodeSpec(field=field, n=code.n, coeffs=rows)


def permute_columns(code: CodeSpec, order: Sequence[int]) -> CodeSpec:
    """Reorder information positions; order[j-1] is the old position placed at j."""
    if sorted(order) != list(range(1, code.k + 1)):
        raise BadPosition(f"{list(order)} is not a permutation of 1..{code.k}")
    rows = tuple(tuple(row[o - 1] for o in order) for row in code.coeffs)
    return CodeSpec(field=code.field, n=code.n, coeffs=rows)


def shorten(code: CodeSpec, j0: int) -> CodeSpec:
    """Drop information position j0, i.e. columns j0, j0+k, ... of H'^(D)."""
    if code.k < 2:
        raise CannotShortenRateHalf("a rate 1/2 code cannot be shortened further")
    if not 1 <= j0 <= code.k:
        raise BadPosition(f"position {j0} is outside 1..{code.k}")
    rows = tuple(row[:j0 - 1] + row[j0:] for row in code.coeffs)
    return CodeSpec(field=code.field, n=code.n - 1, coeffs=rows)


def equivalent_codes(code: CodeSpec) -> List[CodeSpec]:
    """Frobenius orbit of the code, starting with the code itself."""
    orbit = [code]
    image = frobenius_transform(code)
    while image != code:
        orbit.append(image)
        image = frobenius_transform(image)
    return orbit
