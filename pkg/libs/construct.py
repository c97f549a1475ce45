"""
Closed-form MDS constructions, the degree-2 condition checker and the
upper bound on k for a given free distance.
"""
import logging
from itertools import combinations
from typing import List, Optional
from libs.errors import MdsError
from libs.gf import FieldSpec, BadDegree, default_field
from libs.codec import code_from_coefficients, code_from_log_rows, normalize
from libs.minors import det_matrix
from data_classes.common_classes import CodeSpec, D4Condition, D4Report

logger = logging.getLogger(__name__)


class BadBeta(MdsError):
    def __init__(self, message: str):
        super().__init__(message, 400)


class BadConstant(MdsError):
    def __init__(self, message: str):
        super().__init__(message, 400)


class DegreeTooSmall(MdsError):
    pass


class DistanceTooSmall(MdsError):
    def __init__(self, message: str):
        super().__init__(message, 400)


def construct_d3(field: FieldSpec) -> CodeSpec:
    """Rate (2^m-1)/2^m code of degree 1 with r_{1,j} = alpha^(j-1)."""
    k = field.order
    rows = [tuple([1] * k), tuple(field.exp(j) for j in range(k))]
    return code_from_coefficients(field, k + 1, rows)


def trace_hyperplane(field: FieldSpec, beta: int) -> List[int]:
    """H_beta = {x : Tr(beta x) = 0}, ascending."""
    if not 1 <= beta < field.size:
        raise BadBeta(f"beta must be a nonzero element of GF(2^{field.m}), got {beta}")
    return [x for x in field.elements() if field.trace(field.mul(beta, x)) == 0]


def construct_d4(field: FieldSpec, beta: Optional[int] = None, c: Optional[int] = None) -> CodeSpec:
    """Rate (2^(m-1)-1)/2^(m-1) code of degree 2 reaching free distance 4.

    r_{1,s} runs over the nonzero elements a_s of H_beta and
    r_{2,s} = a_s (a_s + c) for some c outside H_beta.
    """
    if field.m < 2:
        raise BadDegree("the degree-2 construction needs m >= 2")
    beta = 1 if beta is None else beta
    hyperplane = trace_hyperplane(field, beta)
    members = set(hyperplane)
    if c is None:
        c = next(x for x in field.elements() if x not in members)
    elif c in members:
        raise BadConstant(f"c = {c} lies in H_beta, so Tr(beta c) = 0")
    if not 0 <= c < field.size:
        raise BadConstant(f"c = {c} is not an element of GF(2^{field.m})")

    a = [x for x in hyperplane if x != 0]
    k = len(a)
    rows = [
        tuple([1] * k),
        tuple(a),
        tuple(field.mul(x, x ^ c) for x in a),
    ]
    logger.debug(f"degree-2 construction over GF(2^{field.m}) with beta={beta}, c={c}")
    return code_from_coefficients(field, k + 1, rows)


def check_d4_conditions(code: CodeSpec) -> D4Report:
    if code.degree < 2:
        raise DegreeTooSmall(f"the conditions need degree >= 2, got {code.degree}")
    if any(v != 1 for v in code.coeffs[0]):
        code = normalize(code)

    f = code.field
    mul = f.mul
    k = code.k
    r1 = code.coeffs[1]
    r2 = code.coeffs[2]
    idx = range(k)

    def first(name, pairs) -> D4Condition:
        # pairs yields (0-based indices, value that must be nonzero)
        for witness, value in pairs:
            if value == 0:
                return D4Condition(name, False, tuple(i + 1 for i in witness))
        return D4Condition(name, True)

    return D4Report([
        first("i", (((s,), mul(r1[s], r2[s])) for s in idx)),
        first("ii", (((s, t), (r1[s] ^ r1[t]) and (r2[s] ^ r2[t])) for s, t in combinations(idx, 2))),
        first("iii", (((s, t), r2[s] ^ mul(r1[s], r1[t])) for s in idx for t in idx)),
        first("iv", (
            ((s, t), mul(r1[s], r2[t]) ^ mul(r1[t], r2[s])) for s, t in combinations(idx, 2)
        )),
        first("v", (
            ((s, t, u), r2[s] ^ r2[t] ^ mul(r1[u], r1[s] ^ r1[t]))
            for s, t in combinations(idx, 2) for u in idx
        )),
        first("vi", (
            ((s, t, u), det_matrix(f, [[1, 1, 1], [r1[s], r1[t], r1[u]], [r2[s], r2[t], r2[u]]]))
            for s, t, u in combinations(idx, 3)
        )),
    ])


def max_k_bound(field: FieldSpec, target_distance: int) -> int:
    """Largest k = n-1 allowing free distance target_distance with an MDS profile."""
    if target_distance < 3:
        raise DistanceTooSmall(f"the bound needs a distance of at least 3, got {target_distance}")
    return field.order // (target_distance - 2)


def max_distance_bound(field: FieldSpec, n: int) -> int:
    if n < 2:
        raise MdsError(f"block length must be at least 2, got {n}", 400)
    return field.order // (n - 1) + 2


def example_code() -> CodeSpec:
    """The GF(8), n=3, degree-2 worked example."""
    return code_from_log_rows(default_field(3), 3, [[1, 0], [0, 3]])
