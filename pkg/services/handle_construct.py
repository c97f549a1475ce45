import logging
from typing import Any, Dict, List
from libs.errors import MdsError
from libs.gf import MAX_DEGREE, default_field
from libs.codec import code_to_text, render_parity_matrix
from libs.cdp import cdp_via_minors
from libs.construct import (
    check_d4_conditions,
    construct_d3,
    construct_d4,
    max_distance_bound,
    max_k_bound,
)
from data_classes.common_classes import BoundRequest, ConstructRequest

logger = logging.getLogger(__name__)

KINDS = ("d3", "d4")


class ConstructError(MdsError):
    def __init__(self, message: str, status_code: int = 400):
        super().__init__(message, status_code)


def validate_construct(body: ConstructRequest) -> List[str]:
    errors: List[str] = []
    if body.kind not in KINDS:
        errors.append(f"kind must be one of {', '.join(KINDS)}")
    if not isinstance(body.m, int) or not 1 <= body.m <= MAX_DEGREE:
        errors.append(f"m must be an integer in 1..{MAX_DEGREE}")
    if body.kind == "d3" and (body.beta is not None or body.c is not None):
        errors.append("beta and c only apply to the d4 construction")
    if isinstance(body.m, int) and 1 <= body.m <= MAX_DEGREE:
        size = 1 << body.m
        if body.beta is not None and (not isinstance(body.beta, int) or not 1 <= body.beta < size):
            errors.append(f"beta must be an integer in 1..{size - 1}")
        if body.c is not None and (not isinstance(body.c, int) or not 0 <= body.c < size):
            errors.append(f"c must be an integer in 0..{size - 1}")
    return errors


def handle_construct(body: ConstructRequest, verify: bool = True) -> Dict[str, Any]:
    errors = validate_construct(body)
    if errors:
        raise ConstructError(", ".join(errors), 400)
    try:
        field = default_field(body.m)
        if body.kind == "d3":
            code = construct_d3(field)
            conditions = None
        else:
            code = construct_d4(field, body.beta, body.c)
            conditions = check_d4_conditions(code).to_dict()
        profile = cdp_via_minors(code).to_dict() if verify else None
    except MdsError as e:
        raise ConstructError(e.message, e.status_code)

    logger.info(f"constructed {body.kind} code over GF(2^{body.m}) with n={code.n}")
    return {
        "kind": body.kind,
        "n": code.n,
        "code": code_to_text(code),
        "parity_check": render_parity_matrix(code),
        "profile": profile,
        "conditions": conditions,
    }


def validate_bound(body: BoundRequest) -> List[str]:
    errors: List[str] = []
    if not isinstance(body.m, int) or not 1 <= body.m <= MAX_DEGREE:
        errors.append(f"m must be an integer in 1..{MAX_DEGREE}")
    if (body.n is None) == (body.distance is None):
        errors.append("give exactly one of n or distance")
    return errors


def handle_bound(body: BoundRequest) -> Dict[str, Any]:
    errors = validate_bound(body)
    if errors:
        raise ConstructError(", ".join(errors), 400)
    try:
        field = default_field(body.m)
        if body.n is not None:
            return {"m": body.m, "n": body.n, "max_distance": max_distance_bound(field, body.n)}
        max_k = max_k_bound(field, body.distance)
        return {"m": body.m, "distance": body.distance, "max_k": max_k, "max_n": max_k + 1}
    except MdsError as e:
        raise ConstructError(e.message, e.status_code)
