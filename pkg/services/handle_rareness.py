import logging
import math
from typing import Any, Dict, List
from libs.errors import MdsError
from libs.gf import MAX_DEGREE, default_field
from libs.rareness import (
    d4_construction_rareness,
    format_probability,
    rareness_estimate,
    rareness_exact,
)
from data_classes.common_classes import RarenessReport, RarenessRequest

logger = logging.getLogger(__name__)


class RarenessError(MdsError):
    def __init__(self, message: str, status_code: int = 400):
        super().__init__(message, status_code)


def validate_rareness(body: RarenessRequest) -> List[str]:
    errors: List[str] = []
    if not isinstance(body.m, int) or not 1 <= body.m <= MAX_DEGREE:
        errors.append(f"m must be an integer in 1..{MAX_DEGREE}")
    if not isinstance(body.n, int) or body.n < 2:
        errors.append("n must be an integer >= 2")
    if not isinstance(body.degree, int) or body.degree < 1:
        errors.append("degree must be an integer >= 1")
    if body.max_nodes is not None and body.max_nodes < 1:
        errors.append("max_nodes must be positive")
    return errors


def compute_rareness(body: RarenessRequest) -> RarenessReport:
    errors = validate_rareness(body)
    if errors:
        raise RarenessError(", ".join(errors), 400)
    field = default_field(body.m)
    try:
        if body.exact:
            return rareness_exact(field, body.n, body.degree, max_nodes=body.max_nodes, jobs=body.jobs)
        return rareness_estimate(
            field, body.n, body.degree, seed=body.seed, max_nodes=body.max_nodes, jobs=body.jobs
        )
    except MdsError as e:
        raise RarenessError(e.message, e.status_code)


def handle_rareness(body: RarenessRequest) -> Dict[str, Any]:
    report = compute_rareness(body)
    out = report.to_dict()
    out["rareness"] = format_probability(report.log2)
    return out


def handle_rareness_d4(m: int) -> Dict[str, Any]:
    try:
        log2_value = d4_construction_rareness(m)
    except MdsError as e:
        raise RarenessError(e.message, e.status_code)
    return {
        "m": m,
        "log2": log2_value,
        "log10": log2_value * math.log10(2),
        "rareness": format_probability(log2_value),
    }


def report_csv(report: RarenessReport) -> str:
    lines = ["depth,conditional,cumulative,samples"]
    for row in report.rows():
        lines.append(f"{row['depth']},{row['conditional']:.6g},{row['cumulative']:.6g},{row['samples']}")
    return "\n".join(lines) + "\n"
