import logging
from typing import Any, Dict, List, Optional
from libs.errors import MdsError
from libs.gf import MAX_DEGREE, default_field
from libs.codec import code_to_log_rows, code_to_text
from libs.cdp import BudgetExceeded
from libs.search import establish_delta, search
from data_classes.common_classes import SearchBudget, SearchMode, SearchRequest, SearchResult

logger = logging.getLogger(__name__)


class SearchRequestError(MdsError):
    def __init__(self, message: str, status_code: int = 400):
        super().__init__(message, status_code)


def validate_search(body: SearchRequest) -> List[str]:
    errors: List[str] = []
    if not isinstance(body.m, int) or not 1 <= body.m <= MAX_DEGREE:
        errors.append(f"m must be an integer in 1..{MAX_DEGREE}")
    if not isinstance(body.n, int) or body.n < 2:
        errors.append("n must be an integer >= 2")
    if not isinstance(body.target, int) or body.target < 3:
        errors.append("target must be an integer >= 3")
    if body.max_nodes is not None and body.max_nodes < 1:
        errors.append("max_nodes must be positive")
    if body.jobs < 1:
        errors.append("jobs must be positive")
    if body.resume and not body.checkpoint:
        errors.append("resume needs a checkpoint path")
    return errors


def _budget(body: SearchRequest) -> Optional[SearchBudget]:
    if body.max_nodes is None and body.max_seconds is None:
        return None
    return SearchBudget(body.max_nodes, body.max_seconds)


def _result_dict(result: SearchResult) -> Dict[str, Any]:
    out = result.to_dict()
    if result.code is not None:
        out["code"] = code_to_text(result.code)
        out["log_rows"] = code_to_log_rows(result.code)
    else:
        out["code"] = None
        out["deepest_assignment"] = result.stats.deepest_assignment
    return out


def handle_search(body: SearchRequest) -> Dict[str, Any]:
    errors = validate_search(body)
    if errors:
        raise SearchRequestError(", ".join(errors), 400)
    try:
        result = search(
            default_field(body.m),
            body.n,
            body.target,
            body.mode,
            seed=body.seed,
            budget=_budget(body),
            jobs=body.jobs,
            checkpoint=body.checkpoint,
            resume=body.resume,
        )
    except BudgetExceeded as e:
        logger.info(f"search stopped on budget: {e.message}")
        return _result_dict(e.result)
    except MdsError as e:
        raise SearchRequestError(e.message, e.status_code)
    return _result_dict(result)


def handle_delta(body: SearchRequest) -> Dict[str, Any]:
    """Largest distance reached for (m, n); body.target is ignored."""
    errors = [e for e in validate_search(body) if not e.startswith("target")]
    if errors:
        raise SearchRequestError(", ".join(errors), 400)
    try:
        report = establish_delta(
            default_field(body.m), body.n, budget=_budget(body), mode=body.mode,
            seed=body.seed, jobs=body.jobs,
        )
    except MdsError as e:
        raise SearchRequestError(e.message, e.status_code)
    return {
        "m": body.m,
        "n": body.n,
        "delta": report.delta,
        "status": report.status.value,
        "code": code_to_text(report.code) if report.code is not None and report.code.degree > 0 else None,
    }


def parse_mode(value: str) -> SearchMode:
    try:
        return SearchMode(value)
    except ValueError:
        raise SearchRequestError(f"mode must be one of {', '.join(m.value for m in SearchMode)}", 400)
