import logging
from typing import Any, Dict, List, Optional
from libs.errors import MdsError
from libs.codec import code_from_text, code_to_text, render_parity_matrix
from libs.cdp import cdp_bruteforce, cdp_via_minors
from libs.tables import entry_code, is_heavy, load_tables, verify_entry
from data_classes.common_classes import VerifyRequest

logger = logging.getLogger(__name__)


class VerifyError(MdsError):
    def __init__(self, message: str, status_code: int = 400):
        super().__init__(message, status_code)


def validate_verify(body: VerifyRequest) -> List[str]:
    errors: List[str] = []
    if not body.code or not isinstance(body.code, str):
        errors.append("code is required")
    return errors


def handle_verify(body: VerifyRequest, jobs: int = 1) -> Dict[str, Any]:
    """Column distance profile of a code given in the code file format."""
    errors = validate_verify(body)
    if errors:
        raise VerifyError(", ".join(errors), 400)
    try:
        code = code_from_text(body.code)
        profile = cdp_via_minors(code, jobs=jobs)
    except MdsError as e:
        raise VerifyError(e.message, e.status_code)
    except Exception as e:
        raise VerifyError(str(e), 500)

    return {
        "verdict": "PASS" if profile.is_mds else "FAIL",
        "n": code.n,
        "m": code.field.m,
        "parity_check": render_parity_matrix(code),
        "profile": profile.to_dict(),
    }


def handle_profile(body: VerifyRequest, bruteforce: Optional[int] = None, jobs: int = 1) -> Dict[str, Any]:
    """Profile from minors, or column distances d_0..d_L by exhaustive encoding."""
    errors = validate_verify(body)
    if bruteforce is not None and bruteforce < 0:
        errors.append("bruteforce depth must be non-negative")
    if errors:
        raise VerifyError(", ".join(errors), 400)
    try:
        code = code_from_text(body.code)
        if bruteforce is None:
            profile = cdp_via_minors(code, jobs=jobs)
        else:
            profile = cdp_bruteforce(code, bruteforce, jobs=jobs)
    except MdsError as e:
        raise VerifyError(e.message, e.status_code)
    return profile.to_dict()


def handle_list_tables() -> List[Dict[str, Any]]:
    out = []
    for entry in load_tables():
        out.append({
            "label": entry.label(),
            "m": entry.m,
            "n": entry.n,
            "delta": entry.delta,
            "exact": entry.exact,
            "rareness": entry.rareness,
            "code": code_to_text(entry_code(entry)),
        })
    return out


def handle_verify_tables(slow: bool = False, jobs: int = 1) -> Dict[str, Any]:
    """Verify every bundled entry; entries over large fields only when `slow` is set."""
    results = []
    for entry in load_tables():
        if is_heavy(entry) and not slow:
            results.append({"label": entry.label(), "verdict": "SKIP"})
            continue
        try:
            passed, profile = verify_entry(entry, jobs=jobs)
        except MdsError as e:
            raise VerifyError(f"{entry.label()}: {e.message}", e.status_code)
        results.append({
            "label": entry.label(),
            "verdict": "PASS" if passed else "FAIL",
            "profile": profile.to_dict(),
        })
    failed = sum(1 for r in results if r["verdict"] == "FAIL")
    return {"status": "success" if failed == 0 else "failed", "failed": failed, "results": results}
