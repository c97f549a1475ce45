import logging
from typing import Any, Dict, List
from libs.errors import MdsError
from libs.codec import code_from_text
from libs.erasure import simulate
from data_classes.common_classes import LossKind, LossModel, SimulateRequest, SimulationStats

logger = logging.getLogger(__name__)

CSV_HEADER = "seed,model,blocks,delivered,recovered,unrecovered,p50,p95,p99,max"


class SimulateError(MdsError):
    def __init__(self, message: str, status_code: int = 400):
        super().__init__(message, status_code)


def validate_simulate(body: SimulateRequest) -> List[str]:
    errors: List[str] = []
    if not body.code or not isinstance(body.code, str):
        errors.append("code is required")
    if (body.loss_rate is None) == (body.burst is None):
        errors.append("give exactly one of loss_rate or burst")
    if body.loss_rate is not None and not 0 <= body.loss_rate <= 1:
        errors.append("loss_rate must lie in [0, 1]")
    if body.burst is not None and (len(body.burst) != 2 or min(body.burst) < 1):
        errors.append("burst must be [good, bad] mean run lengths, each >= 1")
    if not isinstance(body.blocks, int) or body.blocks < 1:
        errors.append("blocks must be a positive integer")
    if body.window is not None and body.window < 1:
        errors.append("window must be positive")
    return errors


def loss_model(body: SimulateRequest) -> LossModel:
    if body.burst is not None:
        good, bad = body.burst
        return LossModel(LossKind.BURST, good=float(good), bad=float(bad), parity_only=body.parity_only)
    return LossModel(LossKind.IID, rate=float(body.loss_rate), parity_only=body.parity_only)


def run_simulation(body: SimulateRequest) -> SimulationStats:
    errors = validate_simulate(body)
    if errors:
        raise SimulateError(", ".join(errors), 400)
    try:
        code = code_from_text(body.code)
        return simulate(code, loss_model(body), body.blocks, seed=body.seed, window=body.window)
    except MdsError as e:
        raise SimulateError(e.message, e.status_code)


def handle_simulate(body: SimulateRequest) -> Dict[str, Any]:
    stats = run_simulation(body)
    out = stats.to_dict()
    out["unrecovered_fraction"] = stats.unrecovered_fraction
    return out


def stats_csv_row(stats: SimulationStats) -> str:
    return ",".join(str(v) for v in stats.to_dict().values())
