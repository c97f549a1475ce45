"""
Rareness: the probability that uniformly random free coefficients give a
code whose column distances are MDS up to a given degree. Values are
kept as log2 since they reach 10^-400 for moderate fields.
"""
import logging
import math
from typing import List, Optional
from libs import config
from libs.gf import BadDegree, FieldSpec
from libs.cdp import BudgetExceeded
from libs.search import free_depths, search
from data_classes.common_classes import RarenessReport, SearchBudget, SearchMode, SearchStats

logger = logging.getLogger(__name__)


def _report(field: FieldSpec, n: int, D: int, stats: SearchStats, exact: bool) -> RarenessReport:
    """Per-depth conditionals as visit-weighted averages of |L| / (2^m - 1)."""
    scale = math.log2(field.order)
    depths = free_depths(n - 1, D)
    conditional: List[float] = []
    cumulative: List[float] = []
    samples: List[int] = []
    running = 0.0
    for d, depth in enumerate(depths):
        visits = stats.legal_visits[d]
        if visits == 0:
            break
        legal = stats.legal_sum[d]
        cond = math.log2(legal) - math.log2(visits) - scale if legal else -math.inf
        running += cond
        conditional.append(cond)
        cumulative.append(running)
        samples.append(visits)
        if not legal:
            break
    return RarenessReport(
        depths=depths[:len(conditional)],
        conditional_log2=conditional,
        cumulative_log2=cumulative,
        samples=samples,
        exact=exact,
    )


def rareness_exact(
    field: FieldSpec,
    n: int,
    D: int,
    max_nodes: Optional[int] = None,
    jobs: int = 1,
) -> RarenessReport:
    """Full traversal without symmetry filters; raises BudgetExceeded when it does not finish."""
    budget = SearchBudget(max_nodes if max_nodes is not None else config.SEARCH_MAX_NODES, config.SEARCH_MAX_SECONDS)
    result = search(
        field, n, D + 2, SearchMode.COMPLETE,
        budget=budget, symmetry=False, count=True, jobs=jobs, use_bound=False,
    )
    logger.info(f"exact rareness for n={n}, D={D} from {result.stats.nodes} nodes")
    return _report(field, n, D, result.stats, exact=True)


def rareness_estimate(
    field: FieldSpec,
    n: int,
    D: int,
    seed: int = 0,
    sample: Optional[int] = None,
    max_nodes: Optional[int] = None,
    jobs: int = 1,
) -> RarenessReport:
    """Probe the tree with a seeded per-depth subsample; sample=0 disables skipping."""
    sample = config.PROBE_SAMPLE if sample is None else sample
    max_nodes = config.PROBE_MAX_NODES if max_nodes is None else max_nodes
    mode = SearchMode.INCOMPLETE if sample else SearchMode.COMPLETE
    budget = SearchBudget(max_nodes, config.SEARCH_MAX_SECONDS)
    try:
        result = search(
            field, n, D + 2, mode, seed=seed, sample=sample or None,
            budget=budget, symmetry=False, count=True, jobs=jobs, use_bound=False,
        )
        stats = result.stats
    except BudgetExceeded as e:
        stats = e.result.stats
        logger.info(f"probe stopped at {stats.nodes} nodes")
    return _report(field, n, D, stats, exact=False)


def rareness_series(
    field: FieldSpec,
    n: int,
    D: int,
    seed: int = 0,
    max_nodes: Optional[int] = None,
    jobs: int = 1,
) -> RarenessReport:
    """Exact per-depth rareness where the full traversal fits the budget, an estimate otherwise."""
    try:
        return rareness_exact(field, n, D, max_nodes=max_nodes, jobs=jobs)
    except BudgetExceeded:
        logger.info("exact traversal over budget, falling back to a probe")
        return rareness_estimate(field, n, D, seed=seed, max_nodes=max_nodes, jobs=jobs)


def d4_construction_rareness(m: int) -> float:
    """log2 of 2^(m-1) (2^(m-1)-1)! / (2^m-1)^(2^m-3)."""
    if m < 2:
        raise BadDegree(f"the degree-2 construction needs m >= 2, got {m}")
    half = 2 ** (m - 1)
    q1 = 2 ** m - 1
    return (m - 1) + math.lgamma(half) / math.log(2) - (2 ** m - 3) * math.log2(q1)


def format_probability(log2_value: float, digits: int = 2) -> str:
    """Scientific notation for 2^log2_value without leaving the log domain."""
    if log2_value == -math.inf:
        return "0"
    log10_value = log2_value * math.log10(2)
    exponent = math.floor(log10_value)
    mantissa = 10 ** (log10_value - exponent)
    if round(mantissa, digits - 1) >= 10:
        mantissa /= 10
        exponent += 1
    return f"{mantissa:.{digits - 1}f}e{exponent}"
