"""
Depth-first search over canonical coefficient sequences.

The degree-0 coefficients and r_{1,k} are fixed to 1; the free depths
follow the walk r_{1,k-1}, ..., r_{1,1}, r_{2,k}, ..., r_{D,1}. At each
depth every anchored minor is linear in the new coefficient, so its
forbidden value is a single root and the legal set is found without
trying values.
"""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple, Union
import numpy as np
from libs import config
from libs.errors import MdsError, UsageError
from libs.gf import FieldSpec, field_new
from libs.codec import code_from_coefficients
from libs.minors import MinorEvaluator, anchored_at, walk_position
from libs.cdp import BudgetExceeded, cdp_via_minors
from libs.construct import DistanceTooSmall, max_distance_bound
from libs.checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from data_classes.common_classes import (
    CodeSpec,
    DeltaReport,
    DeltaStatus,
    Depth,
    SearchBudget,
    SearchMode,
    SearchResult,
    SearchStats,
    SearchStatus,
)

logger = logging.getLogger(__name__)

Walk = Tuple[Tuple[int, ...], Tuple[int, ...]]


def free_depths(k: int, D: int) -> List[Depth]:
    return [Depth(p // k, k - p % k) for p in range(k + 1, (D + 1) * k)]


class SearchState:
    """A canonical coefficient prefix with incrementally cached minors."""

    def __init__(self, field: FieldSpec, n: int, D: int, symmetry: bool = True):
        self.field = field
        self.n = n
        self.k = n - 1
        self.D = D
        self.symmetry = symmetry
        self.depths = free_depths(self.k, D)
        self.offset = self.k + 1
        self.values = [0] * (self.k * (D + 1))
        for p in range(min(self.k + 1, len(self.values))):
            self.values[p] = 1
        self.evaluator = MinorEvaluator(field, self.k, self.values)
        self._groups: Dict[int, List[Walk]] = {}
        self._ordered = field.nonzero_by_log()

    def group(self, d: int) -> List[Walk]:
        """Anchored minors whose lower-left entry is the coefficient at depth d."""
        if d not in self._groups:
            depth = self.depths[d]
            self._groups[d] = anchored_at(self.k, depth.degree + 1, depth.position)
        return self._groups[d]

    def assign(self, d: int, value: int) -> None:
        p = self.offset + d
        self.values[p] = value
        self.evaluator.invalidate(p)

    def legal_values(self, d: int) -> List[int]:
        """Nonzero values at depth d keeping every anchored minor nonsingular, by ascending log."""
        roots = set()
        field = self.field
        for rows, cols in self.group(d):
            c1, c0 = self.evaluator.split(rows, cols)
            if c1 == 0:
                if c0 == 0:
                    return []
                continue
            roots.add(field.div(c0, c1))
        legal = [v for v in self._ordered if v not in roots]
        if self.symmetry:
            legal = [v for v in legal if self._canonical(d, v)]
        return legal

    def _canonical(self, d: int, value: int) -> bool:
        field = self.field
        k = self.k
        if k == 1:
            return d != 0 or field.is_coset_representative(field.log(value))
        depth = self.depths[d]
        if depth.degree != 1:
            return True
        j = depth.position
        if k >= 3 and j <= k - 2 and not value < self.values[walk_position(k, 1, j + 1)]:
            return False
        if j != 1:
            return True
        if k == 2:
            return field.is_coset_representative(field.log(value))
        degree_one = [self.values[walk_position(k, 1, s)] for s in range(2, k)] + [value]
        return self._orbit_minimal(degree_one)

    def _orbit_minimal(self, values: List[int]) -> bool:
        """True when the set of values is the least of its Frobenius images (by sorted logs)."""
        field = self.field
        key = sorted(field.log(v) for v in values)
        image = values
        for _ in range(field.m - 1):
            image = [field.square(v) for v in image]
            if sorted(field.log(v) for v in image) < key:
                return False
        return True

    def code(self, assignment: Sequence[int]) -> CodeSpec:
        values = list(self.values)
        for d, v in enumerate(assignment):
            values[self.offset + d] = v
        k = self.k
        rows = [
            tuple(values[walk_position(k, i, j)] for j in range(1, k + 1))
            for i in range(self.D + 1)
        ]
        return code_from_coefficients(self.field, self.n, rows)


class _Walker:
    """Iterative depth-first traversal with per-depth candidate lists and cursors."""

    def __init__(
        self,
        state: SearchState,
        stop_at_success: bool,
        sample: Optional[int],
        rng: np.random.Generator,
        budget: SearchBudget,
        root: Optional[List[int]] = None,
        checkpoint: Optional[Path] = None,
    ):
        self.state = state
        self.stop_at_success = stop_at_success
        self.sample = sample
        self.rng = rng
        self.budget = budget
        self.root = root
        self.checkpoint = checkpoint
        self.stats = SearchStats(free_depths=len(state.depths))
        self.last = len(state.depths) - 1
        self.cands: List[List[int]] = []
        self.cursors: List[int] = []
        self.found: Optional[List[int]] = None

    def candidates(self, d: int) -> List[int]:
        if d == 0 and self.root is not None:
            return list(self.root)
        legal = self.state.legal_values(d)
        self.stats.legal_sum[d] += len(legal)
        self.stats.legal_visits[d] += 1
        if self.sample is not None and len(legal) > self.sample:
            picks = self.rng.choice(len(legal), size=self.sample, replace=False)
            legal = [legal[i] for i in sorted(picks)]
        return legal

    def assignment(self, d: int) -> List[int]:
        return [self.cands[i][self.cursors[i] - 1] for i in range(d + 1)]

    def _passed(self, d: int, prefix: List[int], count: int = 1) -> None:
        st = self.stats
        st.nodes += count
        st.passed[d] += count
        if d > st.deepest:
            st.deepest = d
            st.deepest_assignment = prefix
        if config.PROGRESS_EVERY and st.nodes % config.PROGRESS_EVERY < count:
            logger.info(f"{st.nodes} nodes, deepest {self.state.depths[st.deepest].label()}")

    def _over_budget(self, started: float) -> bool:
        st = self.stats
        if self.budget.max_nodes is not None and st.nodes >= self.budget.max_nodes:
            return True
        if self.budget.max_seconds is not None and time.monotonic() - started >= self.budget.max_seconds:
            return True
        return False

    def run(self) -> SearchStatus:
        state = self.state
        st = self.stats
        started = time.monotonic() - st.elapsed
        if not self.cands:
            self.cands.append(self.candidates(0))
            self.cursors.append(0)
        next_checkpoint = st.nodes + config.CHECKPOINT_EVERY

        d = len(self.cands) - 1
        status = None
        while d >= 0:
            if self.cursors[d] >= len(self.cands[d]):
                self.cands.pop()
                self.cursors.pop()
                d -= 1
                continue
            if self._over_budget(started):
                status = SearchStatus.BUDGET
                break
            if self.checkpoint is not None and st.nodes >= next_checkpoint:
                st.elapsed = time.monotonic() - started
                self.save()
                next_checkpoint = st.nodes + config.CHECKPOINT_EVERY

            v = self.cands[d][self.cursors[d]]
            self.cursors[d] += 1
            state.assign(d, v)
            self._passed(d, self.assignment(d))
            if d == self.last:
                if self.found is None:
                    self.found = self.assignment(d)
                if self.stop_at_success:
                    status = SearchStatus.SUCCESS
                    break
                continue

            nxt = self.candidates(d + 1)
            self.cands.append(nxt)
            self.cursors.append(0)
            d += 1
            if d == self.last and not self.stop_at_success and nxt:
                # every legal value at the final depth completes a code
                prefix = self.assignment(d - 1) + [nxt[0]]
                if self.found is None:
                    self.found = prefix
                self._passed(d, prefix, len(nxt))
                self.cursors[d] = len(nxt)

        st.elapsed = time.monotonic() - started
        if status is None:
            status = SearchStatus.SUCCESS if self.found is not None else SearchStatus.INFEASIBLE
        if status == SearchStatus.BUDGET and self.checkpoint is not None:
            self.save()
        return status

    # checkpoints

    def snapshot(self) -> Dict[str, Any]:
        state = self.state
        stats = self.stats.to_dict()
        stats["elapsed"] = self.stats.elapsed
        return {
            "m": state.field.m,
            "poly_mask": state.field.poly_mask,
            "n": state.n,
            "degree": state.D,
            "stop_at_success": self.stop_at_success,
            "sample": self.sample,
            "symmetry": state.symmetry,
            "candidates": self.cands,
            "cursors": self.cursors,
            "found": self.found,
            "stats": stats,
            "rng": self.rng.bit_generator.state,
        }

    def save(self) -> None:
        save_checkpoint(self.checkpoint, self.snapshot())

    def restore(self, payload: Dict[str, Any]) -> None:
        state = self.state
        expected = {
            "m": state.field.m,
            "poly_mask": state.field.poly_mask,
            "n": state.n,
            "degree": state.D,
            "stop_at_success": self.stop_at_success,
            "sample": self.sample,
            "symmetry": state.symmetry,
        }
        for key, value in expected.items():
            if payload.get(key) != value:
                raise CheckpointError(
                    f"checkpoint was written for {key}={payload.get(key)}, this search has {value}"
                )
        self.cands = [list(c) for c in payload["candidates"]]
        self.cursors = list(payload["cursors"])
        self.found = payload["found"]
        self.stats = SearchStats.from_dict(payload["stats"])
        self.rng.bit_generator.state = payload["rng"]
        for d in range(len(self.cands) - 1):
            state.assign(d, self.cands[d][self.cursors[d] - 1])
        logger.info(f"resumed at {self.stats.nodes} nodes, {len(self.cands)} depths on the stack")


def achieved_distance(k: int, deepest: int) -> int:
    """Free distance certified by a prefix reaching free depth `deepest`."""
    return (deepest + 2) // k + 2


def _run_share(
    field: FieldSpec,
    n: int,
    D: int,
    symmetry: bool,
    stop_at_success: bool,
    sample: Optional[int],
    seed: np.random.SeedSequence,
    budget: SearchBudget,
    root: List[int],
) -> Tuple[SearchStatus, Optional[List[int]], SearchStats]:
    state = SearchState(field, n, D, symmetry)
    walker = _Walker(state, stop_at_success, sample, np.random.default_rng(seed), budget, root=root)
    status = walker.run()
    return status, walker.found, walker.stats


def _parallel(
    state: SearchState,
    stop_at_success: bool,
    sample: Optional[int],
    seed: int,
    budget: SearchBudget,
    jobs: int,
) -> Tuple[SearchStatus, Optional[List[int]], SearchStats]:
    root_walker = _Walker(state, stop_at_success, sample, np.random.default_rng(seed), budget)
    root = root_walker.candidates(0)
    stats = root_walker.stats
    if not root:
        return SearchStatus.INFEASIBLE, None, stats

    size = math.ceil(len(root) / jobs)
    shares = [root[i:i + size] for i in range(0, len(root), size)]
    seeds = np.random.SeedSequence(seed).spawn(len(shares))
    share_budget = SearchBudget(
        max_nodes=None if budget.max_nodes is None else max(1, budget.max_nodes // len(shares)),
        max_seconds=budget.max_seconds,
    )
    logger.info(f"splitting {len(root)} first-depth values into {len(shares)} shares")

    outcomes = []
    pool = ProcessPoolExecutor(max_workers=jobs)
    try:
        futures = [
            pool.submit(_run_share, state.field, state.n, state.D, state.symmetry,
                        stop_at_success, sample, s, share_budget, share)
            for s, share in zip(seeds, shares)
        ]
        for future in futures:
            outcome = future.result()
            outcomes.append(outcome)
            if stop_at_success and outcome[0] == SearchStatus.SUCCESS:
                break
    finally:
        pool.shutdown(wait=True, cancel_futures=True)

    found = None
    status = SearchStatus.INFEASIBLE
    for share_status, share_found, share_stats in outcomes:
        stats.merge(share_stats)
        if found is None and share_found is not None:
            found = share_found
        if share_status == SearchStatus.BUDGET and status != SearchStatus.SUCCESS:
            status = SearchStatus.BUDGET
    if found is not None and (stop_at_success or status != SearchStatus.BUDGET):
        status = SearchStatus.SUCCESS
    return status, found, stats


def search(
    field: FieldSpec,
    n: int,
    target: int,
    mode: SearchMode = SearchMode.COMPLETE,
    seed: int = 0,
    sample: Optional[int] = None,
    budget: Optional[SearchBudget] = None,
    symmetry: bool = True,
    count: bool = False,
    jobs: int = 1,
    checkpoint: Optional[Union[str, Path]] = None,
    resume: bool = False,
    use_bound: bool = True,
) -> SearchResult:
    """Look for a canonical code of degree target-2 whose column distances are all MDS.

    `count` keeps walking after a success so the statistics cover the
    whole (or, with sampling, the probed) tree. In incomplete mode each
    depth keeps a seeded random subsample of `sample` legal values.
    """
    if n < 2:
        raise UsageError(f"block length must be at least 2, got {n}")
    if target < 3:
        raise DistanceTooSmall(f"target distance must be at least 3, got {target}")
    if budget is None:
        budget = SearchBudget(config.SEARCH_MAX_NODES, config.SEARCH_MAX_SECONDS)
    if mode == SearchMode.INCOMPLETE and sample is None:
        sample = config.PROBE_SAMPLE
    if mode == SearchMode.COMPLETE:
        sample = None
    complete = sample is None

    D = target - 2
    state = SearchState(field, n, D, symmetry)
    stats = SearchStats(free_depths=len(state.depths))

    bound = max_distance_bound(field, n)
    if use_bound and target > bound:
        logger.info(f"distance {target} exceeds the bound {bound} for n={n}")
        delta = min(target - 1, achieved_distance(state.k, -1))
        return SearchResult(None, delta, target, SearchStatus.INFEASIBLE, True, stats)
    if not state.depths:
        code = state.code([])
        return SearchResult(code, target, target, SearchStatus.SUCCESS, complete, stats)

    stop_at_success = not count
    if jobs > 1 and checkpoint is None:
        status, found, stats = _parallel(state, stop_at_success, sample, seed, budget, jobs)
    else:
        if jobs > 1:
            logger.warning("checkpointed searches run on a single job")
        path = Path(checkpoint) if checkpoint is not None else None
        walker = _Walker(state, stop_at_success, sample, np.random.default_rng(seed), budget, checkpoint=path)
        if resume:
            if path is None:
                raise UsageError("--resume needs a checkpoint path")
            walker.restore(load_checkpoint(path))
        status = walker.run()
        found, stats = walker.found, walker.stats

    code = state.code(found) if found is not None else None
    if code is not None:
        profile = cdp_via_minors(code)
        if profile.mds_depth != D:
            raise MdsError(f"search emitted a code failing at depth {profile.mds_depth + 1}", 500)

    success = status == SearchStatus.SUCCESS
    delta = target if success else min(target - 1, achieved_distance(state.k, stats.deepest))
    result = SearchResult(code, delta, target, status, complete and status != SearchStatus.BUDGET, stats)
    logger.info(f"search n={n} target={target}: {status.value} after {stats.nodes} nodes")
    if status == SearchStatus.BUDGET:
        raise BudgetExceeded(
            f"budget exhausted after {stats.nodes} nodes; deepest depth {stats.deepest}", result
        )
    return result


def establish_delta(
    field: FieldSpec,
    n: int,
    budget: Optional[SearchBudget] = None,
    mode: SearchMode = SearchMode.COMPLETE,
    seed: int = 0,
    jobs: int = 1,
) -> DeltaReport:
    """Raise the target distance until a search fails; exact when that failure was exhaustive."""
    bound = max_distance_bound(field, n)
    k = n - 1
    code = code_from_coefficients(field, n, [tuple([1] * k)])
    delta = 2
    for target in range(3, bound + 1):
        try:
            result = search(field, n, target, mode, seed=seed, budget=budget, jobs=jobs)
        except BudgetExceeded as e:
            logger.info(f"n={n}: distance {target} undecided within budget ({e.message})")
            return DeltaReport(delta, DeltaStatus.LOWER_BOUND, code)
        if result.success:
            delta, code = target, result.code
            continue
        status = DeltaStatus.EXACT if result.complete else DeltaStatus.LOWER_BOUND
        return DeltaReport(delta, status, code)
    return DeltaReport(delta, DeltaStatus.EXACT, code)


def legal_values(field: FieldSpec, n: int, assigned: Sequence[int], symmetry: bool = False) -> List[int]:
    """Legal set at the free depth following the given prefix of free coefficients."""
    k = n - 1
    depth = free_depths(k, len(assigned) // k + 2)[len(assigned)]
    state = SearchState(field, n, depth.degree, symmetry)
    for d, v in enumerate(assigned):
        state.assign(d, v)
    return state.legal_values(len(assigned))


def enumerate_prefixes(field: FieldSpec, n: int, D: int, symmetry: bool = True) -> List[Set[Tuple[int, ...]]]:
    """Surviving free-coefficient prefixes at each depth of a degree-D search."""
    state = SearchState(field, n, D, symmetry)
    levels: List[Set[Tuple[int, ...]]] = [set() for _ in state.depths]

    def visit(d: int, prefix: Tuple[int, ...]) -> None:
        for v in state.legal_values(d):
            state.assign(d, v)
            levels[d].add(prefix + (v,))
            if d + 1 < len(levels):
                visit(d + 1, prefix + (v,))

    if levels:
        visit(0, ())
    return levels


def field_from_checkpoint(path: Union[str, Path]) -> Tuple[FieldSpec, int, int]:
    """(field, n, target) a checkpoint was written for."""
    payload = load_checkpoint(path)
    return field_new(payload["m"], payload["poly_mask"]), payload["n"], payload["degree"] + 2
