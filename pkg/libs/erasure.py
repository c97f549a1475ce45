"""
Streams of n-symbol blocks: systematic encoding, erasure decoding with a
sliding window, hybrid (deterministic prefix plus seeded random tail)
codes and a loss-channel simulator.

Symbols inside a block are addressed 1..n; positions 1..k carry
information and position n the parity.
"""
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union
import numpy as np
from libs import config
from libs.errors import MdsError
from libs.gf import FieldSpec
from libs.codec import code_from_coefficients
from data_classes.common_classes import (
    CodeSpec,
    ErasureTrace,
    LossKind,
    LossModel,
    SimulationStats,
    Stream,
)

logger = logging.getLogger(__name__)

Symbol = Tuple[int, int]


class HybridCode:
    """A fixed coefficient prefix followed by seeded random nonzero rows.

    Tail row i is drawn from default_rng((seed, i)), so any degree can be
    regenerated without the rows before it.
    """

    def __init__(self, prefix: CodeSpec, seed: int, degrees: int):
        self.prefix = prefix
        self.seed = seed
        self.degrees = degrees
        self._tail: Dict[int, Tuple[int, ...]] = {}

    @property
    def field(self) -> FieldSpec:
        return self.prefix.field

    @property
    def n(self) -> int:
        return self.prefix.n

    @property
    def k(self) -> int:
        return self.prefix.k

    @property
    def degree(self) -> int:
        return self.prefix.degree + self.degrees

    def row(self, i: int) -> Tuple[int, ...]:
        if i <= self.prefix.degree:
            return self.prefix.coeffs[i]
        if i not in self._tail:
            rng = np.random.default_rng((self.seed, i))
            self._tail[i] = tuple(int(v) for v in rng.integers(1, self.field.size, size=self.k))
        return self._tail[i]

    def coefficient(self, i: int, j: int) -> int:
        if i < 0 or i > self.degree:
            return 0
        return self.row(i)[j - 1]

    def to_code(self) -> CodeSpec:
        return code_from_coefficients(self.field, self.n, [self.row(i) for i in range(self.degree + 1)])


AnyCode = Union[CodeSpec, HybridCode]


def hybrid_extend(prefix: CodeSpec, seed: int, degrees: int) -> HybridCode:
    if degrees < 0:
        raise MdsError(f"cannot extend by {degrees} degrees", 400)
    return HybridCode(prefix, seed, degrees)


def encode_stream(code: AnyCode, info: Union[np.ndarray, Sequence[Sequence[int]]]) -> Stream:
    """Systematic encoding: block t is info_t followed by p_t = sum_i sum_j r_{i,j} info_{t-i,j}."""
    field = code.field
    info = np.asarray(info, dtype=np.int64).reshape(-1, code.k)
    T = info.shape[0]
    parity = np.zeros(T, dtype=np.int64)
    for i in range(min(code.degree, T - 1) + 1 if T else 0):
        for j in range(1, code.k + 1):
            r = code.coefficient(i, j)
            if r:
                parity[i:] ^= field.mul_table(r)[info[:T - i, j - 1]]
    blocks = np.hstack([info, parity.reshape(-1, 1)]).tolist()
    return Stream(code=code, blocks=blocks)


def erase(stream: Stream, positions: Iterable[Symbol]) -> Stream:
    blocks = [list(b) for b in stream.blocks]
    for t, j in positions:
        blocks[t][j - 1] = None
    return Stream(code=stream.code, blocks=blocks)


def impulse_pattern(code: AnyCode, j: int = 1) -> List[Symbol]:
    """Support of the codeword started by a single information symbol at (0, j)."""
    pattern = [(0, j)]
    pattern.extend((i, code.n) for i in range(code.degree + 1) if code.coefficient(i, j))
    return pattern


class SlidingWindowDecoder:
    """Incremental Gauss-Jordan elimination over the syndrome rows of a stream.

    Every live row owns a distinct pivot unknown that appears in no other
    row; an unknown is recovered once its row has no other unknown left.
    Unknowns `window` blocks old are abandoned.
    """

    def __init__(self, code: AnyCode, window: Optional[int] = None):
        self.code = code
        self.field = code.field
        self.window = code.degree + 2 + config.WINDOW_SLACK if window is None else window
        self.t = 0
        self.history: List[List[Optional[int]]] = []
        self.rows: Dict[Symbol, Tuple[Dict[Symbol, int], int]] = {}
        self.unknown: set = set()
        self.trace = ErasureTrace()

    def _value(self, symbol: Symbol) -> Optional[int]:
        t, j = symbol
        return self.history[t][j - 1]

    def _syndrome_row(self, t: int) -> Optional[Tuple[Dict[Symbol, int], int]]:
        code = self.code
        mul = self.field.mul
        coeffs: Dict[Symbol, int] = {}
        rhs = 0
        terms = [((t, code.n), 1)]
        for i in range(min(t, code.degree) + 1):
            for j in range(1, code.k + 1):
                r = code.coefficient(i, j)
                if r:
                    terms.append(((t - i, j), r))
        for symbol, r in terms:
            value = self._value(symbol)
            if value is not None:
                rhs ^= mul(r, value)
            elif symbol in self.trace.unrecovered:
                return None
            else:
                coeffs[symbol] = coeffs.get(symbol, 0) ^ r
        return {s: c for s, c in coeffs.items() if c}, rhs

    def _reduce(self, coeffs: Dict[Symbol, int], rhs: int) -> int:
        mul = self.field.mul
        for pivot in [s for s in coeffs if s in self.rows]:
            factor = coeffs.get(pivot, 0)
            if not factor:
                continue
            prow, prhs = self.rows[pivot]
            for s, c in prow.items():
                updated = coeffs.get(s, 0) ^ mul(factor, c)
                if updated:
                    coeffs[s] = updated
                else:
                    coeffs.pop(s, None)
            rhs ^= mul(factor, prhs)
        return rhs

    def _install(self, coeffs: Dict[Symbol, int], rhs: int) -> None:
        field = self.field
        mul = field.mul
        pivot = min(coeffs)
        scale = field.inv(coeffs[pivot])
        coeffs = {s: mul(scale, c) for s, c in coeffs.items()}
        rhs = mul(scale, rhs)
        for other, (orow, orhs) in self.rows.items():
            factor = orow.get(pivot, 0)
            if not factor:
                continue
            for s, c in coeffs.items():
                updated = orow.get(s, 0) ^ mul(factor, c)
                if updated:
                    orow[s] = updated
                else:
                    orow.pop(s, None)
            self.rows[other] = (orow, orhs ^ mul(factor, rhs))
        self.rows[pivot] = (coeffs, rhs)

    def _harvest(self) -> List[Tuple[Symbol, int]]:
        solved = []
        for pivot in [p for p, (row, _) in self.rows.items() if len(row) == 1]:
            _, rhs = self.rows.pop(pivot)
            self._commit(pivot, rhs)
            solved.append((pivot, rhs))
        return solved

    def _commit(self, symbol: Symbol, value: int) -> None:
        t, j = symbol
        self.history[t][j - 1] = value
        self.unknown.discard(symbol)
        self.trace.recovered_at[symbol] = self.t
        self.trace.values[symbol] = value

    def _abandon(self, symbol: Symbol) -> None:
        mul = self.field.mul
        self.unknown.discard(symbol)
        self.trace.unrecovered.add(symbol)
        if symbol in self.rows:
            del self.rows[symbol]
            return
        holders = [p for p, (row, _) in self.rows.items() if symbol in row]
        if not holders:
            return
        # eliminate the abandoned unknown with one row, then drop that row
        base = holders[0]
        brow, brhs = self.rows.pop(base)
        scale = self.field.inv(brow[symbol])
        for other in holders[1:]:
            orow, orhs = self.rows[other]
            factor = mul(orow[symbol], scale)
            for s, c in brow.items():
                updated = orow.get(s, 0) ^ mul(factor, c)
                if updated:
                    orow[s] = updated
                else:
                    orow.pop(s, None)
            self.rows[other] = (orow, orhs ^ mul(factor, brhs))

    def push(self, block: Sequence[Optional[int]]) -> List[Tuple[Symbol, int]]:
        """Consume the next received block; return the symbols recovered by it."""
        t = self.t
        self.history.append(list(block))
        for j, value in enumerate(block, start=1):
            if value is None:
                self.unknown.add((t, j))
                self.trace.erased.add((t, j))

        solved: List[Tuple[Symbol, int]] = []
        row = self._syndrome_row(t)
        if row is not None and row[0]:
            coeffs, rhs = row
            rhs = self._reduce(coeffs, rhs)
            if coeffs:
                self._install(coeffs, rhs)
                solved = self._harvest()
            elif rhs:
                logger.warning(f"inconsistent syndrome at block {t}")

        for symbol in sorted(s for s in self.unknown if t - s[0] + 1 >= self.window):
            self._abandon(symbol)
            solved.extend(self._harvest())
        self.t += 1
        return solved

    def finish(self) -> ErasureTrace:
        for symbol in sorted(self.unknown):
            self.trace.unrecovered.add(symbol)
        self.unknown.clear()
        self.rows.clear()
        return self.trace


def decode_erasures(stream: Stream, window: Optional[int] = None) -> ErasureTrace:
    decoder = SlidingWindowDecoder(stream.code, window)
    for block in stream.blocks:
        decoder.push(block)
    return decoder.finish()


# channel simulation

def loss_mask(model: LossModel, T: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Boolean (T, n) array, True where the symbol is lost."""
    if model.kind == LossKind.IID:
        mask = rng.random((T, n)) < model.rate
    else:
        # two-state Gilbert chain over the symbols in transmission order
        enter_bad = 1.0 / model.good
        leave_bad = 1.0 / model.bad
        draws = rng.random(T * n)
        lost = np.zeros(T * n, dtype=bool)
        bad = False
        for s in range(T * n):
            bad = draws[s] >= leave_bad if bad else draws[s] < enter_bad
            lost[s] = bad
        mask = lost.reshape(T, n)
    if model.parity_only:
        mask[:, :n - 1] = False
    return mask


def simulate(
    code: AnyCode,
    model: LossModel,
    blocks: int,
    seed: int = 0,
    window: Optional[int] = None,
) -> SimulationStats:
    if model.kind == LossKind.IID and not 0 <= model.rate <= 1:
        raise MdsError(f"loss rate must lie in [0, 1], got {model.rate}", 400)
    if model.kind == LossKind.BURST and (model.good < 1 or model.bad < 1):
        raise MdsError("mean run lengths must be at least 1", 400)

    rng = np.random.default_rng(seed)
    n, k = code.n, code.k
    info = rng.integers(0, code.field.size, size=(blocks, k))
    stream = encode_stream(code, info)
    mask = loss_mask(model, blocks, n, rng)
    received = erase(stream, [(int(t), int(j) + 1) for t, j in zip(*np.nonzero(mask))])

    trace = decode_erasures(received, window)
    for symbol, value in trace.values.items():
        t, j = symbol
        if stream.blocks[t][j - 1] != value:
            raise MdsError(f"decoder produced a wrong value at block {t}, position {j}", 500)

    info_mask = mask[:, :k]
    erased_info = [(int(t), int(j) + 1) for t, j in zip(*np.nonzero(info_mask))]
    delivered = int(info_mask.size - len(erased_info))
    recovered = [s for s in erased_info if s in trace.recovered_at]
    delays = np.concatenate([
        np.zeros(delivered, dtype=np.int64),
        np.array([trace.delay(s) for s in recovered], dtype=np.int64),
    ])
    if delays.size:
        p50, p95, p99 = (float(v) for v in np.percentile(delays, [50, 95, 99]))
        max_delay = int(delays.max())
    else:
        p50 = p95 = p99 = 0.0
        max_delay = 0

    stats = SimulationStats(
        seed=seed,
        model=model.describe(),
        blocks=blocks,
        info_symbols=int(info_mask.size),
        erased=int(mask.sum()),
        delivered=delivered,
        recovered=len(recovered),
        unrecovered=len(erased_info) - len(recovered),
        p50=p50,
        p95=p95,
        p99=p99,
        max_delay=max_delay,
    )
    logger.info(f"simulated {blocks} blocks: {stats.unrecovered} of {stats.info_symbols} info symbols lost")
    return stats
