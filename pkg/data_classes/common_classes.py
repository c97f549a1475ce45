import math
from dataclasses import dataclass, field
from typing import List, Dict, Any, Optional, Tuple, Set
from enum import Enum
import numpy as np
from libs.gf import FieldSpec


@dataclass(frozen=True)
class CodeSpec:
    """Systematic rate (n-1)/n code given by its coefficients r_{i,j}.

    coeffs[i][j - 1] holds r_{i,j} for i = 0..D and j = 1..k (j ascending).
    """
    field: FieldSpec
    n: int
    coeffs: Tuple[Tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return self.n - 1

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def free_distance_target(self) -> int:
        return self.degree + 2

    def coefficient(self, i: int, j: int) -> int:
        if i < 0 or i > self.degree:
            return 0
        return self.coeffs[i][j - 1]

    def is_canonical(self) -> bool:
        if any(v != 1 for v in self.coeffs[0]):
            return False
        return self.degree < 1 or self.coeffs[1][-1] == 1


@dataclass
class TruncMatrix:
    rows: int
    cols: int
    entries: np.ndarray
    field: Optional[FieldSpec] = None

    def __getitem__(self, index):
        return self.entries[index]

    def to_lists(self) -> List[List[int]]:
        return self.entries.tolist()


@dataclass(frozen=True)
class ProperSubmatrix:
    """Row and column indices (1-based, strictly increasing) of a proper submatrix."""
    row_idx: Tuple[int, ...]
    col_idx: Tuple[int, ...]
    anchor: int = field(default=0, compare=False)

    @property
    def size(self) -> int:
        return len(self.row_idx)

    def to_dict(self) -> Dict[str, Any]:
        return {"rows": list(self.row_idx), "cols": list(self.col_idx)}


@dataclass
class SuperregularVerdict:
    is_superregular: bool
    witness: Optional[ProperSubmatrix] = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.is_superregular


@dataclass
class Profile:
    distances: List[Optional[int]]
    free_distance: Optional[int]
    mds_depth: int
    degree: int
    witness: Optional[ProperSubmatrix] = None

    @property
    def is_mds(self) -> bool:
        return self.mds_depth == self.degree

    def to_dict(self) -> Dict[str, Any]:
        return {
            "distances": self.distances,
            "free_distance": self.free_distance,
            "mds_depth": self.mds_depth,
            "degree": self.degree,
            "is_mds": self.is_mds,
            "witness": self.witness.to_dict() if self.witness else None,
        }


@dataclass
class D4Condition:
    name: str
    holds: bool
    witness: Optional[Tuple[int, ...]] = None


@dataclass
class D4Report:
    conditions: List[D4Condition]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.conditions)

    def __getitem__(self, name: str) -> D4Condition:
        for condition in self.conditions:
            if condition.name == name:
                return condition
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            c.name: {"holds": c.holds, "witness": list(c.witness) if c.witness else None}
            for c in self.conditions
        }


@dataclass(frozen=True, order=True)
class Depth:
    """A coefficient r_{degree, position} in the search walk."""
    degree: int
    position: int

    def label(self) -> str:
        return f"r[{self.degree},{self.position}]"


class SearchMode(Enum):
    COMPLETE = "complete"
    INCOMPLETE = "incomplete"


class SearchStatus(Enum):
    SUCCESS = "success"
    INFEASIBLE = "infeasible"
    BUDGET = "budget"


class DeltaStatus(Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower_bound"


@dataclass
class SearchBudget:
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None


@dataclass
class SearchStats:
    free_depths: int
    nodes: int = 0
    deepest: int = -1
    deepest_assignment: List[int] = field(default_factory=list)
    legal_sum: List[int] = field(default_factory=list)
    legal_visits: List[int] = field(default_factory=list)
    passed: List[int] = field(default_factory=list)
    elapsed: float = 0.0

    def __post_init__(self):
        for name in ("legal_sum", "legal_visits", "passed"):
            if not getattr(self, name):
                setattr(self, name, [0] * self.free_depths)

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        if other.deepest > self.deepest:
            self.deepest = other.deepest
            self.deepest_assignment = list(other.deepest_assignment)
        for d in range(self.free_depths):
            self.legal_sum[d] += other.legal_sum[d]
            self.legal_visits[d] += other.legal_visits[d]
            self.passed[d] += other.passed[d]
        self.elapsed = max(self.elapsed, other.elapsed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes": self.nodes,
            "deepest": self.deepest,
            "deepest_assignment": self.deepest_assignment,
            "legal_sum": self.legal_sum,
            "legal_visits": self.legal_visits,
            "passed": self.passed,
            "elapsed": round(self.elapsed, 3),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SearchStats":
        return cls(
            free_depths=len(data["passed"]),
            nodes=data["nodes"],
            deepest=data["deepest"],
            deepest_assignment=list(data["deepest_assignment"]),
            legal_sum=list(data["legal_sum"]),
            legal_visits=list(data["legal_visits"]),
            passed=list(data["passed"]),
            elapsed=data.get("elapsed", 0.0),
        )


@dataclass
class SearchResult:
    code: Optional[CodeSpec]
    delta: int
    target: int
    status: SearchStatus
    complete: bool
    stats: SearchStats

    @property
    def success(self) -> bool:
        return self.status == SearchStatus.SUCCESS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "delta": self.delta,
            "target": self.target,
            "complete": self.complete,
            "stats": self.stats.to_dict(),
        }


@dataclass
class DeltaReport:
    delta: int
    status: DeltaStatus
    code: Optional[CodeSpec] = None

    @property
    def exact(self) -> bool:
        return self.status == DeltaStatus.EXACT


@dataclass
class RarenessReport:
    depths: List[Depth]
    conditional_log2: List[float]
    cumulative_log2: List[float]
    samples: List[int]
    exact: bool

    @property
    def log2(self) -> float:
        return self.cumulative_log2[-1] if self.cumulative_log2 else 0.0

    @property
    def log10(self) -> float:
        return self.log2 * math.log10(2)

    @property
    def probability(self) -> float:
        return 2.0 ** self.log2 if self.log2 > -1074 else 0.0

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {
                "depth": depth.label(),
                "conditional": 2.0 ** cond,
                "cumulative": 2.0 ** cum,
                "samples": samples,
            }
            for depth, cond, cum, samples in zip(
                self.depths, self.conditional_log2, self.cumulative_log2, self.samples
            )
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "exact": self.exact,
            "log2": self.log2 if math.isfinite(self.log2) else None,
            "probability": self.probability,
            "depths": self.rows(),
        }


@dataclass
class Stream:
    code: Any
    blocks: List[List[Optional[int]]]

    @property
    def length(self) -> int:
        return len(self.blocks)


@dataclass
class ErasureTrace:
    erased: Set[Tuple[int, int]] = field(default_factory=set)
    recovered_at: Dict[Tuple[int, int], int] = field(default_factory=dict)
    unrecovered: Set[Tuple[int, int]] = field(default_factory=set)
    values: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def delay(self, symbol: Tuple[int, int]) -> int:
        return self.recovered_at[symbol] - symbol[0]

    @property
    def max_delay(self) -> int:
        return max((self.delay(s) for s in self.recovered_at), default=0)


class LossKind(Enum):
    IID = "iid"
    BURST = "burst"


@dataclass
class LossModel:
    kind: LossKind = LossKind.IID
    rate: float = 0.0
    good: float = 0.0
    bad: float = 0.0
    parity_only: bool = False

    def describe(self) -> str:
        if self.kind == LossKind.IID:
            return f"p={self.rate}"
        return f"g={self.good};b={self.bad}"


@dataclass
class SimulationStats:
    seed: int
    model: str
    blocks: int
    info_symbols: int
    erased: int
    delivered: int
    recovered: int
    unrecovered: int
    p50: float
    p95: float
    p99: float
    max_delay: int

    @property
    def unrecovered_fraction(self) -> float:
        return self.unrecovered / max(1, self.info_symbols)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "model": self.model,
            "blocks": self.blocks,
            "delivered": self.delivered,
            "recovered": self.recovered,
            "unrecovered": self.unrecovered,
            "p50": self.p50,
            "p95": self.p95,
            "p99": self.p99,
            "max": self.max_delay,
        }


@dataclass
class TableEntry:
    m: int
    n: int
    delta: int
    exact: bool
    log_rows: List[List[int]]
    rareness: str

    def label(self) -> str:
        sign = "=" if self.exact else ">="
        return f"GF(2^{self.m}) n={self.n} delta{sign}{self.delta}"


# request payloads shared by the CLI and the HTTP API

@dataclass
class VerifyRequest:
    code: str


@dataclass
class ConstructRequest:
    kind: str
    m: int
    beta: Optional[int] = None
    c: Optional[int] = None


@dataclass
class BoundRequest:
    m: int
    n: Optional[int] = None
    distance: Optional[int] = None


@dataclass
class SearchRequest:
    m: int
    n: int
    target: int
    mode: SearchMode = SearchMode.COMPLETE
    seed: int = 0
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None
    jobs: int = 1
    checkpoint: Optional[str] = None
    resume: bool = False


@dataclass
class RarenessRequest:
    m: int
    n: int
    degree: int
    exact: bool = True
    seed: int = 0
    max_nodes: Optional[int] = None
    jobs: int = 1


@dataclass
class SimulateRequest:
    code: str
    loss_rate: Optional[float] = None
    burst: Optional[List[float]] = None
    blocks: int = 1000
    seed: int = 0
    window: Optional[int] = None
    parity_only: bool = False
