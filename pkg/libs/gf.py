"""
Table-driven arithmetic in GF(2^m), 1 <= m <= 16.

Elements are plain integers in polynomial (bit-vector) form; logarithms
are a view used for multiplication and for the log-based table format.
"""
from functools import lru_cache
from typing import Iterable, List, Sequence, Union
import numpy as np
from libs.errors import MdsError

FE = int

MAX_DEGREE = 16

# Defaults follow the field captions of the published code tables for m = 3..14.
DEFAULT_POLYNOMIALS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000010011001,
    13: 0b10000000011011,
    14: 0b101100000000011,
    15: 0b1000000000000011,
    16: 0b10000000000101101,
}


class FieldError(MdsError):
    pass


class BadDegree(FieldError):
    pass


class NotPrimitive(FieldError):
    pass


class ZeroInverse(FieldError):
    pass


class LogOfZero(FieldError):
    pass


class FieldSpec:
    """GF(2^m) defined by a primitive polynomial, with log/antilog tables."""

    def __init__(self, m: int, poly_mask: int):
        if not isinstance(m, int) or m < 1 or m > MAX_DEGREE:
            raise BadDegree(f"field degree must be in 1..{MAX_DEGREE}, got {m}")
        if poly_mask >> m != 1:
            raise BadDegree(f"polynomial {bin(poly_mask)} does not have degree {m}")
        if not poly_mask & 1:
            raise NotPrimitive(f"polynomial {bin(poly_mask)} has zero constant term")

        self.m = m
        self.poly_mask = poly_mask
        self.size = 1 << m
        self.order = self.size - 1

        exp = [0] * (2 * self.order)
        log = [-1] * self.size
        x = 1
        for i in range(self.order):
            if i > 0 and x == 1:
                raise NotPrimitive(
                    f"polynomial {bin(poly_mask)} is not primitive: alpha has order {i}"
                )
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.size:
                x ^= poly_mask
        if x != 1:
            raise NotPrimitive(f"polynomial {bin(poly_mask)} is not primitive")
        exp[self.order:] = exp[:self.order]

        self._exp = exp
        self._log = log
        self.exp_table = np.array(exp[:self.order], dtype=np.int64)
        self.log_table = np.array([max(v, 0) for v in log], dtype=np.int64)
        self._exp2 = np.array(exp, dtype=np.int64)

    def __reduce__(self):
        return (FieldSpec, (self.m, self.poly_mask))

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and (self.m, self.poly_mask) == (other.m, other.poly_mask)

    def __hash__(self) -> int:
        return hash((self.m, self.poly_mask))

    def __repr__(self) -> str:
        return f"FieldSpec(m={self.m}, poly_mask={bin(self.poly_mask)})"

    # scalar arithmetic

    def add(self, a: FE, b: FE) -> FE:
        return a ^ b

    def mul(self, a: FE, b: FE) -> FE:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: FE) -> FE:
        if a == 0:
            raise ZeroInverse("zero has no multiplicative inverse")
        return self._exp[(self.order - self._log[a]) % self.order]

    def div(self, a: FE, b: FE) -> FE:
        if b == 0:
            raise ZeroInverse("division by zero")
        if a == 0:
            return 0
        return self._exp[self._log[a] - self._log[b] + self.order]

    def pow(self, a: FE, e: int) -> FE:
        if a == 0:
            if e < 0:
                raise ZeroInverse("zero has no multiplicative inverse")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self.order]

    def log(self, a: FE) -> int:
        if a == 0:
            raise LogOfZero("logarithm of zero is undefined")
        return self._log[a]

    def exp(self, i: int) -> FE:
        return self._exp[i % self.order]

    def square(self, a: FE) -> FE:
        return self.mul(a, a)

    def trace(self, a: FE) -> int:
        """Absolute trace Tr(a) = a + a^2 + ... + a^(2^(m-1)), which lies in GF(2)."""
        total = 0
        x = a
        for _ in range(self.m):
            total ^= x
            x = self.square(x)
        return total

    # exponent structure

    def cyclotomic_coset(self, e: int) -> List[int]:
        coset = []
        e %= self.order
        while e not in coset:
            coset.append(e)
            e = (2 * e) % self.order
        return sorted(coset)

    def coset_representatives(self) -> List[int]:
        return list(_coset_representatives(self.order))

    def is_coset_representative(self, e: int) -> bool:
        return e % self.order == self.cyclotomic_coset(e)[0]

    # element listings

    def elements(self) -> range:
        return range(self.size)

    def nonzero_by_log(self) -> List[FE]:
        return list(self._exp[:self.order])

    # vectorized helpers

    def mul_array(self, a: Union[np.ndarray, int], b: Union[np.ndarray, int]) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp2[self.log_table[a] + self.log_table[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def mul_table(self, c: FE) -> np.ndarray:
        """Lookup table of x -> c*x for every field element x."""
        return self.mul_array(np.arange(self.size, dtype=np.int64), c)

    def format_element(self, a: FE) -> str:
        if a == 0:
            return "0"
        i = self._log[a]
        if i == 0:
            return "1"
        if i == 1:
            return "α"
        return f"α^{i}"


@lru_cache(maxsize=None)
def _coset_representatives(order: int) -> tuple:
    seen = set()
    reps = []
    for e in range(order):
        if e in seen:
            continue
        x = e
        while x not in seen:
            seen.add(x)
            x = (2 * x) % order
        reps.append(e)
    return tuple(reps)


def field_new(m: int, poly_mask: int) -> FieldSpec:
    return FieldSpec(m, poly_mask)


@lru_cache(maxsize=None)
def default_field(m: int) -> FieldSpec:
    if m not in DEFAULT_POLYNOMIALS:
        raise BadDegree(f"field degree must be in 1..{MAX_DEGREE}, got {m}")
    return FieldSpec(m, DEFAULT_POLYNOMIALS[m])


def element_from_log(field: FieldSpec, value: int) -> FE:
    return field.exp(value)


def elements_from_logs(field: FieldSpec, values: Iterable[int]) -> List[FE]:
    return [field.exp(v) for v in values]


def element_logs(field: FieldSpec, values: Sequence[FE]) -> List[int]:
    return [field.log(v) for v in values]
