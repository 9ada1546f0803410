"""Exact integer partition arithmetic.

Everything in this module is exact: arbitrary-precision integers and
rationals only, no floating point.  The partition counter p(n) is computed
by the pentagonal-number recurrence and memoized in a growable table; the
slower counting routines (bounded-largest-part recursion, part-avoiding
recursion, literal enumeration) are kept deliberately independent so they
can serve as oracles for the fast path.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import PreconditionError

ENUMERATION_BOUND = 90
LISTING_BOUND = 45


@dataclass(frozen=True)
class Partition:
    """A non-increasing sequence of positive parts with their sum."""

    parts: tuple
    weight: int

    def __post_init__(self):
        if any(x <= 0 for x in self.parts):
            raise ValueError("parts must be positive")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError("parts must be non-increasing")
        if sum(self.parts) != self.weight:
            raise ValueError("weight must equal the sum of parts")

    @classmethod
    def from_parts(cls, parts):
        parts = tuple(parts)
        return cls(parts, sum(parts))

    def rank(self) -> int:
        """Largest part minus number of parts."""
        if not self.parts:
            raise ValueError("rank of the empty partition is undefined")
        return self.parts[0] - len(self.parts)


@dataclass(frozen=True)
class ShiftedIndex:
    """An integer n paired with the exact shift N = n - 1/24."""

    n: int
    N: Fraction

    def __post_init__(self):
        if self.N != self.n - Fraction(1, 24):
            raise ValueError("N must equal n - 1/24 exactly")

    @classmethod
    def of(cls, n: int) -> "ShiftedIndex":
        return cls(n, Fraction(24 * n - 1, 24))


class PartitionTable:
    """Memoized exact values of p(n), grown by the pentagonal recurrence.

    Growth is serialized by a lock; reads of already-computed entries are
    plain list indexing and safe to share across threads after a warm-up
    call to ensure().
    """

    def __init__(self):
        self._values = [1]
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._values)

    def ensure(self, n: int):
        """Grow the table so that p(0..n) are all available."""
        if n < len(self._values):
            return
        with self._lock:
            vals = self._values
            while len(vals) <= n:
                m = len(vals)
                total = 0
                k = 1
                while True:
                    g = k * (3 * k - 1) // 2
                    if g > m:
                        break
                    term = vals[m - g]
                    g += k  # second pentagonal number k(3k+1)/2
                    if g <= m:
                        term += vals[m - g]
                    total += term if (k & 1) else -term
                    k += 1
                vals.append(total)

    def p(self, m: int) -> int:
        """p(m), with p(m) = 0 for m < 0."""
        if m < 0:
            return 0
        self.ensure(m)
        return self._values[m]


_default_table = PartitionTable()


def default_table() -> PartitionTable:
    return _default_table


def p_exact(n: int, table: PartitionTable | None = None) -> int:
    """Exact number of partitions of n (0 for negative n)."""
    if table is None:
        table = _default_table
    return table.p(n)


def p_enumerate_oracle(n: int) -> int:
    """Count partitions of n by bounded-largest-part recursion.

    Splits on whether the largest allowed part is used, so the count never
    touches the pentagonal identity.  Kept small: the memo table is
    quadratic in n.
    """
    if n < 0:
        raise PreconditionError("requires n >= 0")
    if n > ENUMERATION_BOUND:
        raise PreconditionError(f"enumeration oracle requires n <= {ENUMERATION_BOUND}")

    @lru_cache(maxsize=None)
    def count(m, largest):
        if m == 0:
            return 1
        if largest == 0:
            return 0
        if largest > m:
            largest = m
        return count(m, largest - 1) + count(m - largest, largest)

    return count(n, n)


def f_jn(n: int, j: int, table: PartitionTable | None = None) -> int:
    """Second j-shifted difference p(n) - 2p(n-j) + p(n-2j)."""
    if n < 2:
        raise PreconditionError("requires n >= 2")
    if j < 1:
        raise PreconditionError("requires j >= 1")
    if 2 * j > n:
        raise PreconditionError("requires 2j <= n")
    p = (table or _default_table).p
    return p(n) - 2 * p(n - j) + p(n - 2 * j)


def delta_r_j_direct(n: int, j: int, r: int, table: PartitionTable | None = None) -> int:
    """r-fold j-shifted backward difference of p at n, by the binomial sum."""
    if r < 1:
        raise PreconditionError("requires r >= 1")
    if j < 1:
        raise PreconditionError("requires j >= 1")
    if r * j > n:
        raise PreconditionError("requires rj <= n")
    p = (table or _default_table).p
    return sum((-1) ** i * comb(r, i) * p(n - i * j) for i in range(r + 1))


def series_delta_coeffs(j: int, r: int, n_max: int) -> list:
    """Coefficients of (1-q^j)^r / prod_{k>=1}(1-q^k) up to q^n_max.

    The inverse product is built by repeated series division (one part size
    at a time), then the numerator is applied by r successive
    multiplications with (1-q^j).  No pentagonal identity involved.
    """
    if j < 1 or r < 0 or n_max < 0:
        raise PreconditionError("requires j >= 1, r >= 0, n_max >= 0")
    coeffs = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        for m in range(part, n_max + 1):
            coeffs[m] += coeffs[m - part]
    for _ in range(r):
        for m in range(n_max, j - 1, -1):
            coeffs[m] -= coeffs[m - j]
    return coeffs


def nu_k(n: int, k: int, table: PartitionTable | None = None) -> int:
    """Number of partitions of n with no part equal to k: p(n) - p(n-k)."""
    if n < 0:
        raise PreconditionError("requires n >= 0")
    if k < 1:
        raise PreconditionError("requires k >= 1")
    p = (table or _default_table).p
    return p(n) - p(n - k)


def nonkary_enumerate_oracle(n: int, k: int) -> int:
    """Count partitions of n avoiding part k, by direct bounded recursion."""
    if n < 0 or k < 1:
        raise PreconditionError("requires n >= 0 and k >= 1")
    if n > 60:
        raise PreconditionError("avoiding-part oracle requires n <= 60")

    @lru_cache(maxsize=None)
    def count(m, largest):
        if m == 0:
            return 1
        if largest == 0:
            return 0
        if largest > m:
            largest = m
        skip = count(m, largest - 1)
        if largest == k:
            return skip
        return skip + count(m - largest, largest)

    return count(n, n)


def enumerate_partitions(n: int, max_part: int | None = None):
    """Yield all partitions of n as non-increasing tuples.

    Exponential output; guarded to keep accidental large calls out.
    """
    if n < 0:
        raise PreconditionError("requires n >= 0")
    if n > LISTING_BOUND:
        raise PreconditionError(f"literal listing requires n <= {LISTING_BOUND}")
    yield from _partitions(n, n if max_part is None else min(max_part, n))


def _partitions(n, max_part):
    if n == 0:
        yield ()
        return
    for first in range(min(max_part, n), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def dyson_rank_count(n: int, m: int) -> int:
    """Number of partitions of n whose rank (largest part minus number of
    parts) equals m, by literal enumeration."""
    if n < 1:
        raise PreconditionError("requires n >= 1")
    if n > 40:
        raise PreconditionError("rank enumeration requires n <= 40")
    return sum(1 for parts in enumerate_partitions(n) if parts[0] - len(parts) == m)
