"""Interval enclosures for partition ratios and differences.

Four families, all sharing the shifted index N = n - 1/24:

  * ratio_interval        p(n-j)/p(n), a product of one decaying exponential
                          and two explicit bracketed factors;
  * fjn_ratio_interval    f(j,n)/p(n) for the second shifted difference
                          f(j,n) = p(n) - 2p(n-j) + p(n-2j), a two-exponential
                          combination;
  * krank_*_interval      boundary k-rank counts and their consecutive
                          differences, normalized by p(n-k-m+1); these reuse
                          the same brackets with ell = n-k-m+23/24 playing
                          the role of N and the shift fixed at 1;
  * convexity_certificate f(j,n) >= 0, decided exactly for small n and by an
                          interval-checked inequality chain where licensed.

Every bracket is a center evaluated in interval arithmetic plus an explicit
rational radius (2.71/N, 1350/N, 2075/N, 3926/N, 4.04/ell, 2079/ell,
3929/ell).  Containment contracts are exercised by sweeping the exact engine
against each enclosure.

The license windows are enforced on exact integers: j < sqrt(N)/2 is
equivalent to 4j^2 < n, j < sqrt(N)/4 to 16j^2 < n, and j <= sqrt(N) to
j^2 < n, because 24 j^2 multiples can never equal 24n - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from types import SimpleNamespace
from typing import Optional

from .enclosure import DEFAULT_PRECISION, Enclosure, sqrt_enclosure
from .errors import PreconditionError
from .exact import (
    LISTING_BOUND,
    PartitionTable,
    ShiftedIndex,
    default_table,
    enumerate_partitions,
    f_jn,
    nu_k,
    p_exact,
)

__all__ = [
    "CertificateKind",
    "ConvexityCertificate",
    "FjnEstimate",
    "MapCheck",
    "RatioEstimate",
    "convexity_certificate",
    "fjn_ratio_interval",
    "injection_inequality",
    "injection_map_check",
    "krank_boundary_value",
    "krank_diff_interval",
    "krank_ratio_interval",
    "nonkary_diff_check",
    "ratio_interval",
]

RATIO_RADIUS_1 = Fraction(271, 100)
RATIO_RADIUS_2 = Fraction(1350)
FJN_RADIUS_A = Fraction(2075)
FJN_RADIUS_B = Fraction(3926)
KRANK_RATIO_RADIUS_1 = Fraction(101, 25)
KRANK_RATIO_RADIUS_2 = Fraction(1350)
KRANK_DIFF_RADIUS_A = Fraction(2079)
KRANK_DIFF_RADIUS_B = Fraction(3929)

_const_cache: dict = {}


def _consts(prec: int) -> SimpleNamespace:
    c = _const_cache.get(prec)
    if c is None:
        pi = Enclosure.pi(prec)
        sqrt2 = sqrt_enclosure(2, prec)
        sqrt3 = sqrt_enclosure(3, prec)
        sqrt6 = sqrt_enclosure(6, prec)
        sqrt_two_pi = (2 * pi).sqrt()
        c = SimpleNamespace(
            pi=pi,
            sqrt2=sqrt2,
            sqrt3=sqrt3,
            sqrt6=sqrt6,
            sqrt_two_pi=sqrt_two_pi,
            # sqrt(3)/(sqrt(2) pi) - sqrt(3)/sqrt(2 pi), about -0.3011
            delta_c=sqrt3 / (sqrt2 * pi) - sqrt3 / sqrt_two_pi,
        )
        _const_cache[prec] = c
    return c


@dataclass(frozen=True)
class RatioEstimate:
    """Enclosure of p(n-j)/p(n) as exponential * factor1 * factor2."""

    index: ShiftedIndex
    j: int
    exponential_factor: Enclosure
    factor1: Enclosure
    factor2: Enclosure
    product: Enclosure
    prec: int


@dataclass(frozen=True)
class FjnEstimate:
    """Enclosure of f(j,n)/p(n) as 1 + exp2*termA - exp1*termB."""

    index: ShiftedIndex
    j: int
    termA: Enclosure
    termB: Enclosure
    total: Enclosure
    prec: int


class CertificateKind(Enum):
    EXACT = "exact"
    ANALYTIC = "analytic"


@dataclass(frozen=True)
class ConvexityCertificate:
    n: int
    j: int
    holds: bool
    kind: CertificateKind

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class MapCheck:
    """Outcome of exercising the shift map on enumerated partitions."""

    n: int
    j: int
    ell: int
    domain_size: int
    injective: bool
    preserves_avoidance: bool


def _shifted(n: int) -> Fraction:
    return Fraction(24 * n - 1, 24)


def ratio_interval(n: int, j: int, prec: int = DEFAULT_PRECISION) -> RatioEstimate:
    """Enclosure of p(n-j)/p(n) for n >= 14, 0 <= j < sqrt(N)/2.

    e^{-pi j/sqrt(6N)} (1 + j/N - pi j^2/(4 sqrt6 N^{3/2})
                          - sqrt3/(sqrt(2 pi) sqrt N) +- 2.71/N)
                       (1 + sqrt3/(sqrt(2N) pi) +- 1350/N)
    """
    if n < 14:
        raise PreconditionError("requires n >= 14")
    if j < 0:
        raise PreconditionError("requires j >= 0")
    if 4 * j * j >= n:
        raise PreconditionError("requires j < sqrt(N)/2, i.e. 4j^2 < n")
    c = _consts(prec)
    N = _shifted(n)
    Ne = Enclosure.from_exact(N, prec)
    sqrtN = Ne.sqrt()
    expf = (-(c.pi * j / (c.sqrt6 * sqrtN))).exp()
    center1 = (
        1
        + Fraction(j) / N
        - c.pi * j * j / (4 * c.sqrt6 * Ne * sqrtN)
        - c.sqrt3 / (c.sqrt_two_pi * sqrtN)
    )
    factor1 = center1.plus_minus(Enclosure.from_exact(RATIO_RADIUS_1 / N, prec))
    center2 = 1 + c.sqrt3 / (c.pi * c.sqrt2 * sqrtN)
    factor2 = center2.plus_minus(Enclosure.from_exact(RATIO_RADIUS_2 / N, prec))
    return RatioEstimate(
        index=ShiftedIndex.of(n),
        j=j,
        exponential_factor=expf,
        factor1=factor1,
        factor2=factor2,
        product=expf * factor1 * factor2,
        prec=prec,
    )


def fjn_ratio_interval(n: int, j: int, prec: int = DEFAULT_PRECISION) -> FjnEstimate:
    """Enclosure of f(j,n)/p(n) for n >= 14, 1 <= j < sqrt(N)/4.

    1 + e^{-sqrt2 pi j/sqrt(3N)} termA - e^{-pi j/sqrt(6N)} termB, where
    termA = 1 + delta_c/sqrt N + 2j/N - pi j^2/(sqrt6 N^{3/2}) +- 2075/N and
    termB = 2 + 2 delta_c/sqrt N + 2j/N - pi j^2/(2 sqrt6 N^{3/2}) +- 3926/N,
    with delta_c = sqrt3/(sqrt2 pi) - sqrt3/sqrt(2 pi).  The first exponent
    is exactly twice the second.
    """
    if n < 14:
        raise PreconditionError("requires n >= 14")
    if j < 1:
        raise PreconditionError("requires j >= 1")
    if 16 * j * j >= n:
        raise PreconditionError("requires j < sqrt(N)/4, i.e. 16j^2 < n")
    c = _consts(prec)
    N = _shifted(n)
    Ne = Enclosure.from_exact(N, prec)
    sqrtN = Ne.sqrt()
    exp1 = (-(c.pi * j / (c.sqrt6 * sqrtN))).exp()
    exp2 = exp1 * exp1
    jj = Fraction(2 * j) / N
    centerA = 1 + c.delta_c / sqrtN + jj - c.pi * j * j / (c.sqrt6 * Ne * sqrtN)
    termA = centerA.plus_minus(Enclosure.from_exact(FJN_RADIUS_A / N, prec))
    centerB = (
        2 + 2 * c.delta_c / sqrtN + jj - c.pi * j * j / (2 * c.sqrt6 * Ne * sqrtN)
    )
    termB = centerB.plus_minus(Enclosure.from_exact(FJN_RADIUS_B / N, prec))
    return FjnEstimate(
        index=ShiftedIndex.of(n),
        j=j,
        termA=termA,
        termB=termB,
        total=1 + exp2 * termA - exp1 * termB,
        prec=prec,
    )


def _analytic_convexity(n: int, j: int, prec: int) -> bool:
    # sufficient chain: with X = e^{-2a} - 2e^{-a}, a = pi j/sqrt(6N),
    #   (i)   -1 < X < 0,
    #   (ii)  j/N - 3 pi j^2/(4 sqrt6 N^{3/2}) >= 0,
    #   (iii) -1 < delta_c/sqrt N + j/N - pi j^2/(4 sqrt6 N^{3/2}) + 3926/N < 0
    # together force f(j,n)/p(n) > 0; each comparison must hold for the
    # whole interval, else the chain is inconclusive
    c = _consts(prec)
    N = _shifted(n)
    Ne = Enclosure.from_exact(N, prec)
    sqrtN = Ne.sqrt()
    B = (
        c.delta_c / sqrtN
        + Fraction(j) / N
        - c.pi * j * j / (4 * c.sqrt6 * Ne * sqrtN)
        + FJN_RADIUS_B / N
    )
    if not (B.strictly_negative() and B.lo_fraction > -1):
        return False
    second = Fraction(j) / N - 3 * c.pi * j * j / (4 * c.sqrt6 * Ne * sqrtN)
    if not second.lo_fraction >= 0:
        return False
    exp1 = (-(c.pi * j / (c.sqrt6 * sqrtN))).exp()
    X = exp1 * exp1 - 2 * exp1
    return X.strictly_negative() and X.lo_fraction > -1


def convexity_certificate(
    n: int,
    j: int,
    prec: int = DEFAULT_PRECISION,
    table: Optional[PartitionTable] = None,
) -> ConvexityCertificate:
    """Certify p(n) - 2p(n-j) + p(n-2j) >= 0.

    Exact evaluation settles 2 <= n <= 13 and any (n, j) outside the
    analytic license j < sqrt(N)/4.  Licensed cases try the interval-checked
    inequality chain first and fall back to exact evaluation when any link
    is inconclusive, so the verdict is always decided.
    """
    if n < 2:
        raise PreconditionError("requires n >= 2")
    if j < 1:
        raise PreconditionError("requires j >= 1")
    if 2 * j > n:
        raise PreconditionError("requires 2j <= n")
    if n >= 14 and 16 * j * j < n and _analytic_convexity(n, j, prec):
        return ConvexityCertificate(n=n, j=j, holds=True, kind=CertificateKind.ANALYTIC)
    holds = f_jn(n, j, table if table is not None else default_table()) >= 0
    return ConvexityCertificate(n=n, j=j, holds=holds, kind=CertificateKind.EXACT)


def krank_boundary_value(
    k: int, m: int, n: int, table: Optional[PartitionTable] = None
) -> int:
    """Count of partitions of n with k-rank m, on the range m > n/2 where it
    collapses to p(n-k-m+1) - p(n-k-m)."""
    if k < 1:
        raise PreconditionError("requires k >= 1")
    if n < 0:
        raise PreconditionError("requires n >= 0")
    if 2 * m <= n:
        raise PreconditionError("requires m > n/2")
    t = table if table is not None else default_table()
    return p_exact(n - k - m + 1, t) - p_exact(n - k - m, t)


def _ell(k: int, m: int, n: int) -> Fraction:
    return Fraction(24 * (n - k - m) + 23, 24)


def _check_krank_domain(k: int, m: int, n: int) -> None:
    if k < 1:
        raise PreconditionError("requires k >= 1")
    if 2 * m <= n:
        raise PreconditionError("requires m > n/2")
    if n - k - m < 16:
        raise PreconditionError("requires ell > 16, i.e. n - k - m >= 16")


_krank_ratio_cache: dict = {}
_krank_diff_cache: dict = {}


def krank_ratio_interval(
    k: int, m: int, n: int, prec: int = DEFAULT_PRECISION
) -> Enclosure:
    """Enclosure of N_k(m,n)/p(n-k-m+1) for m > n/2 and ell > 16:

        1 - e^{-pi/sqrt(6 ell)} (1 - sqrt3/sqrt(2 pi ell) +- 4.04/ell)
                                (1 + sqrt3/(sqrt(2 ell) pi) +- 1350/ell).

    Depends on (k, m, n) only through n-k-m; cached on it.
    """
    _check_krank_domain(k, m, n)
    key = (n - k - m, prec)
    hit = _krank_ratio_cache.get(key)
    if hit is not None:
        return hit
    c = _consts(prec)
    ell = _ell(k, m, n)
    Le = Enclosure.from_exact(ell, prec)
    sqrtL = Le.sqrt()
    u = (-(c.pi / (c.sqrt6 * sqrtL))).exp()
    center1 = 1 - c.sqrt3 / (c.sqrt_two_pi * sqrtL)
    f1 = center1.plus_minus(Enclosure.from_exact(KRANK_RATIO_RADIUS_1 / ell, prec))
    center2 = 1 + c.sqrt3 / (c.pi * c.sqrt2 * sqrtL)
    f2 = center2.plus_minus(Enclosure.from_exact(KRANK_RATIO_RADIUS_2 / ell, prec))
    result = 1 - u * f1 * f2
    _krank_ratio_cache[key] = result
    return result


def krank_diff_interval(
    k: int, m: int, n: int, prec: int = DEFAULT_PRECISION
) -> Enclosure:
    """Enclosure of (N_k(m,n) - N_k(m+1,n))/p(n-k-m+1) for m > n/2, ell > 16:

        1 + e^{-sqrt2 pi/sqrt(3 ell)} (1 + delta_c/sqrt ell +- 2079/ell)
          - e^{-pi/sqrt(6 ell)} (2 + 2 delta_c/sqrt ell +- 3929/ell).

    The widened radii absorb the shift-dependent center terms that the
    j = 1 second-difference estimate keeps explicit.  Cached on n-k-m.
    """
    _check_krank_domain(k, m, n)
    key = (n - k - m, prec)
    hit = _krank_diff_cache.get(key)
    if hit is not None:
        return hit
    c = _consts(prec)
    ell = _ell(k, m, n)
    Le = Enclosure.from_exact(ell, prec)
    sqrtL = Le.sqrt()
    u = (-(c.pi / (c.sqrt6 * sqrtL))).exp()
    centerA = 1 + c.delta_c / sqrtL
    termA = centerA.plus_minus(Enclosure.from_exact(KRANK_DIFF_RADIUS_A / ell, prec))
    centerB = 2 + 2 * c.delta_c / sqrtL
    termB = centerB.plus_minus(Enclosure.from_exact(KRANK_DIFF_RADIUS_B / ell, prec))
    result = 1 + u * u * termA - u * termB
    _krank_diff_cache[key] = result
    return result


def nonkary_diff_check(
    n: int, k: int, table: Optional[PartitionTable] = None
) -> bool:
    """Is nu_k(n) - nu_k(n-k) positive?  Computed exactly.

    Also cross-checks the collapse nu_k(n) - nu_k(n-k) = f(k,n) before
    answering; a mismatch would mean the exact engine is inconsistent.
    """
    if n < 2:
        raise PreconditionError("requires n >= 2")
    if k < 1:
        raise PreconditionError("requires k >= 1")
    if 2 * k > n:
        raise PreconditionError("requires 2k <= n")
    t = table if table is not None else default_table()
    diff = nu_k(n, k, t) - nu_k(n - k, k, t)
    if diff != f_jn(n, k, t):
        raise AssertionError(
            f"nu_{k}({n}) - nu_{k}({n - k}) disagrees with the second difference"
        )
    return diff > 0


def injection_inequality(
    n: int, j: int, ell: int, table: Optional[PartitionTable] = None
) -> bool:
    """Exact check of p(n-ell) - p(n-ell-j) <= p(n) - p(n-j).

    Arguments below zero follow the p(m < 0) = 0 convention; no inputs are
    rejected.  The inequality is witnessed by the map on partitions checked
    separately by injection_map_check.
    """
    t = table if table is not None else default_table()
    lhs = p_exact(n - ell, t) - p_exact(n - ell - j, t)
    rhs = p_exact(n, t) - p_exact(n - j, t)
    return lhs <= rhs


def injection_map_check(n: int, j: int, ell: int) -> MapCheck:
    """Exercise the witness map on the enumerated partitions themselves.

    The map sends a partition of n - ell avoiding part j to a partition of n
    by adding ell to the largest part.  Distinct inputs stay distinct; the
    image avoids j unless the enlarged first part happens to equal j, which
    the preserves_avoidance flag reports.
    """
    if n < 1 or n > LISTING_BOUND:
        raise PreconditionError(f"requires 1 <= n <= {LISTING_BOUND}")
    if j < 1:
        raise PreconditionError("requires j >= 1")
    if ell < 0 or ell >= n:
        raise PreconditionError("requires 0 <= ell < n")
    domain = [
        parts for parts in enumerate_partitions(n - ell) if j not in parts
    ]
    images = []
    for parts in domain:
        if ell == 0:
            images.append(parts)
        else:
            images.append((parts[0] + ell,) + parts[1:] if parts else (ell,))
    assert all(sum(img) == n for img in images)
    assert all(
        all(a >= b for a, b in zip(img, img[1:])) for img in images
    )
    return MapCheck(
        n=n,
        j=j,
        ell=ell,
        domain_size=len(domain),
        injective=len(set(images)) == len(domain),
        preserves_avoidance=all(j not in img for img in images),
    )
