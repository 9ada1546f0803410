"""Convergent series evaluation of p(n) and the leading-term enclosure.

The partition number is recovered from the convergent expansion

    p(n) = 2 pi (24n-1)^{-3/4} * sum_{k>=1} (A_k(n)/k) I_{3/2}(pi sqrt(2N/3)/k)

with N = n - 1/24.  Truncations are evaluated at a working precision high
enough to resolve the nearest integer; the rounded value is accepted only
once it sits well inside the unit interval around an integer and repeats
over several consecutive truncation depths.

The one-term truncation also yields a rigorous two-sided enclosure of p(m):
the k = 1 term with its algebraic prefactor expanded, plus an explicit
envelope h(M) absorbing both the expansion remainder and the entire k >= 2
tail.  That enclosure is what the ratio estimates downstream consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .enclosure import DEFAULT_PRECISION, Enclosure, sqrt_enclosure
from .errors import PreconditionError, StabilizationError
from .exact import PartitionTable, default_table, p_exact
from .special import bessel_I32_closed, kloosterman_A, mp_context, to_fraction

__all__ = [
    "ErrorBudget",
    "RademacherPartial",
    "h_error",
    "leading_asymptotic_ratio",
    "proposition21_budget",
    "proposition21_interval",
    "rademacher_partial",
    "rademacher_round",
]


def _working_precision(n: int, prec: int) -> int:
    # p(n) has about pi*sqrt(2n/3)*log2(e) bits; resolving it to +-1/4
    # needs all of them, plus headroom for accumulated rounding
    magnitude = math.pi * math.sqrt(2 * n / 3) * 1.4427
    wp = max(prec, int(magnitude) + 48)
    return ((wp + 31) // 32) * 32


@dataclass(frozen=True)
class RademacherPartial:
    """A truncated series evaluation: K terms at a fixed working precision."""

    n: int
    K: int
    prec: int
    value: mpmath.mpf
    terms: tuple


def _series_state(n: int, prec: int):
    wp = _working_precision(n, prec)
    ctx = mp_context(wp)
    X = ctx.pi * ctx.sqrt(ctx.mpf(2) * (24 * n - 1) / 72)
    prefactor = 2 * ctx.pi / ctx.mpf(24 * n - 1) ** (ctx.mpf(3) / 4)
    return wp, ctx, X, prefactor


def _term(ctx, wp: int, X, n: int, k: int):
    A = kloosterman_A(k, n, wp)
    bess = bessel_I32_closed(to_fraction(X / k), wp)
    return ctx.convert(A) / k * ctx.convert(bess)


def rademacher_partial(n: int, K: int, prec: int = DEFAULT_PRECISION) -> RademacherPartial:
    """Sum of the first K series terms, including the global prefactor."""
    if n < 1:
        raise PreconditionError("requires n >= 1")
    if K < 1:
        raise PreconditionError("requires K >= 1")
    wp, ctx, X, prefactor = _series_state(n, prec)
    terms = tuple(_term(ctx, wp, X, n, k) for k in range(1, K + 1))
    return RademacherPartial(n=n, K=K, prec=wp, value=prefactor * ctx.fsum(terms), terms=terms)


def rademacher_round(n: int, prec: int = DEFAULT_PRECISION) -> int:
    """p(n) by rounding the truncated series to the nearest integer.

    Terms are added until the remaining tail provably cannot move the sum
    across a rounding boundary.  Once K >= X every leftover Bessel argument
    X/k is below 1, where I_{3/2}(y) <= y^{3/2} / (Gamma(5/2) sqrt(2));
    together with |A_k(n)| <= k the tail after K terms is at most

        prefactor * X^{3/2} * 2 / (Gamma(5/2) sqrt(2) sqrt(K)),

    so the round is certified as soon as that bound plus the distance to the
    nearest integer drops below 1/2.  prefactor * X^{3/2} is the same
    constant (about 2.38) for every n, which forces termination no later
    than K = max(ceil(X), 103); the budget is padded past that point and
    exhausting it raises StabilizationError rather than returning a guess.
    """
    if n < 1:
        raise PreconditionError("requires n >= 1")
    wp, ctx, X, prefactor = _series_state(n, prec)
    # Gamma(5/2) = 3 sqrt(pi) / 4.
    gamma52 = 3 * ctx.sqrt(ctx.pi) / 4
    tail_coeff = prefactor * X ** (ctx.mpf(3) / 2) * 2 / (gamma52 * ctx.sqrt(ctx.mpf(2)))
    start = max(int(ctx.ceil(X)), 1)
    cap = max(start, 103) + 64
    threshold = ctx.mpf(1) / 2 - ctx.mpf(2) ** (16 - wp)
    running = ctx.zero
    for k in range(1, cap + 1):
        running += _term(ctx, wp, X, n, k)
        if k < start:
            continue
        value = prefactor * running
        nearest = int(ctx.nint(value))
        if abs(value - nearest) + tail_coeff / ctx.sqrt(ctx.mpf(k)) < threshold:
            return nearest
    raise StabilizationError(
        f"series for n={n} did not settle within {cap} terms at precision {wp}"
    )


def h_error(x, prec: int = DEFAULT_PRECISION) -> Enclosure:
    """Envelope h(x) controlling everything beyond the leading correction.

    h(x) = (2 pi^2 / 3) x e^{-pi sqrt(2x/3)} + (8 pi / sqrt 3) sqrt(x)
           e^{-(pi/2) sqrt(x/2)}.

    Decreasing for x >= 12; h(335/24) is about 0.862, already below 1.
    """
    xf = to_fraction(x)
    if xf <= 0:
        raise PreconditionError("requires x > 0")
    xe = Enclosure.from_exact(xf, prec)
    pi = Enclosure.pi(prec)
    sqrt3 = sqrt_enclosure(3, prec)
    first = 2 * pi * pi / 3 * xe * (-(pi * (2 * xe / 3).sqrt())).exp()
    second = 8 * pi / sqrt3 * xe.sqrt() * (-(pi / 2 * (xe / 2).sqrt())).exp()
    return first + second


@dataclass(frozen=True)
class ErrorBudget:
    """Where the enclosure width comes from, split into its two sources."""

    main_correction: Enclosure
    tail_bound: Enclosure


_prop21_cache: dict = {}


def _prop21(m: int, prec: int):
    key = (m, prec)
    hit = _prop21_cache.get(key)
    if hit is not None:
        return hit
    M = Fraction(24 * m - 1, 24)
    Me = Enclosure.from_exact(M, prec)
    pi = Enclosure.pi(prec)
    sqrt3 = sqrt_enclosure(3, prec)
    sqrt2 = sqrt_enclosure(2, prec)
    prefactor = (pi * (2 * Me / 3).sqrt()).exp() / (4 * sqrt3 * Me)
    correction = sqrt3 / (sqrt2 * pi * Me.sqrt())
    tail = h_error(M, prec)
    enclosure = prefactor * (1 - correction).plus_minus(tail)
    result = (enclosure, ErrorBudget(main_correction=correction, tail_bound=tail))
    _prop21_cache[key] = result
    return result


def proposition21_interval(n: int, j: int, prec: int = DEFAULT_PRECISION) -> Enclosure:
    """Two-sided enclosure of p(n-j) from the one-term truncation.

        p(n-j) in e^{pi sqrt(2M/3)} / (4 sqrt(3) M) * [1 - sqrt(3)/(sqrt(2) pi
        sqrt(M)) +- h(M)],   M = n - j - 1/24.

    Only n - j matters; results are cached on it.
    """
    if n < 1:
        raise PreconditionError("requires n >= 1")
    if j < 0:
        raise PreconditionError("requires j >= 0")
    if n - j < 2:
        raise PreconditionError("requires n - j >= 2")
    return _prop21(n - j, prec)[0]


def proposition21_budget(n: int, j: int, prec: int = DEFAULT_PRECISION) -> ErrorBudget:
    """The width sources behind proposition21_interval for the same (n, j)."""
    proposition21_interval(n, j, prec)
    return _prop21(n - j, prec)[1]


def leading_asymptotic_ratio(n: int, table: Optional[PartitionTable] = None,
                             prec: int = DEFAULT_PRECISION) -> mpmath.mpf:
    """p(n) * 4 sqrt(3) n * e^{-pi sqrt(2n/3)}; tends to 1 from below."""
    if n < 1:
        raise PreconditionError("requires n >= 1")
    wp = _working_precision(n, prec) + 16
    ctx = mp_context(wp)
    p = p_exact(n, table if table is not None else default_table())
    ratio = ctx.mpf(p) * 4 * ctx.sqrt(3) * n * ctx.exp(-ctx.pi * ctx.sqrt(ctx.mpf(2 * n) / 3))
    return mpmath.mp.make_mpf(mpmath.libmp.mpf_pos(ratio._mpf_, prec, "n"))
