"""Worst-margin laboratory for the scalar inequalities behind the error radii.

Every closed-form bound used while assembling the interval estimates reduces
to a claim of the shape "margin expression is positive on a stated domain".
Each case below packages one such claim: a margin function evaluated as a
directed-rounding enclosure, together with a sampler for the domain.  The
driver sweeps a deterministic grid plus seeded random points and reports the
smallest lower endpoint seen, so a passing run exhibits a strictly positive
worst margin over the whole sample.

Sampling conventions:

* domains are sampled in their open interior; both ends are pulled inward by
  a relative offset of 1e-9 because several bounds degenerate to equality on
  the boundary,
* unbounded domains are truncated at 10^4,
* cases quantified over admissible integer shift pairs (n, j) sample those
  pairs directly instead of a continuum,
* margins that certify a bound of the form error <= c/N are normalised by N,
  so the reported quantity is c - N * error.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple

from .enclosure import Enclosure, exp_enclosure, sqrt_enclosure
from .errors import PreconditionError
from .estimates import _consts
from .rademacher import h_error

Point = Tuple
MarginFn = Callable[[Point, int], Enclosure]
Sampler = Callable[[int, int, random.Random], Iterable[Point]]

GRID_POINTS = 10_000
RANDOM_POINTS = 1_000
DEFAULT_SEED = 8191
DEFAULT_PRECISION = 128

# Least shifted index in the licensed range, 14 - 1/24.
_CORNER = Fraction(335, 24)
# Truncation point for unbounded domains.
_CAP = Fraction(10_000)
# Relative pull-in applied to both domain endpoints.
_EDGE = Fraction(1, 10**9)

# The infinite Bessel tail is checked as a long partial sum; anything the
# partial sum proves is implied for every shorter truncation as well.
TAIL_TERMS = 1000


def abs_upper(e: Enclosure) -> Fraction:
    """Exact upper bound for |t| over all t in the enclosure."""
    return max(-e.lo_fraction, e.hi_fraction)


def _min_lo(a: Optional[Enclosure], b: Enclosure) -> Enclosure:
    if a is None or b.lo_fraction < a.lo_fraction:
        return b
    return a


def _product_error(
    b1: Enclosure, r1: Fraction, b2: Enclosure, r2: Fraction
) -> Fraction:
    """Bound |(1+b1+E1)(1+b2+E2) - (1+b1+b2)| for |E1| <= r1, |E2| <= r2."""
    a1 = abs_upper(b1)
    a2 = abs_upper(b2)
    return a1 * a2 + r1 * (1 + a2 + r2) + r2 * (1 + a1)


def _interval_sampler(lo: Fraction, hi: Fraction) -> Sampler:
    lo = Fraction(lo)
    hi = Fraction(hi)
    span = hi - lo

    def sample(grid: int, rand: int, rng: random.Random) -> Iterable[Point]:
        a = lo + span * _EDGE
        b = hi - span * _EDGE
        inner = b - a
        if grid == 1:
            yield (a,)
        else:
            step = inner / (grid - 1)
            for i in range(grid):
                yield (a + i * step,)
        for _ in range(rand):
            yield (a + inner * Fraction(rng.getrandbits(53), 1 << 53),)

    return sample


def _licensed_j_max(n: int) -> int:
    # Largest j with 16 j^2 < n; at least 1 for every n >= 17.
    return math.isqrt((n - 1) // 16)


def _pair_sampler(n_lo: int, n_hi: int) -> Sampler:
    """Admissible integer pairs (n, j) with 16 j^2 < n.

    The grid walks n upward taking the smallest, middle, and largest
    admissible j; random points draw n and j uniformly from the same set.
    """

    def sample(grid: int, rand: int, rng: random.Random) -> Iterable[Point]:
        count = 0
        n = n_lo
        while count < grid and n <= n_hi:
            jm = _licensed_j_max(n)
            if jm >= 1:
                for j in sorted({1, max(1, jm // 2), jm}):
                    if count >= grid:
                        break
                    yield (n, j)
                    count += 1
            n += 1
        for _ in range(rand):
            n = rng.randint(n_lo, n_hi)
            jm = _licensed_j_max(n)
            if jm >= 1:
                yield (n, rng.randint(1, jm))

    return sample


def _point_sampler() -> Sampler:
    def sample(grid: int, rand: int, rng: random.Random) -> Iterable[Point]:
        yield ()

    return sample


def _margin_geometric(point: Point, prec: int) -> Enclosure:
    # 1/(1-z) - 1 - z = z^2/(1-z) for real |z| < 1; check both signs of z.
    (u,) = point
    worst = None
    for z in (u, -u):
        gap = 100 * z * z - z * z / (1 - z)
        worst = _min_lo(worst, Enclosure.from_exact(gap, prec))
    return worst


def _margin_sqrt_expansion(point: Point, prec: int) -> Enclosure:
    # sqrt(1-x) sits below 1 - x/2 - x^2/8, so the deviation needs no abs.
    (x,) = point
    deviation = (1 - x / 2 - x * x / 8) - sqrt_enclosure(1 - x, prec)
    return x**3 / 10 - deviation


def _margin_inverse_sqrt(point: Point, prec: int) -> Enclosure:
    (x,) = point
    return 1 + Fraction(3, 5) * x - 1 / sqrt_enclosure(1 - x, prec)


def _margin_reciprocal(point: Point, prec: int) -> Enclosure:
    (x,) = point
    return Enclosure.from_exact(Fraction(5, 4) * x * x - x * x / (1 - x), prec)


def _margin_exp_convexity(point: Point, prec: int) -> Enclosure:
    (x,) = point
    return x * x / 2 + 1 - x - exp_enclosure(-x, prec)


def _envelope(x: Fraction, prec: int) -> Enclosure:
    # sqrt(x) exp(-(pi/2) sqrt(x/2))
    c = _consts(prec)
    decay = (-(c.pi / 2) * sqrt_enclosure(x / 2, prec)).exp()
    return sqrt_enclosure(x, prec) * decay


def _margin_tail_envelope(point: Point, prec: int) -> Enclosure:
    (x,) = point
    return 15 * _envelope(x, prec) - h_error(x, prec)


def _margin_envelope_decreasing(point: Point, prec: int) -> Enclosure:
    # d/dx log(sqrt(x) exp(-(pi/2) sqrt(x/2))) < 0 iff pi sqrt(x) > 2 sqrt(2).
    (x,) = point
    c = _consts(prec)
    return c.pi * sqrt_enclosure(x, prec) - 2 * c.sqrt2


def _margin_shifted_envelope(point: Point, prec: int) -> Enclosure:
    (x,) = point
    y = x - sqrt_enclosure(x, prec) / 2
    c = _consts(prec)
    decay = (-(c.pi / 2) * (y / 2).sqrt()).exp()
    return Fraction(11, 10) - x * y.sqrt() * decay


def _margin_concavity(point: Point, prec: int) -> Enclosure:
    (x,) = point
    return 1 - x / 2 - sqrt_enclosure(1 - x, prec)


def _correction_sum(x: Fraction, prec: int) -> Enclosure:
    # sqrt(3)/(sqrt(2) pi sqrt(x)) + h_error(x)
    c = _consts(prec)
    return c.sqrt3 / (c.sqrt2 * c.pi * sqrt_enclosure(x, prec)) + h_error(x, prec)


def _margin_correction_sum(point: Point, prec: int) -> Enclosure:
    (x,) = point
    return Fraction(99, 100) - _correction_sum(x, prec)


def _margin_exp_argument(point: Point, prec: int) -> Enclosure:
    (x,) = point
    c = _consts(prec)
    inner = Fraction(1, 10) / sqrt_enclosure(x, prec) + Fraction(1, 4)
    value = c.pi / (40 * c.sqrt6) + c.pi * c.pi / 24 * inner * inner
    return Fraction(1, 10) - value


def _margin_shift_ratio(point: Point, prec: int) -> Enclosure:
    (x,) = point
    return Fraction(1, 5) - 1 / (2 * sqrt_enclosure(x, prec))


def _margin_collapse_056(point: Point, prec: int) -> Enclosure:
    n, j = point
    c = _consts(prec)
    nn = Fraction(24 * n - 1, 24)
    n32 = nn * sqrt_enclosure(nn, prec)
    worst = None
    # The bound is used with both the plain and the doubled shift; the
    # doubled one is the tight branch but both must clear 0.56.
    for big_j in (j, 2 * j):
        err_n = (
            Fraction(2, 5)
            + c.pi * big_j**3 / (4 * c.sqrt6 * n32)
            + Fraction(2, 5) * c.pi * big_j**2 / (4 * c.sqrt6 * n32)
            + Fraction(1, 10)
            + Fraction(big_j, 10) / nn
            + Fraction(1, 25) / nn
        )
        worst = _min_lo(worst, Fraction(14, 25) - err_n)
    return worst


def _margin_collapse_131(point: Point, prec: int) -> Enclosure:
    c = _consts(prec)
    value = Fraction(3, 10) * c.sqrt3 / c.sqrt_two_pi + Fraction(11, 10)
    return Fraction(131, 100) - value


def _margin_collapse_271(point: Point, prec: int) -> Enclosure:
    n, j = point
    c = _consts(prec)
    nn = Fraction(24 * n - 1, 24)
    sq = sqrt_enclosure(nn, prec)
    b2 = -(c.sqrt3 / (c.sqrt_two_pi * sq))
    worst = None
    for big_j in (j, 2 * j):
        b1 = Fraction(big_j) / nn - c.pi * big_j**2 / (4 * c.sqrt6 * nn * sq)
        err = _product_error(b1, Fraction(14, 25) / nn, b2, Fraction(131, 100) / nn)
        margin = Enclosure.from_exact(Fraction(271, 100) - nn * err, prec)
        worst = _min_lo(worst, margin)
    return worst


def _margin_collapse_1350(point: Point, prec: int) -> Enclosure:
    (x,) = point
    c = _consts(prec)
    h = h_error(x, prec)
    s = c.sqrt3 / (c.sqrt2 * c.pi * sqrt_enclosure(x, prec)) + h
    return 1350 - x * (h + 100 * s * s)


def _margin_collapse_2075(point: Point, prec: int) -> Enclosure:
    n, j = point
    c = _consts(prec)
    nn = Fraction(24 * n - 1, 24)
    sq = sqrt_enclosure(nn, prec)
    b1 = c.sqrt3 / (c.sqrt2 * c.pi * sq)
    b2 = (
        Fraction(2 * j) / nn
        - c.pi * j**2 / (c.sqrt6 * nn * sq)
        - c.sqrt3 / (c.sqrt_two_pi * sq)
    )
    err = _product_error(b1, Fraction(1350) / nn, b2, Fraction(271, 100) / nn)
    return Enclosure.from_exact(2075 - nn * err, prec)


def _margin_collapse_3926(point: Point, prec: int) -> Enclosure:
    n, j = point
    c = _consts(prec)
    nn = Fraction(24 * n - 1, 24)
    sq = sqrt_enclosure(nn, prec)
    b1 = c.sqrt3 / (c.sqrt2 * c.pi * sq)
    b2 = (
        Fraction(j) / nn
        - c.pi * j**2 / (4 * c.sqrt6 * nn * sq)
        - c.sqrt3 / (c.sqrt_two_pi * sq)
    )
    err = _product_error(b1, Fraction(1350) / nn, b2, Fraction(271, 100) / nn)
    return Enclosure.from_exact(3926 - 2 * nn * err, prec)


def _bessel_halforder(y: Fraction, prec: int) -> Enclosure:
    # [e^y (1 - 1/y) + e^{-y} (1 + 1/y)] / sqrt(2 pi y)
    c = _consts(prec)
    ey = exp_enclosure(y, prec)
    iy = 1 / y
    numerator = ey * (1 - iy) + (1 / ey) * (1 + iy)
    return numerator / (2 * c.pi * y).sqrt()


def _margin_bessel_tail(point: Point, prec: int) -> Enclosure:
    (x,) = point
    c = _consts(prec)
    total = Enclosure.from_exact(0, prec)
    for k in range(2, TAIL_TERMS + 1):
        total = total + _bessel_halforder(x / k, prec)
    rhs = 4 * (x / c.pi).sqrt() * exp_enclosure(x / 2, prec)
    return rhs - total


def _margin_bessel_simplify(point: Point, prec: int) -> Enclosure:
    # 1/x - x/2 changes sign at sqrt(2), so clear both orientations.
    (x,) = point
    base = x * x / 2
    gap = min(base - (1 / x - x / 2), base - (x / 2 - 1 / x))
    return Enclosure.from_exact(gap, prec)


@dataclass(frozen=True)
class InequalityCase:
    """One scalar inequality with its domain sampler and margin function."""

    name: str
    description: str
    margin: MarginFn
    sampler: Sampler
    grid_points: int = GRID_POINTS
    random_points: int = RANDOM_POINTS


@dataclass(frozen=True)
class InequalityResult:
    """Worst margin observed for one case over one sampling run."""

    name: str
    points: int
    worst_margin: Fraction
    worst_point: Point
    passed: bool


CASES: Tuple[InequalityCase, ...] = (
    InequalityCase(
        "geometric-series-100",
        "|1/(1-z) - 1 - z| <= 100 z^2 for 0 < |z| < 0.99",
        _margin_geometric,
        _interval_sampler(Fraction(0), Fraction(99, 100)),
    ),
    InequalityCase(
        "sqrt-expansion-01",
        "|sqrt(1-x) - 1 + x/2 + x^2/8| <= 0.1 x^3 on (0, 0.2)",
        _margin_sqrt_expansion,
        _interval_sampler(Fraction(0), Fraction(1, 5)),
    ),
    InequalityCase(
        "inverse-sqrt-06",
        "1/sqrt(1-x) - 1 <= 0.6 x on (0, 0.2)",
        _margin_inverse_sqrt,
        _interval_sampler(Fraction(0), Fraction(1, 5)),
    ),
    InequalityCase(
        "reciprocal-125",
        "|1/(1-x) - 1 - x| <= 1.25 x^2 on (0, 0.2)",
        _margin_reciprocal,
        _interval_sampler(Fraction(0), Fraction(1, 5)),
    ),
    InequalityCase(
        "exp-convexity-half",
        "exp(-x) - 1 + x <= x^2/2 for x > 0",
        _margin_exp_convexity,
        _interval_sampler(Fraction(0), _CAP),
    ),
    InequalityCase(
        "tail-envelope-15",
        "h_error(x) <= 15 sqrt(x) exp(-(pi/2) sqrt(x/2)) for x >= 12",
        _margin_tail_envelope,
        _interval_sampler(Fraction(12), _CAP),
    ),
    InequalityCase(
        "sqrt-exp-decreasing",
        "pi sqrt(x) > 2 sqrt(2) for x >= 1, so the decay envelope decreases",
        _margin_envelope_decreasing,
        _interval_sampler(Fraction(1), _CAP),
    ),
    InequalityCase(
        "shifted-envelope-11",
        "N sqrt(Y) exp(-(pi/2) sqrt(Y/2)) <= 1.1 with Y = N - sqrt(N)/2",
        _margin_shifted_envelope,
        _interval_sampler(_CORNER, _CAP),
    ),
    InequalityCase(
        "concavity-sqrt-positive",
        "1 - x/2 - sqrt(1-x) > 0 on (0, 0.2)",
        _margin_concavity,
        _interval_sampler(Fraction(0), Fraction(1, 5)),
    ),
    InequalityCase(
        "correction-sum-099",
        "sqrt(3)/(sqrt(2) pi sqrt(N)) + h_error(N) < 0.99 for N >= 335/24",
        _margin_correction_sum,
        _interval_sampler(_CORNER, _CAP),
    ),
    InequalityCase(
        "exp-argument-01",
        "pi/(40 sqrt(6)) + (pi^2/24) (1/(10 sqrt(N)) + 1/4)^2 <= 0.1",
        _margin_exp_argument,
        _interval_sampler(_CORNER, _CAP),
    ),
    InequalityCase(
        "shift-ratio-02",
        "1/(2 sqrt(N)) < 1/5 for N >= 335/24, so shifts stay in the x < 0.2 range",
        _margin_shift_ratio,
        _interval_sampler(_CORNER, _CAP),
    ),
    InequalityCase(
        "collapse-056",
        "0.4 + pi J^3/(4 sqrt6 N^(3/2)) + 0.4 pi J^2/(4 sqrt6 N^(3/2))"
        " + 0.1 + 0.1 J/N + 0.04/N <= 0.56 for J in {j, 2j} over admissible pairs",
        _margin_collapse_056,
        _pair_sampler(17, 10_000),
    ),
    InequalityCase(
        "collapse-131",
        "0.3 sqrt(3)/sqrt(2 pi) + 1.1 <= 1.31",
        _margin_collapse_131,
        _point_sampler(),
        grid_points=1,
        random_points=0,
    ),
    InequalityCase(
        "collapse-271",
        "(1 + b1 +- 0.56/N)(1 + b2 +- 1.31/N) stays within 2.71/N of 1 + b1 + b2",
        _margin_collapse_271,
        _pair_sampler(17, 10_000),
    ),
    InequalityCase(
        "collapse-1350",
        "N (h_error(N) + 100 (sqrt(3)/(sqrt(2) pi sqrt(N)) + h_error(N))^2) <= 1350",
        _margin_collapse_1350,
        _interval_sampler(_CORNER, _CAP),
    ),
    InequalityCase(
        "collapse-2075",
        "(1 + b1 +- 1350/N)(1 + b2 +- 2.71/N) stays within 2075/N of 1 + b1 + b2",
        _margin_collapse_2075,
        _pair_sampler(17, 10_000),
    ),
    InequalityCase(
        "collapse-3926",
        "2 (1 + b1 +- 1350/N)(1 + b2 +- 2.71/N) stays within 3926/N of the center",
        _margin_collapse_3926,
        _pair_sampler(17, 10_000),
    ),
    InequalityCase(
        "bessel-tail-sum",
        "sum over 2 <= k <= 1000 of I_3/2(X/k) <= 4 sqrt(X/pi) exp(X/2) on [20, 100]",
        _margin_bessel_tail,
        _interval_sampler(Fraction(20), Fraction(100)),
        grid_points=100,
        random_points=30,
    ),
    InequalityCase(
        "bessel-simplify-half",
        "|1/x - x/2| <= x^2/2 for x >= 1",
        _margin_bessel_simplify,
        _interval_sampler(Fraction(1), _CAP),
    ),
)

CASE_INDEX = {case.name: case for case in CASES}


def _lookup(name: str) -> InequalityCase:
    case = CASE_INDEX.get(name)
    if case is None:
        known = ", ".join(sorted(CASE_INDEX))
        raise PreconditionError(f"unknown inequality case {name!r}; known: {known}")
    return case


def run_case(
    case,
    grid: Optional[int] = None,
    rand: Optional[int] = None,
    prec: int = DEFAULT_PRECISION,
    seed: int = DEFAULT_SEED,
) -> InequalityResult:
    """Sweep one case and report the worst margin enclosure lower endpoint."""
    if isinstance(case, str):
        case = _lookup(case)
    grid = case.grid_points if grid is None else grid
    rand = case.random_points if rand is None else rand
    if grid < 1:
        raise PreconditionError("requires grid >= 1")
    if rand < 0:
        raise PreconditionError("requires rand >= 0")
    rng = random.Random(seed)
    worst: Optional[Fraction] = None
    worst_point: Point = ()
    count = 0
    for point in case.sampler(grid, rand, rng):
        lo = case.margin(point, prec).lo_fraction
        count += 1
        if worst is None or lo < worst:
            worst = lo
            worst_point = point
    assert worst is not None
    return InequalityResult(case.name, count, worst, worst_point, worst > 0)


def run_all(
    names: Optional[Sequence[str]] = None,
    grid: Optional[int] = None,
    rand: Optional[int] = None,
    prec: int = DEFAULT_PRECISION,
    seed: int = DEFAULT_SEED,
) -> list:
    """Run the named cases (default: all) and collect their results."""
    cases = CASES if names is None else tuple(_lookup(n) for n in names)
    return [run_case(c, grid, rand, prec, seed) for c in cases]
