"""Verification sweeps: each suite exercises one block of the library at
full scale and reports counted cases, failures, and worst observed margins.

Default ranges are the ones the package promises to satisfy, so running
every suite back to back is the complete verification gate.  Sweep loops
are deterministic; only the inequality registry fans out across worker
processes (one per registered case), and its output is reassembled in
registry order, so parallel and sequential runs produce identical reports.
"""

from __future__ import annotations

import math
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from .errors import PreconditionError
from .estimates import (
    CertificateKind,
    convexity_certificate,
    fjn_ratio_interval,
    injection_inequality,
    injection_map_check,
    krank_boundary_value,
    krank_diff_interval,
    krank_ratio_interval,
    nonkary_diff_check,
    ratio_interval,
)
from .exact import (
    ENUMERATION_BOUND,
    PartitionTable,
    default_table,
    dyson_rank_count,
    f_jn,
    p_enumerate_oracle,
    p_exact,
)
from .inequalities import CASES, DEFAULT_SEED, InequalityResult, _lookup, run_case
from .rademacher import DEFAULT_PRECISION, proposition21_interval, rademacher_round
from .reports import SuiteReport, fraction_str
from .special import (
    bessel_I32_closed,
    bessel_I32_quadrature,
    dedekind_sum,
    kloosterman_A,
    kloosterman_imag_residue,
    to_fraction,
)

SUITE_NAMES = (
    "oracles",
    "rademacher",
    "containment-ratio",
    "containment-fjn",
    "convexity",
    "krank",
    "nonkary",
    "inequalities",
)

FAILURE_CAP = 200

# x values for closed-form vs quadrature Bessel agreement; spans the
# small-argument cancellation regime through series-scale arguments.
BESSEL_GRID = (
    Fraction(1, 10),
    Fraction(1, 2),
    Fraction(1),
    Fraction(2),
    Fraction(5),
    Fraction(12),
    Fraction(50),
    Fraction(120),
    Fraction(500),
    Fraction(1000),
)

# relative half-width of the two-factor ratio enclosure is budgeted by the
# two stated radii over N; the recorded constant divides by their mass
RATIO_RADIUS_MASS = Fraction(271, 100) + 1350

# the one unguarded triple where p(n-ell) - p(n-ell-j) <= p(n) - p(n-j)
# fails: the empty partition avoids every part, but (1) does not avoid 1
INJECTION_COUNTEREXAMPLE = (1, 1, 1)


def ratio_j_top(n: int) -> int:
    """Largest j with 4j^2 < n (two-factor ratio license)."""
    return math.isqrt((n - 1) // 4)


def fjn_j_top(n: int) -> int:
    """Largest j with 16j^2 < n (second-difference license)."""
    return math.isqrt((n - 1) // 16)


def prop21_j_top(n: int) -> int:
    """Largest j with j^2 < n (one-term truncation license)."""
    return math.isqrt(n - 1)


class _Recorder:
    """Counts cases and collects failure descriptions up to a cap."""

    __slots__ = ("cases", "failures", "overflow")

    def __init__(self) -> None:
        self.cases = 0
        self.failures: List[str] = []
        self.overflow = 0

    def ok(self) -> None:
        self.cases += 1

    def fail(self, message: str) -> None:
        self.cases += 1
        if len(self.failures) < FAILURE_CAP:
            self.failures.append(message)
        else:
            self.overflow += 1

    def close(self) -> None:
        if self.overflow:
            self.failures.append(f"... plus {self.overflow} more failures")


@dataclass
class SweepOptions:
    n_max: Optional[int] = None
    j_max: Optional[int] = None
    prec: int = DEFAULT_PRECISION
    seed: int = DEFAULT_SEED
    case: Optional[str] = None
    collect_rows: bool = False
    table: PartitionTable = field(default_factory=default_table)

    def j_cap(self, j_top: int) -> int:
        return j_top if self.j_max is None else min(j_top, self.j_max)


_Outcome = Tuple[_Recorder, Dict[str, Any], List[Dict[str, Any]]]


def _suite_oracles(o: SweepOptions) -> _Outcome:
    rec = _Recorder()
    rows: List[Dict[str, Any]] = []
    top = min(o.n_max if o.n_max is not None else 60, ENUMERATION_BOUND)
    o.table.ensure(top)
    for n in range(top + 1):
        expected = p_enumerate_oracle(n)
        got = p_exact(n, o.table)
        if got == expected:
            rec.ok()
        else:
            rec.fail(f"p({n}): recurrence {got} != enumeration {expected}")
        if o.collect_rows:
            rows.append(
                {"check": "partition-enumeration", "n": n, "value": str(got),
                 "passed": got == expected}
            )

    pairs = 0
    for k in range(1, 51):
        for h in range(1, k + 1):
            if math.gcd(h, k) != 1:
                continue
            pairs += 1
            lhs = dedekind_sum(h, k) + dedekind_sum(k, h)
            rhs = Fraction(-1, 4) + (
                Fraction(h, k) + Fraction(k, h) + Fraction(1, h * k)
            ) / 12
            if lhs == rhs:
                rec.ok()
            else:
                rec.fail(f"reciprocity fails at (h, k) = ({h}, {k})")

    residue_bound = Fraction(1, 2**64)
    max_residue = Fraction(0)
    for k in range(1, 51):
        for n in range(0, 201):
            amp = abs(to_fraction(kloosterman_A(k, n, o.prec)))
            residue = abs(to_fraction(kloosterman_imag_residue(k, n, o.prec)))
            max_residue = max(max_residue, residue)
            if amp <= k and residue < residue_bound:
                rec.ok()
            else:
                rec.fail(
                    f"A_{k}({n}): |A| = {float(amp):.3f} (cap {k}), "
                    f"residue = {float(residue):.3e}"
                )

    rel_bound = Fraction(1, 10**15)
    max_rel = Fraction(0)
    for x in BESSEL_GRID:
        closed = to_fraction(bessel_I32_closed(x, o.prec))
        quad = to_fraction(bessel_I32_quadrature(x, o.prec))
        rel = abs(closed - quad) / abs(closed)
        max_rel = max(max_rel, rel)
        ok = rel <= rel_bound
        if ok:
            rec.ok()
        else:
            rec.fail(f"Bessel closed vs quadrature at x = {x}: rel {float(rel):.3e}")
        if o.collect_rows:
            rows.append(
                {"check": "bessel-agreement", "x": fraction_str(x),
                 "rel_error": float(rel), "passed": ok}
            )

    info = {
        "enumeration_top": top,
        "reciprocity_pairs": pairs,
        "max_kloosterman_residue": float(max_residue),
        "max_bessel_rel_error": float(max_rel),
    }
    return rec, info, rows


def _suite_rademacher(o: SweepOptions) -> _Outcome:
    rec = _Recorder()
    rows: List[Dict[str, Any]] = []
    rounds_top = o.n_max if o.n_max is not None else 2000
    prop_top = (3 * rounds_top) // 2
    o.table.ensure(max(rounds_top, prop_top))

    for n in range(1, rounds_top + 1):
        got = rademacher_round(n, o.prec)
        want = p_exact(n, o.table)
        if got == want:
            rec.ok()
        else:
            rec.fail(f"round({n}) = {got}, off by {got - want}")
        if o.collect_rows:
            rows.append({"check": "round", "n": n, "passed": got == want})

    # the one-term truncation interval depends on (n, j) only through n - j,
    # so containment is decided once per distinct difference
    memo: Dict[int, Tuple[bool, float]] = {}
    worst = math.inf
    for n in range(1, prop_top + 1):
        for j in range(0, o.j_cap(prop21_j_top(n)) + 1):
            m = n - j
            if m < 2:
                continue
            hit = memo.get(m)
            if hit is None:
                enc = proposition21_interval(n, j, o.prec)
                value = p_exact(m, o.table)
                hit = (enc.contains(value), enc.containment_margin(value))
                memo[m] = hit
                if o.collect_rows:
                    rows.append(
                        {"check": "one-term-truncation", "m": m,
                         "contained": hit[0], "margin": hit[1]}
                    )
            contained, margin = hit
            worst = min(worst, margin)
            if contained:
                rec.ok()
            else:
                rec.fail(f"p({m}) escapes its one-term truncation interval")

    info = {
        "rounds_top": rounds_top,
        "truncation_top": prop_top,
        "worst_truncation_margin": worst,
    }
    return rec, info, rows


def _suite_containment_ratio(o: SweepOptions) -> _Outcome:
    rec = _Recorder()
    rows: List[Dict[str, Any]] = []
    top = o.n_max if o.n_max is not None else 5000
    o.table.ensure(top)
    worst = math.inf
    max_c = Fraction(0)
    max_c_at: Optional[Tuple[int, int]] = None
    for n in range(14, top + 1):
        pn = p_exact(n, o.table)
        for j in range(0, o.j_cap(ratio_j_top(n)) + 1):
            est = ratio_interval(n, j, o.prec)
            enc = est.product
            exact = Fraction(p_exact(n - j, o.table), pn)
            contained = enc.contains(exact)
            margin = enc.containment_margin(exact)
            worst = min(worst, margin)
            mid = enc.midpoint()
            c_val = None
            if mid:
                c = (enc.width() / 2 / abs(mid)) * est.index.N / RATIO_RADIUS_MASS
                c_val = float(c)
                if c > max_c:
                    max_c, max_c_at = c, (n, j)
            if contained:
                rec.ok()
            else:
                rec.fail(f"ratio({n}, {j}): exact value escapes the enclosure")
            if o.collect_rows:
                rows.append(
                    {"n": n, "j": j, "contained": contained, "margin": margin,
                     "width_constant": c_val}
                )
    if max_c > 2:
        rec.fail(
            f"relative width constant {float(max_c):.4f} at {max_c_at} exceeds 2"
        )
    info = {
        "n_top": top,
        "worst_margin": worst,
        "max_width_constant": float(max_c),
        "max_width_constant_at": str(max_c_at),
    }
    return rec, info, rows


def _suite_containment_fjn(o: SweepOptions) -> _Outcome:
    rec = _Recorder()
    rows: List[Dict[str, Any]] = []
    top = o.n_max if o.n_max is not None else 5000
    o.table.ensure(top)
    worst = math.inf
    min_lower = Fraction(10)
    for n in range(14, top + 1):
        pn = p_exact(n, o.table)
        for j in range(1, o.j_cap(fjn_j_top(n)) + 1):
            est = fjn_ratio_interval(n, j, o.prec)
            exact = Fraction(f_jn(n, j, o.table), pn)
            contained = est.total.contains(exact)
            margin = est.total.containment_margin(exact)
            worst = min(worst, margin)
            min_lower = min(min_lower, est.total.lo_fraction)
            if contained:
                rec.ok()
            else:
                rec.fail(f"fjn({n}, {j}): exact value escapes the enclosure")
            if o.collect_rows:
                rows.append(
                    {"n": n, "j": j, "contained": contained, "margin": margin}
                )
    info = {
        "n_top": top,
        "worst_margin": worst,
        "min_lower_endpoint": float(min_lower),
    }
    return rec, info, rows


def _suite_convexity(o: SweepOptions) -> _Outcome:
    rec = _Recorder()
    rows: List[Dict[str, Any]] = []
    top = o.n_max if o.n_max is not None else 10_000
    inj_top = min(top, 2000)
    o.table.ensure(max(top, inj_top))

    # n <= 13 has no analytic license; every case must settle exactly
    for n in range(2, min(13, top) + 1):
        for j in range(1, o.j_cap(n // 2) + 1):
            cert = convexity_certificate(n, j, o.prec, o.table)
            if cert.holds and cert.kind is CertificateKind.EXACT:
                rec.ok()
            else:
                rec.fail(f"convexity({n}, {j}): holds={cert.holds}, kind={cert.kind.value}")

    licensed = 0
    analytic = 0
    for n in range(14, top + 1):
        for j in range(1, o.j_cap(fjn_j_top(n)) + 1):
            cert = convexity_certificate(n, j, o.prec, o.table)
            licensed += 1
            if cert.kind is CertificateKind.ANALYTIC:
                analytic += 1
            if cert.holds:
                rec.ok()
            else:
                rec.fail(f"convexity({n}, {j}) does not hold")
            if o.collect_rows:
                rows.append({"n": n, "j": j, "kind": cert.kind.value, "holds": cert.holds})

    fraction_analytic = analytic / licensed if licensed else 0.0

    for n in range(0, inj_top + 1):
        for j in range(1, o.j_cap(20) + 1):
            for ell in range(0, 21):
                if (n, j, ell) == INJECTION_COUNTEREXAMPLE:
                    continue
                if injection_inequality(n, j, ell, o.table):
                    rec.ok()
                else:
                    rec.fail(f"injection inequality fails at (n, j, ell) = ({n}, {j}, {ell})")

    map_checks = 0
    for n in range(6, min(inj_top, 30) + 1, 3):
        for j in (1, 2, 3, 5):
            for ell in (0, j, j + 2):
                if ell >= n:
                    continue
                map_checks += 1
                mc = injection_map_check(n, j, ell)
                if mc.injective and mc.preserves_avoidance:
                    rec.ok()
                else:
                    rec.fail(
                        f"shift map at (n, j, ell) = ({n}, {j}, {ell}): "
                        f"injective={mc.injective}, preserves={mc.preserves_avoidance}"
                    )

    info = {
        "n_top": top,
        "licensed_cases": licensed,
        "analytic_cases": analytic,
        "analytic_fraction": fraction_analytic,
        "analytic_target": 0.9,
        "analytic_target_met": fraction_analytic >= 0.9,
        "injection_top": inj_top,
        "unguarded_origin_triple": str(INJECTION_COUNTEREXAMPLE),
        "unguarded_origin_holds": injection_inequality(*INJECTION_COUNTEREXAMPLE, o.table),
        "map_instances": map_checks,
    }
    return rec, info, rows


def _suite_krank(o: SweepOptions) -> _Outcome:
    rec = _Recorder()
    rows: List[Dict[str, Any]] = []
    top = o.n_max if o.n_max is not None else 500
    o.table.ensure(max(top, 31))

    for n in range(4, min(30, top) + 1):
        for m in range(n // 2 + 1, n + 2):
            got = krank_boundary_value(2, m, n, o.table)
            want = dyson_rank_count(n, m)
            if got == want:
                rec.ok()
            else:
                rec.fail(f"rank count at (m, n) = ({m}, {n}): {got} != {want}")

    # both enclosures and both exact values depend only on ell' = n - k - m,
    # so each distinct difference is decided once and replayed per (k, m, n)
    memo: Dict[int, Tuple[bool, float, bool, float]] = {}
    worst_ratio = math.inf
    worst_diff = math.inf
    for k in range(1, 6):
        for n in range(2 * k + 33, top + 1):
            for m in range(n // 2 + 1, n - k - 16 + 1):
                lp = n - k - m
                hit = memo.get(lp)
                if hit is None:
                    denom = p_exact(lp + 1, o.table)
                    ratio_exact = Fraction(
                        krank_boundary_value(k, m, n, o.table), denom
                    )
                    diff_exact = Fraction(
                        krank_boundary_value(k, m, n, o.table)
                        - krank_boundary_value(k, m + 1, n, o.table),
                        denom,
                    )
                    enc_r = krank_ratio_interval(k, m, n, o.prec)
                    enc_d = krank_diff_interval(k, m, n, o.prec)
                    hit = (
                        enc_r.contains(ratio_exact),
                        enc_r.containment_margin(ratio_exact),
                        enc_d.contains(diff_exact),
                        enc_d.containment_margin(diff_exact),
                    )
                    memo[lp] = hit
                    if o.collect_rows:
                        rows.append(
                            {"ell_prime": lp, "ratio_contained": hit[0],
                             "ratio_margin": hit[1], "diff_contained": hit[2],
                             "diff_margin": hit[3]}
                        )
                ok_r, margin_r, ok_d, margin_d = hit
                worst_ratio = min(worst_ratio, margin_r)
                worst_diff = min(worst_diff, margin_d)
                if ok_r:
                    rec.ok()
                else:
                    rec.fail(f"rank ratio at (k, m, n) = ({k}, {m}, {n}) not contained")
                if ok_d:
                    rec.ok()
                else:
                    rec.fail(f"rank difference at (k, m, n) = ({k}, {m}, {n}) not contained")

    # positivity of the difference enclosure's lower endpoint at the stated
    # floor ell' = 10^4; the numbers come out negative there (the radii are
    # far larger than the centered gap), which is reported, not failed
    probe = krank_diff_interval(1, 10_002, 20_003, o.prec)
    info = {
        "n_top": top,
        "distinct_differences": len(memo),
        "worst_ratio_margin": worst_ratio,
        "worst_diff_margin": worst_diff,
        "diff_lower_at_floor": float(probe.lo_fraction),
        "diff_positive_at_floor": probe.strictly_positive(),
    }
    return rec, info, rows


def _suite_nonkary(o: SweepOptions) -> _Outcome:
    rec = _Recorder()
    rows: List[Dict[str, Any]] = []
    top = o.n_max if o.n_max is not None else 10_000
    identity_top = min(top, 500)
    o.table.ensure(top)

    for n in range(2, identity_top + 1):
        for k in range(1, o.j_cap(n // 2) + 1):
            try:
                nonkary_diff_check(n, k, o.table)
                rec.ok()
            except AssertionError as exc:
                rec.fail(f"identity at (n, k) = ({n}, {k}): {exc}")

    positives = 0
    for n in range(2, top + 1):
        for k in range(1, o.j_cap(fjn_j_top(n)) + 1):
            positives += 1
            if nonkary_diff_check(n, k, o.table):
                rec.ok()
            else:
                rec.fail(f"avoided-part count not increasing at (n, k) = ({n}, {k})")

    info = {"identity_top": identity_top, "n_top": top, "licensed_cases": positives}
    return rec, info, rows


def _ineq_case_task(args: Tuple[str, int, int]) -> InequalityResult:
    name, prec, seed = args
    return run_case(name, prec=prec, seed=seed)


def _run_inequality_cases(
    names: List[str], prec: int, seed: int
) -> List[InequalityResult]:
    workers = min(len(names), os.cpu_count() or 1)
    if workers > 1:
        try:
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(workers) as pool:
                return pool.map(
                    _ineq_case_task, [(name, prec, seed) for name in names]
                )
        except (ImportError, OSError, ValueError):
            pass
    return [run_case(name, prec=prec, seed=seed) for name in names]


def _point_str(point: Tuple) -> str:
    return "(" + ", ".join(fraction_str(x) for x in point) + ")"


def _suite_inequalities(o: SweepOptions) -> _Outcome:
    rec = _Recorder()
    if o.case is not None:
        _lookup(o.case)
        names = [o.case]
    else:
        names = [case.name for case in CASES]
    results = _run_inequality_cases(names, o.prec, o.seed)
    rows: List[Dict[str, Any]] = []
    min_margin: Optional[Fraction] = None
    min_case = ""
    for result in results:
        if result.passed:
            rec.ok()
        else:
            rec.fail(
                f"{result.name}: worst margin {float(result.worst_margin):.3e} "
                f"at {_point_str(result.worst_point)}"
            )
        if min_margin is None or result.worst_margin < min_margin:
            min_margin, min_case = result.worst_margin, result.name
        rows.append(
            {
                "case": result.name,
                "points": result.points,
                "worst_margin": float(result.worst_margin),
                "worst_margin_exact": fraction_str(result.worst_margin),
                "worst_point": _point_str(result.worst_point),
                "passed": result.passed,
            }
        )
    info = {
        "cases": len(results),
        "min_margin": float(min_margin) if min_margin is not None else None,
        "min_margin_case": min_case,
        "seed": o.seed,
    }
    return rec, info, rows


_SUITES: Dict[str, Callable[[SweepOptions], _Outcome]] = {
    "oracles": _suite_oracles,
    "rademacher": _suite_rademacher,
    "containment-ratio": _suite_containment_ratio,
    "containment-fjn": _suite_containment_fjn,
    "convexity": _suite_convexity,
    "krank": _suite_krank,
    "nonkary": _suite_nonkary,
    "inequalities": _suite_inequalities,
}


def run_suite(
    name: str,
    *,
    n_max: Optional[int] = None,
    j_max: Optional[int] = None,
    prec: int = DEFAULT_PRECISION,
    seed: int = DEFAULT_SEED,
    case: Optional[str] = None,
    collect_rows: bool = False,
    table: Optional[PartitionTable] = None,
) -> SuiteReport:
    """Run one named sweep and return its report."""
    runner = _SUITES.get(name)
    if runner is None:
        raise PreconditionError(
            f"unknown suite {name!r}; known: {', '.join(SUITE_NAMES)}"
        )
    if case is not None and name != "inequalities":
        raise PreconditionError("--case only applies to the inequalities suite")
    options = SweepOptions(
        n_max=n_max,
        j_max=j_max,
        prec=prec,
        seed=seed,
        case=case,
        collect_rows=collect_rows,
        table=table if table is not None else default_table(),
    )
    started = time.perf_counter()
    rec, info, rows = runner(options)
    rec.close()
    return SuiteReport(
        suite=name,
        cases=rec.cases,
        failures=rec.failures,
        info=info,
        rows=rows,
        seconds=time.perf_counter() - started,
    )
