"""Verification engine for inequalities between step functions and bounds.

pi and psi are right-continuous step functions, constant on [n, n+1) and
jumping only at integers, so checking an inequality against a continuous
bound for *all real x* in a range reduces to integer comparisons against the
bound's extreme over each unit slab.  Every supported bound shape is either
increasing or falls-then-rises through a single turning point, so the slab
extreme sits at a slab endpoint or at that one turning point:

* upper checks (f < B) compare f(n) against the slab infimum of B,
* lower checks (B < f) compare f(n) against the slab supremum B(n+1)/B(n).

Comparisons are guarded: a difference within the combined evaluation error
bound (bound rounding + psi summation error; pi is exact) is reported
AMBIGUOUS rather than silently decided either way.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import primes
from .bounds import BoundExpr, evaluate
from .errors import (
    CrossoverNotFoundError,
    DomainError,
    MonotonicityError,
    ResourceLimitError,
)
from .primes import DEFAULT_CAP, PSI_ERR_FACTOR

SCAN_SEGMENT = 1 << 20

_EPS = np.finfo(np.float64).eps


class Direction(Enum):
    UPPER_STRICT = "upper"  # f(x) < B(x) must hold
    LOWER_STRICT = "lower"  # B(x) < f(x) must hold


class Status(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    AMBIGUOUS = "AMBIGUOUS"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a range check.

    witness is the last violating point for FAIL and the closest-margin point
    otherwise; min_margin is the direction-adjusted difference there (positive
    means the inequality held with room, negative means violated).
    """

    status: Status
    witness: int | None
    min_margin: float
    points_checked: int
    ambiguous_points: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class CrossoverResult:
    """Smallest scanned n from which a relation holds onward.

    threshold may be hi+1 when the last scanned point still violates.
    """

    threshold: int
    last_failure: int | None
    sign_changes: int
    ambiguous_points: list[int] = field(default_factory=list)


@dataclass
class _SegmentSummary:
    points: int
    fail_count: int
    last_fail: int | None
    margin_at_last_fail: float
    min_diff: float
    min_diff_n: int
    ambiguous: list[int]
    first_state: int  # +1 pass, -1 fail, 0 no definite point
    last_state: int
    state_changes: int


def _segments(lo: int, hi: int):
    s = lo
    while s <= hi:
        yield s, min(s + SCAN_SEGMENT - 1, hi)
        s += SCAN_SEGMENT


def _classify(diff: np.ndarray, guard: np.ndarray, ns: np.ndarray,
              exact_pass: np.ndarray | None = None) -> _SegmentSummary:
    """Shared guarded classification of per-point margins."""
    fail = diff < -guard
    passing = diff > guard
    if exact_pass is not None:
        passing = passing | exact_pass
    amb = ~fail & ~passing

    margin = diff if exact_pass is None else np.where(exact_pass, np.inf, diff)
    min_idx = int(np.argmin(margin))
    fail_idx = np.nonzero(fail)[0]
    last_fail = int(ns[fail_idx[-1]]) if fail_idx.size else None
    margin_at_last_fail = float(diff[fail_idx[-1]]) if fail_idx.size else math.inf

    states = np.where(fail, -1, np.where(passing, 1, 0))
    definite = states[states != 0]
    if definite.size:
        first_state = int(definite[0])
        last_state = int(definite[-1])
        changes = int(np.count_nonzero(definite[1:] != definite[:-1]))
    else:
        first_state = last_state = changes = 0

    return _SegmentSummary(
        points=int(diff.size),
        fail_count=int(np.count_nonzero(fail)),
        last_fail=last_fail,
        margin_at_last_fail=margin_at_last_fail,
        min_diff=float(margin[min_idx]),
        min_diff_n=int(ns[min_idx]),
        ambiguous=[int(v) for v in ns[amb]],
        first_state=first_state,
        last_state=last_state,
        state_changes=changes,
    )


def _merge(summaries: list[_SegmentSummary]) -> _SegmentSummary:
    total = summaries[0]
    for seg in summaries[1:]:
        last_fail = seg.last_fail if seg.last_fail is not None else total.last_fail
        margin_lf = (
            seg.margin_at_last_fail if seg.last_fail is not None else total.margin_at_last_fail
        )
        if seg.min_diff < total.min_diff:
            min_diff, min_diff_n = seg.min_diff, seg.min_diff_n
        else:
            min_diff, min_diff_n = total.min_diff, total.min_diff_n
        changes = total.state_changes + seg.state_changes
        if total.last_state != 0 and seg.first_state != 0 and total.last_state != seg.first_state:
            changes += 1
        total = _SegmentSummary(
            points=total.points + seg.points,
            fail_count=total.fail_count + seg.fail_count,
            last_fail=last_fail,
            margin_at_last_fail=margin_lf,
            min_diff=min_diff,
            min_diff_n=min_diff_n,
            ambiguous=total.ambiguous + seg.ambiguous,
            first_state=total.first_state if total.first_state != 0 else seg.first_state,
            last_state=seg.last_state if seg.last_state != 0 else total.last_state,
            state_changes=changes,
        )
    return total


def _run_segments(work, segs, threads: int):
    if threads == 1 or len(segs) <= 1:
        return [work(seg) for seg in segs]
    workers = threads if threads > 0 else None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(work, segs))


def _scan_inequality(b: BoundExpr, direction: Direction, lo: int, hi: int,
                     *, use_psi: bool, cap: int, threads: int) -> _SegmentSummary:
    if not 2 <= lo <= hi:
        raise ValueError(f"need 2 <= lo <= hi, got [{lo}, {hi}]")
    if hi > cap:
        raise ResourceLimitError(
            f"scan end {hi} exceeds the scan cap {cap}; raise the cap to allow it"
        )
    b.check_domain(lo)
    try:
        turn = b.increase_start()
    except NotImplementedError as exc:
        raise MonotonicityError(
            f"bound {b.name!r} does not expose a monotone/single-minimum shape"
        ) from exc

    if use_psi:
        f_table = primes.psi_array(hi)
    else:
        f_table = primes.cumulative_pi(hi)

    turn_patch = None
    if direction is Direction.UPPER_STRICT:
        n0 = math.floor(turn)
        if lo <= n0 <= hi and turn > b.domain_start():
            res = evaluate(b, turn)
            turn_patch = (n0, res.value, res.abs_error_bound)

    def work(seg):
        s, e = seg
        xs = np.arange(s, e + 2, dtype=np.float64)
        logs = np.log(xs)
        vals, errs = b.values_with_error(xs, logs)
        err_b = np.maximum(errs[:-1], errs[1:])
        f_vals = f_table[s : e + 1]
        if direction is Direction.UPPER_STRICT:
            slab = np.minimum(vals[:-1], vals[1:])
            if turn_patch is not None and s <= turn_patch[0] <= e:
                i = turn_patch[0] - s
                slab[i] = min(slab[i], turn_patch[1])
                err_b[i] = max(err_b[i], turn_patch[2])
            diff = slab - f_vals
        else:
            slab = np.maximum(vals[:-1], vals[1:])
            diff = f_vals - slab
        guard = (err_b + PSI_ERR_FACTOR * f_vals) if use_psi else err_b
        return _classify(diff, guard, np.arange(s, e + 1, dtype=np.int64))

    summaries = _run_segments(work, list(_segments(lo, hi)), threads)
    return _merge(summaries)


def _to_verdict(out: _SegmentSummary) -> Verdict:
    if out.fail_count:
        return Verdict(
            Status.FAIL, out.last_fail, out.margin_at_last_fail, out.points, out.ambiguous
        )
    if out.ambiguous:
        return Verdict(
            Status.AMBIGUOUS, out.min_diff_n, out.min_diff, out.points, out.ambiguous
        )
    return Verdict(Status.PASS, out.min_diff_n, out.min_diff, out.points, [])


def verify_pi(b: BoundExpr, direction: Direction, lo: int, hi: int,
              *, cap: int = DEFAULT_CAP, threads: int = 1) -> Verdict:
    """Check the pi inequality over real x in [lo, hi+1) by integer reduction."""
    out = _scan_inequality(b, direction, lo, hi, use_psi=False, cap=cap, threads=threads)
    return _to_verdict(out)


def verify_psi(b: BoundExpr, direction: Direction, lo: int, hi: int,
               *, cap: int = DEFAULT_CAP, threads: int = 1) -> Verdict:
    """Check the psi inequality over real x in [lo, hi+1); guards include psi's
    accumulated summation error."""
    out = _scan_inequality(b, direction, lo, hi, use_psi=True, cap=cap, threads=threads)
    return _to_verdict(out)


def last_violation(b: BoundExpr, direction: Direction, lo: int, hi: int,
                   *, cap: int = DEFAULT_CAP, threads: int = 1) -> CrossoverResult:
    """Largest violating integer in range and the threshold right after it."""
    out = _scan_inequality(b, direction, lo, hi, use_psi=False, cap=cap, threads=threads)
    threshold = out.last_fail + 1 if out.last_fail is not None else lo
    return CrossoverResult(threshold, out.last_fail, out.state_changes, out.ambiguous)


def count_violations(b: BoundExpr, direction: Direction, lo: int, hi: int,
                     *, cap: int = DEFAULT_CAP, threads: int = 1) -> int:
    """Number of definitely violating integers in range."""
    out = _scan_inequality(b, direction, lo, hi, use_psi=False, cap=cap, threads=threads)
    return out.fail_count


def analytic_crossover(f: BoundExpr, g: BoundExpr, lo: int, hi: int,
                       *, threads: int = 1) -> CrossoverResult:
    """Smallest n in [lo, hi] with f(n) <= g(n) for every scanned point onward.

    Pure expression comparison; no prime data involved.  Exhaustive scan,
    recording sign alternations as evidence of single crossing.  An exact
    floating-point tie counts as satisfied (the relation is non-strict), which
    also covers comparing an expression against itself.
    """
    if not lo <= hi:
        raise ValueError(f"need lo <= hi, got [{lo}, {hi}]")
    f.check_domain(lo)
    g.check_domain(lo)

    def work(seg):
        s, e = seg
        xs = np.arange(s, e + 1, dtype=np.float64)
        logs = np.log(xs)
        fv, fe = f.values_with_error(xs, logs)
        gv, ge = g.values_with_error(xs, logs)
        diff = gv - fv
        return _classify(diff, fe + ge, np.arange(s, e + 1, dtype=np.int64),
                         exact_pass=diff == 0.0)

    summaries = _run_segments(work, list(_segments(lo, hi)), threads)
    out = _merge(summaries)
    if out.last_fail is None:
        return CrossoverResult(lo, None, out.state_changes, out.ambiguous)
    if out.last_fail >= hi:
        raise CrossoverNotFoundError(
            f"no n in [{lo}, {hi}] from which {f.name!r} <= {g.name!r} holds onward"
        )
    return CrossoverResult(out.last_fail + 1, out.last_fail, out.state_changes, out.ambiguous)


def verify_sandwich(lo: int, hi: int, *, cap: int = DEFAULT_CAP, threads: int = 1) -> Verdict:
    """Check psi(n) <= pi(n)*log(n) <= 2*psi(n) at every integer in [lo, hi].

    Comparisons are non-strict.  At n=2 both sides of the lower comparison are
    the same quantity (log 2), an exact tie by construction; that provable tie
    is admitted as a pass and excluded from margin bookkeeping, so min_margin
    reports the tightest genuinely decided point.
    """
    if not 2 <= lo <= hi:
        raise ValueError(f"need 2 <= lo <= hi, got [{lo}, {hi}]")
    if hi > cap:
        raise ResourceLimitError(
            f"scan end {hi} exceeds the scan cap {cap}; raise the cap to allow it"
        )
    counts = primes.cumulative_pi(hi)
    psis = primes.psi_array(hi)

    def work(seg):
        s, e = seg
        ns = np.arange(s, e + 1, dtype=np.int64)
        logs = np.log(ns.astype(np.float64))
        pi_log = counts[s : e + 1] * logs
        psi_vals = psis[s : e + 1]
        diff = np.minimum(pi_log - psi_vals, 2.0 * psi_vals - pi_log)
        guard = _EPS * (2.0 * np.abs(pi_log) + 8.0 * np.abs(psi_vals))
        exact_tie = (diff == 0.0) & (ns == 2)
        return _classify(diff, guard, ns, exact_pass=exact_tie)

    summaries = _run_segments(work, list(_segments(lo, hi)), threads)
    return _to_verdict(_merge(summaries))


def exp_threshold(m: float, C: float) -> float:
    """exp(m*C/(C-1)): the real solution of x/(log x - m) <= C*x/log x."""
    if not C > 1.0:
        raise DomainError(f"exp_threshold requires C > 1, got C={C}")
    return math.exp(m * C / (C - 1.0))
