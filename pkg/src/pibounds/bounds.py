"""The closed algebra of bound expressions under verification.

Four shapes cover everything the toolkit checks against pi(x) or psi(x):

* ScaledLog      B(x) = c * x / log(x)
* ShiftedLog     B(x) = x / (log(x) - shift)
* DusartSeries   B(x) = (x/log x) * (1 + 1/log x + k/log^2 x)
* PsiAffine      B(x) = slope*x + log2_coeff*log^2 x + log_coeff*log x + offset

All logs are natural.  Constants are constructed from their defining
formulas, never hardcoded as decimals, except where a decimal literal *is*
the definition (1.11, 2.51, ...).  Every evaluation returns a conservative
rounding-error bound alongside the value so scans can guard comparisons.

Each shape is either increasing on its whole domain or falls then rises
through a single minimum; `increase_start` exposes that turning point in
closed form (or by bisection of the closed-form derivative), which is what
makes the integer reduction in the scan module sound.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_error_bound: float


@dataclass(frozen=True)
class BoundExpr:
    """Base class; concrete shapes implement the vector kernel."""

    name: str
    valid_from: float

    #: open lower end of the mathematical domain (x must be strictly above)
    def domain_start(self) -> float:
        return 1.0

    def formula(self) -> str:
        raise NotImplementedError

    def values_with_error(self, xs: np.ndarray, logs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vector kernel: (values, conservative absolute error bounds)."""
        raise NotImplementedError

    def increase_start(self) -> float:
        """x* such that the expression decreases before x* and increases after.

        Returns domain_start() when the expression increases on its whole
        domain.
        """
        raise NotImplementedError

    # -- conveniences ------------------------------------------------------

    def check_domain(self, x: float) -> None:
        if not x > self.domain_start():
            raise DomainError(
                f"bound {self.name!r} is undefined at x={x}: requires x > {self.domain_start():g}"
            )

    def value(self, x: float) -> float:
        return evaluate(self, x).value


@dataclass(frozen=True)
class ScaledLog(BoundExpr):
    """B(x) = scale * x / log(x) for x > 1."""

    scale: float

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise ValueError("ScaledLog needs a positive scale")

    def formula(self) -> str:
        return f"{self.scale!r}*x/log(x)"

    def values_with_error(self, xs, logs):
        vals = self.scale * xs / logs
        return vals, (8.0 * _EPS) * np.abs(vals)

    def increase_start(self) -> float:
        return math.e


@dataclass(frozen=True)
class ShiftedLog(BoundExpr):
    """B(x) = x / (log(x) - shift) for log(x) > shift."""

    shift: float

    def domain_start(self) -> float:
        return math.exp(self.shift)

    def formula(self) -> str:
        return f"x/(log(x)-{self.shift!r})"

    def values_with_error(self, xs, logs):
        denom = logs - self.shift
        vals = xs / denom
        # log(x)'s ulp error is amplified by 1/denom when denom is small
        rel = _EPS * (4.0 + 2.0 * np.abs(logs) / np.abs(denom))
        return vals, rel * np.abs(vals)

    def increase_start(self) -> float:
        return math.exp(self.shift + 1.0)


@dataclass(frozen=True)
class DusartSeries(BoundExpr):
    """B(x) = (x/log x)(1 + 1/log x + k/log^2 x) for x > 1."""

    k: float

    def __post_init__(self) -> None:
        if not self.k > 0:
            raise ValueError("DusartSeries needs a positive k")

    def formula(self) -> str:
        return f"(x/log(x))*(1+1/log(x)+{self.k!r}/log(x)^2)"

    def values_with_error(self, xs, logs):
        t = 1.0 / logs
        vals = (xs * t) * (1.0 + t + self.k * t * t)
        return vals, (16.0 * _EPS) * np.abs(vals)

    def increase_start(self) -> float:
        return self._turn

    @cached_property
    def _turn(self) -> float:
        # derivative numerator in L = log x: N(L) = L^3 + (k-2)L - 3k,
        # strictly increasing where it matters; bisect for its root
        def num(L: float) -> float:
            return L * L * L + (self.k - 2.0) * L - 3.0 * self.k

        lo, hi = 1e-9, 10.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if num(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        return math.exp(hi)


@dataclass(frozen=True)
class PsiAffine(BoundExpr):
    """B(x) = slope*x + log2_coeff*log^2 x + log_coeff*log x + offset for x > 1."""

    slope: float
    log2_coeff: float
    log_coeff: float
    offset: float

    def __post_init__(self) -> None:
        if not self.slope > 0 or self.log2_coeff < 0:
            raise ValueError("PsiAffine needs slope > 0 and log2_coeff >= 0")

    def formula(self) -> str:
        return (
            f"{self.slope!r}*x+{self.log2_coeff!r}*log(x)^2"
            f"+{self.log_coeff!r}*log(x)+{self.offset!r}"
        )

    def values_with_error(self, xs, logs):
        t1 = self.slope * xs
        t2 = self.log2_coeff * logs * logs
        t3 = self.log_coeff * logs
        vals = t1 + t2 + t3 + self.offset
        errs = (4.0 * _EPS) * (np.abs(t1) + np.abs(t2) + np.abs(t3) + abs(self.offset))
        return vals, errs

    def increase_start(self) -> float:
        return self._turn

    @cached_property
    def _turn(self) -> float:
        # derivative sign is the sign of h(x) = slope*x + 2*log2_coeff*log x + log_coeff,
        # which is strictly increasing for slope > 0, log2_coeff >= 0
        def h(x: float) -> float:
            return self.slope * x + 2.0 * self.log2_coeff * math.log(x) + self.log_coeff

        if h(1.0) >= 0.0:
            return 1.0
        lo, hi = 1.0, 2.0
        while h(hi) < 0.0:
            hi *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if h(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        return hi


# ---------------------------------------------------------------------------
# constants and registry
# ---------------------------------------------------------------------------

def chebyshev_constants() -> tuple[float, float]:
    """(c1, c2) with c1 = log(2^(1/2) 3^(1/3) 5^(1/5) 30^(-1/30)), c2 = (6/5)c1."""
    c1 = (
        0.5 * math.log(2.0)
        + math.log(3.0) / 3.0
        + math.log(5.0) / 5.0
        - math.log(30.0) / 30.0
    )
    return c1, 6.0 * c1 / 5.0


def builtin_bounds() -> dict[str, BoundExpr]:
    """The named bound registry used by scans, claims and the CLI."""
    c1, c2 = chebyshev_constants()
    entries = [
        ScaledLog("cheb_lower", 30.0, c1),
        ScaledLog("cheb_upper", 96098.0, c2),
        ScaledLog("cheb_upper_2x", 30.0, 2.0 * c2),
        ScaledLog("unit_lower", 17.0, 1.0),
        ScaledLog("d1095", 284860.0, 1.095),
        ScaledLog("d125506", 17.0, 1.25506),
        DusartSeries("dusart_lower", 32299.0, 1.8),
        DusartSeries("dusart_upper", 355991.0, 2.51),
        ShiftedLog("pan_lower", 3299.0, 28.0 / 29.0),
        ShiftedLog("pan_upper", 4.0, 1.11),
        ShiftedLog("legendre_a", 1_000_000.0, 1.08366),
        PsiAffine("psi_upper", 30.0, c2, 5.0 / (4.0 * math.log(6.0)), 5.0 / 4.0, 1.0),
        PsiAffine("psi_lower", 30.0, c1, 0.0, -5.0 / 2.0, -1.0),
    ]
    return {b.name: b for b in entries}


def evaluate(b: BoundExpr, x: float) -> EvalResult:
    """Evaluate b at a real x > its domain start."""
    b.check_domain(x)
    xs = np.array([float(x)], dtype=np.float64)
    logs = np.log(xs)
    vals, errs = b.values_with_error(xs, logs)
    return EvalResult(float(vals[0]), float(errs[0]))


def is_increasing_on(b: BoundExpr, lo: float, hi: float) -> bool:
    """True iff b's closed-form derivative is positive throughout [lo, hi]."""
    if not lo <= hi:
        raise ValueError(f"need lo <= hi, got [{lo}, {hi}]")
    b.check_domain(lo)
    return lo > b.increase_start()
