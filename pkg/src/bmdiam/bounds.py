"""Analytic side of the study: constants, the range density, tail bounds,
the two-factor lower-bound gain g(a, h) with its optimizer, and the
double integral giving the second moment of the hull perimeter.

Notation used throughout: X is the range (max minus min) of standard
one-dimensional Brownian motion over unit time, Z the supremum of its
absolute value over the same interval.  X dominates Z pathwise, which is
what turns the classical tail bounds for Z into usable bounds for X.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy import integrate, optimize

__all__ = [
    "ConvergenceError",
    "SeriesControl",
    "BoundsReport",
    "IntegralResult",
    "R_MIN",
    "R_MAX",
    "LOWER_BASIC",
    "UPPER_BASIC",
    "UPPER_IMPROVED",
    "D1_SQ_UPPER",
    "feller_density",
    "feller_cdf",
    "density_moment",
    "z_cdf_bounds",
    "g",
    "optimize_g",
    "lower_bound_chain",
    "mean_abs_diff_numeric",
    "lower_bound_mean_diff",
    "upper_bound_d1",
    "perimeter_sq_integrand",
    "perimeter_sq_integral",
    "perimeter_sq_detail",
    "bounds_report",
]


class ConvergenceError(RuntimeError):
    """A series or quadrature failed to reach the requested tolerance."""


# Below R_MIN the alternating series needs ever more terms, while the mass
# of the range distribution there is absurdly small: Pr(X < r) <= Pr(Z < r)
# <= (4/pi) exp(-pi^2/(8 r^2)), about 1e-214 at r = 0.05.  Evaluation is
# refused below the floor and the excluded mass is carried as an explicit
# error bound instead.
R_MIN = 0.05
# Beyond R_MAX the density underflows long before the Gaussian tail bound
# Pr(X > 12) <= 4 * Pr(N > 6) ~ 4e-9 even matters; the quadrature windows
# stop there and record the bound.
R_MAX = 12.0

LOWER_BASIC = math.sqrt(8.0 / math.pi)        # first moment of X
UPPER_BASIC = math.sqrt(2.0 * math.pi)
UPPER_IMPROVED = math.sqrt(8.0 * math.log(2.0))
D1_SQ_UPPER = 8.0 * math.log(2.0)             # second moment of X

_FRONT = 8.0 / math.sqrt(2.0 * math.pi)
_FOUR_OVER_PI = 4.0 / math.pi


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for the alternating density series."""

    tail_tolerance: float = 1e-12
    k_max: int = 500

    def __post_init__(self):
        if not 0.0 < self.tail_tolerance <= 1e-10:
            raise ValueError("tail_tolerance must be in (0, 1e-10]")
        if self.k_max < 100:
            raise ValueError("k_max must be at least 100")


_DEFAULT_CTL = SeriesControl()


def z_tail_mass_below(r: float) -> float:
    """Upper bound on Pr(X < r), valid for any r > 0 (X dominates Z)."""
    if r <= 0.0:
        return 0.0
    return min(1.0, _FOUR_OVER_PI * math.exp(-math.pi**2 / (8.0 * r * r)))


def feller_density(r: float, ctl: SeriesControl = _DEFAULT_CTL) -> float:
    """Density of the range X at r, by its alternating series.

    The series is summed until the next term is below ctl.tail_tolerance
    *and* the terms have started decreasing, at which point the classical
    alternating-series bound certifies the truncation error.  Values below
    R_MIN are refused: the series converges too slowly there and the
    distribution carries no mass (see z_tail_mass_below).
    """
    if r < R_MIN:
        raise ValueError(f"feller_density is evaluated only for r >= {R_MIN}")
    half_rsq = 0.5 * r * r
    total = 0.0
    sign = 1.0
    prev = math.inf
    for k in range(1, ctl.k_max + 1):
        term = k * k * math.exp(-k * k * half_rsq)
        total += sign * term
        nxt = (k + 1) * (k + 1) * math.exp(-(k + 1) * (k + 1) * half_rsq)
        if _FRONT * nxt < ctl.tail_tolerance and nxt <= term <= prev:
            # terms are decreasing here, so the remainder of the returned
            # (front-scaled) value is below nxt * _FRONT < tail_tolerance
            return max(_FRONT * total, 0.0)
        prev = term
        sign = -sign
    raise ConvergenceError(
        f"density series did not reach tolerance {ctl.tail_tolerance} "
        f"within k_max={ctl.k_max} terms at r={r}"
    )


def density_moment(power: int, ctl: SeriesControl = _DEFAULT_CTL) -> float:
    """Integral of r^power * density over [R_MIN, R_MAX] (power 0: total mass)."""
    val, _ = integrate.quad(
        lambda r: r**power * feller_density(r, ctl),
        R_MIN,
        R_MAX,
        epsabs=1e-12,
        epsrel=1e-12,
        limit=200,
    )
    return val


def feller_cdf(x: float, ctl: SeriesControl = _DEFAULT_CTL) -> float:
    """Pr(X <= x) by adaptive quadrature of the density.

    The mass below R_MIN (bounded by z_tail_mass_below(R_MIN), ~1e-214) is
    absorbed; the result is clamped into [0, 1].
    """
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if x <= R_MIN:
        return 0.0
    hi = min(x, R_MAX)
    val, _ = integrate.quad(
        lambda r: feller_density(r, ctl), R_MIN, hi,
        epsabs=1e-11, epsrel=1e-11, limit=200,
    )
    return min(max(val, 0.0), 1.0)


def z_cdf_bounds(x: float) -> tuple[float, float]:
    """Two-sided closed-form bounds on Pr(Z < x), clamped into [0, 1].

    The upper bound is the leading term of the reflection series for the
    sup-abs distribution; the lower bound subtracts the next term.
    """
    if x <= 0.0:
        raise ValueError("x must be positive")
    e1 = math.exp(-math.pi**2 / (8.0 * x * x))
    e9 = math.exp(-9.0 * math.pi**2 / (8.0 * x * x))
    upper = _FOUR_OVER_PI * e1
    lower = upper - (4.0 / (3.0 * math.pi)) * e9
    lower = min(max(lower, 0.0), 1.0)
    upper = min(max(upper, 0.0), 1.0)
    return lower, upper


def _g_factors(a, h):
    p_low = _FOUR_OVER_PI * np.exp(-math.pi**2 / (2.0 * a * a)) - (
        4.0 / (3.0 * math.pi)
    ) * np.exp(-9.0 * math.pi**2 / (2.0 * a * a))
    ah = a + h
    p_high = 1.0 - _FOUR_OVER_PI * np.exp(-math.pi**2 / (8.0 * ah * ah))
    return p_low, p_high


def g(a: float, h: float) -> float:
    """Lower-bound gain h * Pr(X <= a) * Pr(X >= a + h), with both
    probabilities replaced by their closed-form bounds.

    Evaluated literally; for extreme arguments a factor can leave (0, 1)
    and the product can go negative.  lower_bound_chain clamps the factors
    into [0, 1] before using the value as a bound.
    """
    if a <= 0.0 or h <= 0.0:
        raise ValueError("a and h must be positive")
    p_low, p_high = _g_factors(a, h)
    return float(h * p_low * p_high)


def _g_clamped(a: float, h: float) -> float:
    p_low, p_high = _g_factors(a, h)
    p_low = min(max(float(p_low), 0.0), 1.0)
    p_high = min(max(float(p_high), 0.0), 1.0)
    return h * p_low * p_high


_GRID_A_MAX = 4.0
_GRID_H_MAX = 2.0
_GRID_STEP = 0.01
_REFERENCE_AH = (1.492, 0.337)


def optimize_g(
    starts: Optional[Iterable[tuple[float, float]]] = None,
) -> tuple[float, float, float]:
    """Maximize g over a, h > 0; returns (a_star, h_star, g_star).

    Deterministic and seedless: a 0.01-step grid scan over (0,4] x (0,2]
    picks the basin, then Nelder-Mead polishes from the grid argmax and
    from the known good point (1.492, 0.337).  Extra refinement starts
    may be supplied; the best polished point wins.
    """
    av = np.arange(_GRID_STEP, _GRID_A_MAX + _GRID_STEP / 2, _GRID_STEP)
    hv = np.arange(_GRID_STEP, _GRID_H_MAX + _GRID_STEP / 2, _GRID_STEP)
    aa, hh = np.meshgrid(av, hv, indexing="ij")
    p_low, p_high = _g_factors(aa, hh)
    vals = hh * p_low * p_high
    i, j = np.unravel_index(np.argmax(vals), vals.shape)

    def negate(v):
        a, h = v
        if a <= 0.0 or h <= 0.0:
            return np.inf
        return -g(a, h)

    candidates = [(float(av[i]), float(hv[j])), _REFERENCE_AH]
    if starts is not None:
        candidates.extend((float(a), float(h)) for a, h in starts)

    best = None
    for start in candidates:
        res = optimize.minimize(
            negate,
            np.asarray(start, dtype=np.float64),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000},
        )
        cand = (float(res.x[0]), float(res.x[1]), float(-res.fun))
        if best is None or cand[2] > best[2]:
            best = cand
    return best


def lower_bound_chain(ctl: SeriesControl = _DEFAULT_CTL) -> float:
    """Improved lower bound on the expected diameter: sqrt(8/pi) plus the
    optimized gain, with the gain's probability factors clamped to [0, 1]."""
    a_star, h_star, _ = optimize_g()
    return LOWER_BASIC + _g_clamped(a_star, h_star)


def mean_abs_diff_numeric(ctl: SeriesControl = _DEFAULT_CTL) -> float:
    """E|X1 - X2| for independent copies of the range, by nested quadrature.

    Double integral of |x - y| f(x) f(y) over [R_MIN, R_MAX]^2; the inner
    integral is split at the kink y = x.  Omitted tail mass contributes
    less than 1e-6 (see R_MIN / R_MAX notes), far below the quadrature
    tolerance actually achieved.
    """

    def inner(x: float) -> float:
        val, _ = integrate.quad(
            lambda y: abs(x - y) * feller_density(y, ctl),
            R_MIN,
            R_MAX,
            points=(x,),
            epsabs=1e-11,
            epsrel=1e-11,
            limit=200,
        )
        return val * feller_density(x, ctl)

    val, err = integrate.quad(
        inner, R_MIN, R_MAX, epsabs=1e-10, epsrel=1e-10, limit=200
    )
    if err > 1e-6:
        raise ConvergenceError(f"mean_abs_diff quadrature error {err} too large")
    return val


def lower_bound_mean_diff(ctl: SeriesControl = _DEFAULT_CTL) -> float:
    """Sharper lower bound sqrt(8/pi) + E|X1 - X2| / 2 (max of two copies)."""
    return LOWER_BASIC + 0.5 * mean_abs_diff_numeric(ctl)


def upper_bound_d1() -> float:
    """Upper bound sqrt(8 log 2) on the expected diameter."""
    return UPPER_IMPROVED


def perimeter_sq_integrand(theta: float, u: float) -> float:
    """Integrand of the perimeter second-moment double integral.

    cos(theta) * cosh(u*theta)/sinh(u*pi/2) * tanh((2*theta + pi)*u/4),
    written with exp/expm1 so large u does not overflow, with the
    removable singularity at u = 0 replaced by its limit
    cos(theta) * (2*theta + pi) / (2*pi).
    """
    if u < 0.0:
        raise ValueError("u must be nonnegative")
    if u == 0.0:
        return math.cos(theta) * (2.0 * theta + math.pi) / (2.0 * math.pi)
    t = abs(theta)
    delta = math.pi / 2.0 - t
    ratio = (
        math.exp(-u * delta)
        * (1.0 + math.exp(-2.0 * u * t))
        / (-math.expm1(-u * math.pi))
    )
    return math.cos(theta) * ratio * math.tanh((2.0 * theta + math.pi) * u / 4.0)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    abs_error: float
    tail_bound: float


# the u integral decays like exp(-u * (pi/2 - |theta|)); after the
# substitution v = u * (pi/2 - |theta|) the tail beyond _V_MAX is below
# exp(-_V_MAX) times an O(1) prefactor, uniformly in theta
_V_MAX = 40.0


def perimeter_sq_detail(tolerance: float = 1e-8) -> IntegralResult:
    """Nested adaptive quadrature of the perimeter second-moment integral."""
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")
    inner_eps = tolerance / (64.0 * math.pi)
    outer_eps = tolerance / (16.0 * math.pi)
    inner_err_worst = 0.0

    def outer(theta: float) -> float:
        nonlocal inner_err_worst
        delta = math.pi / 2.0 - abs(theta)
        if delta <= 0.0:
            # the u integral converges to a finite limit as |theta| -> pi/2,
            # but the endpoint itself contributes nothing to the outer
            # integral; quadrature nodes never land exactly there anyway
            delta = 1e-300
        val, err = integrate.quad(
            lambda v: perimeter_sq_integrand(theta, v / delta),
            0.0,
            _V_MAX,
            epsabs=inner_eps * delta,
            epsrel=1e-12,
            limit=200,
        )
        if err / delta > inner_err_worst:
            inner_err_worst = err / delta
        return val / delta

    val, err = integrate.quad(
        outer,
        -math.pi / 2.0,
        math.pi / 2.0,
        epsabs=outer_eps,
        epsrel=1e-13,
        limit=200,
    )
    tail = 4.0 * math.pi**2 * 1.3 * math.exp(-_V_MAX)
    total_err = 4.0 * math.pi * (err + math.pi * inner_err_worst) + tail
    if total_err > tolerance:
        raise ConvergenceError(
            f"perimeter_sq quadrature error {total_err:.3e} exceeds {tolerance:.3e}"
        )
    return IntegralResult(value=4.0 * math.pi * val, abs_error=total_err, tail_bound=tail)


def perimeter_sq_integral(tolerance: float = 1e-8) -> float:
    """Value of the perimeter second-moment double integral."""
    return perimeter_sq_detail(tolerance).value


@dataclass(frozen=True)
class BoundsReport:
    """Every analytic constant and optimized bound in one bundle."""

    lower_basic: float
    upper_basic: float
    lower_improved: float
    upper_improved: float
    g_star: float
    a_star: float
    h_star: float
    d1_sq_upper: float
    d1_sq_lower: float
    perimeter_sq: float
    mean_abs_diff: float
    lower_mean_diff: float
    density_tail_mass_bound: float
    density_upper_tail_bound: float
    perimeter_sq_abs_error: float
    perimeter_sq_tail_bound: float
    series_tail_tolerance: float
    mc_estimate: Optional[dict] = field(default=None)

    def to_dict(self) -> dict:
        out = {
            "lower_basic": self.lower_basic,
            "upper_basic": self.upper_basic,
            "lower_improved": self.lower_improved,
            "upper_improved": self.upper_improved,
            "g_star": self.g_star,
            "a_star": self.a_star,
            "h_star": self.h_star,
            "d1_sq_upper": self.d1_sq_upper,
            "d1_sq_lower": self.d1_sq_lower,
            "perimeter_sq": self.perimeter_sq,
            "mean_abs_diff": self.mean_abs_diff,
            "lower_mean_diff": self.lower_mean_diff,
            "density_tail_mass_bound": self.density_tail_mass_bound,
            "density_upper_tail_bound": self.density_upper_tail_bound,
            "perimeter_sq_abs_error": self.perimeter_sq_abs_error,
            "perimeter_sq_tail_bound": self.perimeter_sq_tail_bound,
            "series_tail_tolerance": self.series_tail_tolerance,
        }
        if self.mc_estimate is not None:
            out["mc_estimate"] = self.mc_estimate
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def bounds_report(
    ctl: SeriesControl = _DEFAULT_CTL,
    mc_estimate: Optional[dict] = None,
    tolerance: float = 1e-8,
) -> BoundsReport:
    """Assemble all bounds and check their ordering before returning.

    mc_estimate, when given, is a mapping with at least mean/stderr/ci95
    for the extrapolated diameter estimate; the report then also checks
    that the Monte Carlo interval sits strictly between the improved
    bounds.
    """
    a_star, h_star, g_star = optimize_g()
    lower_improved = LOWER_BASIC + _g_clamped(a_star, h_star)
    mad = mean_abs_diff_numeric(ctl)
    lower_mean = LOWER_BASIC + 0.5 * mad
    psq = perimeter_sq_detail(tolerance)

    report = BoundsReport(
        lower_basic=LOWER_BASIC,
        upper_basic=UPPER_BASIC,
        lower_improved=lower_improved,
        upper_improved=UPPER_IMPROVED,
        g_star=g_star,
        a_star=a_star,
        h_star=h_star,
        d1_sq_upper=D1_SQ_UPPER,
        d1_sq_lower=psq.value / math.pi**2,
        perimeter_sq=psq.value,
        mean_abs_diff=mad,
        lower_mean_diff=lower_mean,
        density_tail_mass_bound=z_tail_mass_below(R_MIN),
        density_upper_tail_bound=4.0 * 9.865877e-10,  # 4 * Pr(N(0,1) > 6)
        perimeter_sq_abs_error=psq.abs_error,
        perimeter_sq_tail_bound=psq.tail_bound,
        series_tail_tolerance=ctl.tail_tolerance,
        mc_estimate=mc_estimate,
    )

    chain = (
        report.lower_basic <= report.lower_improved <= report.lower_mean_diff
        and report.upper_improved <= report.upper_basic
        and report.d1_sq_lower < report.d1_sq_upper
        and 2.0 * report.g_star <= report.mean_abs_diff
    )
    if not chain:
        raise RuntimeError("bounds ordering violated; report: " + report.to_json())
    if mc_estimate is not None:
        lo, hi = mc_estimate["ci95"]
        if not (report.lower_improved < lo and hi < report.upper_improved):
            raise RuntimeError(
                "Monte Carlo interval escapes the analytic bounds: "
                f"[{lo}, {hi}] vs ({report.lower_improved}, {report.upper_improved})"
            )
    return report
