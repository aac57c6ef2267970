"""Monte Carlo estimation of hull functionals over many Brownian paths.

Replicates are keyed Philox streams (see paths), so they can be computed
in any order or split across threads without changing a single bit of the
result: every replicate writes its own slot in a preallocated array and
the final reduction is numpy's fixed-shape pairwise sum.

Step levels are coupled: each replicate draws one Brownian path and
evaluates it at every requested discretization, with finer levels refining
the same path.  Sup-type functionals of a discrete path underestimate the
continuum value, and refinement only adds points, so the per-replicate
values are non-decreasing in the level.  The two finest levels feed a
Richardson-style extrapolation under an n^(-1/2) bias model; the result
is labelled model-based, not rigorous.
"""

from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .paths import _levels_arrays, _validate_levels, _generator

FUNCTIONALS = (
    "diameter",
    "perimeter",
    "area",
    "range",
    "max_two_ranges",
    "diameter_sq",
    "perimeter_sq",
)

DEFAULT_SEED = 1905


class AuditError(RuntimeError):
    """A per-sample inequality failed; the message pins the offender."""


@dataclass(frozen=True)
class EstimatorConfig:
    """What to estimate: sample size, discretization levels, stream seed."""

    n_paths: int
    step_levels: tuple[int, ...] = (1024, 4096, 16384)
    seed: int = DEFAULT_SEED
    functionals: tuple[str, ...] = ("diameter", "perimeter", "area", "range")

    def __post_init__(self):
        if self.n_paths < 100:
            raise ValueError("n_paths must be at least 100")
        object.__setattr__(self, "step_levels", tuple(int(n) for n in self.step_levels))
        _validate_levels(self.step_levels)
        for n in self.step_levels:
            if n & (n - 1) != 0:
                raise ValueError("step levels must be powers of two")
        bad = set(self.functionals) - set(FUNCTIONALS)
        if bad:
            raise ValueError(f"unknown functionals: {sorted(bad)}")
        # canonical order, duplicates dropped
        object.__setattr__(
            self,
            "functionals",
            tuple(f for f in FUNCTIONALS if f in set(self.functionals)),
        )


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample mean of one functional at one step level."""

    functional: str
    n_steps: int
    mean: float
    stderr: float
    ci95: tuple[float, float]
    n_paths: int
    extrapolated: Optional[float] = None
    extrapolated_stderr: Optional[float] = None

    def to_dict(self) -> dict:
        out = {
            "functional": self.functional,
            "n_steps": self.n_steps,
            "mean": self.mean,
            "stderr": self.stderr,
            "ci95": list(self.ci95),
            "n_paths": self.n_paths,
        }
        if self.extrapolated is not None:
            out["extrapolated"] = self.extrapolated
            out["extrapolated_stderr"] = self.extrapolated_stderr
        return out


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    n = values.shape[0]
    mean = float(np.sum(values) / n)
    if n > 1:
        var = float(np.sum((values - mean) ** 2) / (n - 1))
        se = math.sqrt(var / n)
    else:
        se = 0.0
    return mean, se


def _estimate_from(values, functional, n_steps, ext_series=None):
    mean, se = _mean_stderr(values)
    ext = ext_se = None
    if ext_series is not None:
        ext, ext_se = _mean_stderr(ext_series)
    return MonteCarloEstimate(
        functional=functional,
        n_steps=n_steps,
        mean=mean,
        stderr=se,
        ci95=(mean - 1.96 * se, mean + 1.96 * se),
        n_paths=values.shape[0],
        extrapolated=ext,
        extrapolated_stderr=ext_se,
    )


def _extrapolation_coeff(n_prev: int, n_fine: int) -> float:
    # remove a bias term proportional to n^(-1/2): for levels a factor of
    # 4 apart this reduces to 2*fine - prev
    inv_prev = 1.0 / math.sqrt(n_prev)
    inv_fine = 1.0 / math.sqrt(n_fine)
    return inv_fine / (inv_prev - inv_fine)


def _stats_row(xs, ys) -> tuple[float, float, float, float, float]:
    return _kernels.hull_stats_xy(xs, ys)


_EXTRACT = {
    "diameter": lambda d, l, a, r0, r90: d,
    "perimeter": lambda d, l, a, r0, r90: l,
    "area": lambda d, l, a, r0, r90: a,
    "range": lambda d, l, a, r0, r90: r0,
    "max_two_ranges": lambda d, l, a, r0, r90: r0 if r0 > r90 else r90,
    "diameter_sq": lambda d, l, a, r0, r90: d * d,
    "perimeter_sq": lambda d, l, a, r0, r90: l * l,
}


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        threads = os.cpu_count() or 1
    return max(1, int(threads))


def _fill_slots(config: EstimatorConfig, threads: Optional[int]) -> np.ndarray:
    """slots[f, level, replicate] for every requested functional."""
    funcs = config.functionals
    levels = list(config.step_levels)
    n = config.n_paths
    slots = np.empty((len(funcs), len(levels), n))

    def work(lo: int, hi: int) -> None:
        for rep in range(lo, hi):
            arrays = _levels_arrays(config.seed, rep, levels)
            for j, lvl in enumerate(levels):
                xs, ys = arrays[lvl]
                row = _stats_row(xs, ys)
                for i, f in enumerate(funcs):
                    slots[i, j, rep] = _EXTRACT[f](*row)

    nt = _resolve_threads(threads)
    if nt == 1:
        work(0, n)
    else:
        chunk = max(64, -(-n // (nt * 4)))
        spans = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
        with ThreadPoolExecutor(max_workers=nt) as pool:
            for fut in [pool.submit(work, lo, hi) for lo, hi in spans]:
                fut.result()
    return slots


def estimate(config: EstimatorConfig, threads: Optional[int] = None) -> list[MonteCarloEstimate]:
    """Per-functional, per-level estimates; finest level carries the
    extrapolated value when at least two levels were requested."""
    slots = _fill_slots(config, threads)
    levels = config.step_levels
    out = []
    for i, f in enumerate(config.functionals):
        for j, lvl in enumerate(levels):
            ext_series = None
            if j == len(levels) - 1 and len(levels) >= 2:
                c = _extrapolation_coeff(levels[-2], levels[-1])
                ext_series = slots[i, j] + c * (slots[i, j] - slots[i, j - 1])
            out.append(_estimate_from(slots[i, j], f, lvl, ext_series))
    return out


def estimate_max_two_ranges(
    config: EstimatorConfig, mode: str = "orthogonal", threads: Optional[int] = None
) -> MonteCarloEstimate:
    """Mean of max(X1, X2) for two independent range samples.

    mode "orthogonal": X1, X2 are the two axis ranges of one path (they
    are independent because the coordinates are).  mode "two_paths":
    X1, X2 are the x-ranges of two separate paths, drawn from replicate
    streams 2k and 2k+1.  Both estimate the same quantity; agreement is a
    consistency check of the independence claim.
    """
    if mode == "orthogonal":
        cfg = EstimatorConfig(
            n_paths=config.n_paths,
            step_levels=config.step_levels,
            seed=config.seed,
            functionals=("max_two_ranges",),
        )
        return estimate(cfg, threads)[-1]
    if mode != "two_paths":
        raise ValueError("mode must be 'orthogonal' or 'two_paths'")

    levels = list(config.step_levels)
    n = config.n_paths
    vals = np.empty((len(levels), n))

    def work(lo: int, hi: int) -> None:
        for rep in range(lo, hi):
            a = _levels_arrays(config.seed, 2 * rep, levels)
            b = _levels_arrays(config.seed, 2 * rep + 1, levels)
            for j, lvl in enumerate(levels):
                xa = a[lvl][0]
                xb = b[lvl][0]
                ra = float(xa.max() - xa.min())
                rb = float(xb.max() - xb.min())
                vals[j, rep] = ra if ra > rb else rb

    nt = _resolve_threads(threads)
    if nt == 1:
        work(0, n)
    else:
        chunk = max(64, -(-n // (nt * 4)))
        spans = [(lo, min(lo + chunk, n)) for lo in range(0, n, chunk)]
        with ThreadPoolExecutor(max_workers=nt) as pool:
            for fut in [pool.submit(work, lo, hi) for lo, hi in spans]:
                fut.result()

    ext_series = None
    if len(levels) >= 2:
        c = _extrapolation_coeff(levels[-2], levels[-1])
        ext_series = vals[-1] + c * (vals[-1] - vals[-2])
    return _estimate_from(vals[-1], "max_two_ranges", levels[-1], ext_series)


@dataclass(frozen=True)
class AuditReport:
    """Outcome of the per-sample inequality sweep."""

    n_paths: int
    step_levels: tuple[int, ...]
    n_checks: int
    violations: int
    d1_sq_mean: float
    d1_sq_stderr: float
    first_violation: Optional[dict] = field(default=None)

    def to_dict(self) -> dict:
        out = {
            "n_paths": self.n_paths,
            "step_levels": list(self.step_levels),
            "n_checks": self.n_checks,
            "violations": self.violations,
            "d1_sq_mean": self.d1_sq_mean,
            "d1_sq_stderr": self.d1_sq_stderr,
        }
        if self.first_violation is not None:
            out["first_violation"] = self.first_violation
        return out


def sandwich_audit(config: EstimatorConfig, threads: Optional[int] = None) -> AuditReport:
    """Check the exact per-sample inequalities on every generated path.

    For each path and level, with zero tolerance:

    * 2 * diameter <= perimeter <= pi * diameter  (hull has >= 2 vertices)
    * max(range_x, range_y) <= diameter <= sqrt(range_x^2 + range_y^2)

    These hold in exact arithmetic for any point set, and the pinned
    floating-point primitives preserve them.  Any violation raises
    AuditError naming (seed, replicate, level), enough to reproduce the
    offending path.
    """
    cfg = EstimatorConfig(
        n_paths=config.n_paths,
        step_levels=config.step_levels,
        seed=config.seed,
        functionals=("diameter", "perimeter", "range", "max_two_ranges", "diameter_sq"),
    )
    levels = list(cfg.step_levels)
    n = cfg.n_paths
    d_sq = np.empty(n)
    counters = {"checks": 0, "violations": 0}
    first: list[Optional[dict]] = [None]

    def check(rep, lvl, name, ok, values):
        counters["checks"] += 1
        if not ok:
            counters["violations"] += 1
            if first[0] is None:
                first[0] = {
                    "seed": cfg.seed,
                    "replicate_index": rep,
                    "n_steps": lvl,
                    "inequality": name,
                    "values": values,
                }

    def work(lo: int, hi: int) -> None:
        for rep in range(lo, hi):
            arrays = _levels_arrays(cfg.seed, rep, levels)
            for lvl in levels:
                xs, ys = arrays[lvl]
                d, l, _, r0, r90 = _stats_row(xs, ys)
                check(rep, lvl, "2*d <= perimeter", 2.0 * d <= l, {"d": d, "l": l})
                check(rep, lvl, "perimeter <= pi*d", l <= math.pi * d, {"d": d, "l": l})
                rmax = r0 if r0 > r90 else r90
                check(rep, lvl, "max(r0,r90) <= d", rmax <= d, {"r0": r0, "r90": r90, "d": d})
                rhs = math.sqrt(r0 * r0 + r90 * r90)
                check(rep, lvl, "d <= sqrt(r0^2+r90^2)", d <= rhs, {"d": d, "rhs": rhs})
                if lvl == levels[-1]:
                    d_sq[rep] = d * d

    # the counters make this sweep single-threaded by construction; the
    # audit is cheap relative to estimation, so nothing is lost
    work(0, n)

    mean, se = _mean_stderr(d_sq)
    report = AuditReport(
        n_paths=n,
        step_levels=cfg.step_levels,
        n_checks=counters["checks"],
        violations=counters["violations"],
        d1_sq_mean=mean,
        d1_sq_stderr=se,
        first_violation=first[0],
    )
    if report.violations:
        raise AuditError(
            "per-sample inequality violated: " + json.dumps(report.first_violation)
        )
    return report


def z_sup_cdf_mc(
    n_paths: int, n_steps: int, seed: int, xs: Sequence[float]
) -> list[tuple[float, float, float]]:
    """Empirical Pr(sup |projection| < x) over fresh keyed streams.

    Uses the x-coordinate of the pinned path construction (the projection
    of the planar path onto the first axis), drawn directly so only one
    coordinate's draws are spent.  Returns (x, p_hat, stderr) triples.
    The discrete supremum underestimates the continuum one, so p_hat is
    biased upward.
    """
    xs = sorted(float(v) for v in xs)
    counts = np.zeros(len(xs), dtype=np.int64)
    scale = math.sqrt(1.0 / n_steps)
    thresholds = np.asarray(xs)
    for rep in range(n_paths):
        rng = _generator(seed, rep)
        z = rng.standard_normal(n_steps)
        path = np.cumsum(z * scale)
        np.abs(path, out=path)
        sup = path.max()
        counts += sup < thresholds
    out = []
    for x, c in zip(xs, counts):
        p = c / n_paths
        se = math.sqrt(p * (1.0 - p) / n_paths)
        out.append((x, float(p), float(se)))
    return out


def estimates_to_csv(estimates: Sequence[MonteCarloEstimate]) -> str:
    """One row per functional and level; floats at 17 significant digits."""
    buf = io.StringIO()
    buf.write(
        "functional,n_steps,n_paths,mean,stderr,ci_low,ci_high,"
        "extrapolated,extrapolated_stderr\n"
    )
    for e in estimates:
        ext = f"{e.extrapolated:.17g}" if e.extrapolated is not None else ""
        ext_se = (
            f"{e.extrapolated_stderr:.17g}" if e.extrapolated_stderr is not None else ""
        )
        buf.write(
            f"{e.functional},{e.n_steps},{e.n_paths},{e.mean:.17g},"
            f"{e.stderr:.17g},{e.ci95[0]:.17g},{e.ci95[1]:.17g},{ext},{ext_se}\n"
        )
    return buf.getvalue()


def report_to_json(
    estimates: Sequence[MonteCarloEstimate],
    audit: Optional[AuditReport] = None,
    config: Optional[EstimatorConfig] = None,
) -> str:
    out: dict = {"estimates": [e.to_dict() for e in estimates]}
    if config is not None:
        out["config"] = {
            "n_paths": config.n_paths,
            "step_levels": list(config.step_levels),
            "seed": config.seed,
            "functionals": list(config.functionals),
        }
    if audit is not None:
        out["audit"] = audit.to_dict()
    return json.dumps(out, indent=2)
