"""Estimator harness: reproducibility, extrapolation, audit, serialization."""

import json
import math

import numpy as np
import pytest

from bmdiam import bounds
from bmdiam.estimator import (
    DEFAULT_SEED,
    EstimatorConfig,
    estimate,
    estimate_max_two_ranges,
    estimates_to_csv,
    report_to_json,
    sandwich_audit,
    z_sup_cdf_mc,
)

SMALL = EstimatorConfig(n_paths=300, step_levels=(64, 256), seed=11)


def test_config_validation():
    with pytest.raises(ValueError):
        EstimatorConfig(n_paths=50)
    with pytest.raises(ValueError):
        EstimatorConfig(n_paths=100, step_levels=(100, 200))  # not powers of two
    with pytest.raises(ValueError):
        EstimatorConfig(n_paths=100, step_levels=(256, 64))
    with pytest.raises(ValueError):
        EstimatorConfig(n_paths=100, functionals=("diameter", "volume"))
    cfg = EstimatorConfig(n_paths=100, functionals=("range", "diameter", "range"))
    assert cfg.functionals == ("diameter", "range")  # canonical order, deduped


def test_estimates_are_reproducible():
    a = estimate(SMALL)
    b = estimate(SMALL)
    assert len(a) == len(b) == 2 * 4  # four default functionals, two levels
    for ea, eb in zip(a, b):
        assert (ea.functional, ea.n_steps) == (eb.functional, eb.n_steps)
        assert ea.mean == eb.mean
        assert ea.stderr == eb.stderr
        assert ea.extrapolated == eb.extrapolated


def test_thread_count_does_not_change_results():
    a = estimate(SMALL, threads=1)
    b = estimate(SMALL, threads=3)
    for ea, eb in zip(a, b):
        assert ea.mean == eb.mean
        assert ea.stderr == eb.stderr
        assert ea.extrapolated == eb.extrapolated


def test_extrapolation_is_linear_in_level_means():
    ests = {(e.functional, e.n_steps): e for e in estimate(SMALL)}
    for f in ("diameter", "perimeter", "area", "range"):
        coarse = ests[(f, 64)]
        fine = ests[(f, 256)]
        assert coarse.extrapolated is None
        # levels a factor of 4 apart under a n^(-1/2) bias model: 2f - c
        want = 2.0 * fine.mean - coarse.mean
        assert fine.extrapolated == pytest.approx(want, rel=1e-12)
        assert fine.extrapolated > fine.mean  # bias is upward-correcting
        assert fine.extrapolated_stderr > 0.0


def test_estimate_values_are_plausible():
    cfg = EstimatorConfig(n_paths=2000, step_levels=(1024, 4096), seed=DEFAULT_SEED)
    ests = {(e.functional, e.n_steps): e for e in estimate(cfg)}
    d = ests[("diameter", 4096)]
    assert abs(d.extrapolated - 2.0) < 12.0 * d.extrapolated_stderr
    lo, hi = d.ci95
    assert lo < d.mean < hi
    assert hi - lo == pytest.approx(2 * 1.96 * d.stderr, rel=1e-12)
    ell = ests[("perimeter", 4096)]
    assert abs(ell.extrapolated - math.sqrt(8.0 * math.pi)) < 12.0 * ell.extrapolated_stderr


def test_max_two_ranges_modes_agree():
    cfg = EstimatorConfig(n_paths=4000, step_levels=(256, 1024), seed=5)
    orth = estimate_max_two_ranges(cfg, mode="orthogonal")
    pair = estimate_max_two_ranges(cfg, mode="two_paths")
    joint = math.hypot(orth.stderr, pair.stderr)
    # same functional, same discretization bias: any gap is pure noise
    assert abs(orth.mean - pair.mean) < 4.0 * joint
    with pytest.raises(ValueError):
        estimate_max_two_ranges(cfg, mode="both")


def test_max_two_ranges_matches_analytic_lower_bound():
    cfg = EstimatorConfig(n_paths=20_000, step_levels=(1024, 4096), seed=DEFAULT_SEED)
    est = estimate_max_two_ranges(cfg, mode="orthogonal")
    target = bounds.lower_bound_mean_diff()
    # 0.004 covers the extrapolation's residual discretization bias
    assert abs(est.extrapolated - target) < 3.0 * est.extrapolated_stderr + 0.004


def test_sandwich_audit_clean_run():
    cfg = EstimatorConfig(n_paths=400, step_levels=(256, 1024), seed=99)
    rep = sandwich_audit(cfg)
    assert rep.violations == 0
    assert rep.n_checks == 400 * 2 * 4
    assert rep.first_violation is None
    assert rep.d1_sq_mean > 0.0 and rep.d1_sq_stderr > 0.0
    assert bounds.D1_SQ_UPPER > rep.d1_sq_mean  # biased-down sample mean
    d = rep.to_dict()
    assert d["violations"] == 0 and d["step_levels"] == [256, 1024]


def test_z_sup_mc_matches_bounds():
    rows = z_sup_cdf_mc(3000, 1024, 71, [1.5, 0.8, 2.0])
    assert [r[0] for r in rows] == [0.8, 1.5, 2.0]  # sorted
    again = z_sup_cdf_mc(3000, 1024, 71, [0.8, 1.5, 2.0])
    assert rows == again
    for x, p, se in rows:
        lo, hi = bounds.z_cdf_bounds(x)
        assert 0.0 <= p <= 1.0
        assert se == pytest.approx(math.sqrt(p * (1 - p) / 3000), abs=1e-15)
        # discrete sup bias pushes p up; allow it plus noise above hi
        assert lo - 3.0 * se <= p <= hi + 3.0 * se + 0.02


def test_csv_schema():
    ests = estimate(SMALL)
    text = estimates_to_csv(ests)
    lines = text.strip().split("\n")
    assert lines[0] == (
        "functional,n_steps,n_paths,mean,stderr,ci_low,ci_high,"
        "extrapolated,extrapolated_stderr"
    )
    assert len(lines) == 1 + len(ests)
    first = lines[1].split(",")
    assert first[0] == "diameter"
    assert float(first[3]) == ests[0].mean  # 17 significant digits round-trip
    assert first[7] == "" and first[8] == ""  # no extrapolation on coarse level


def test_json_report_schema():
    ests = estimate(SMALL)
    audit = sandwich_audit(EstimatorConfig(n_paths=100, step_levels=(64,), seed=2))
    data = json.loads(report_to_json(ests, audit, SMALL))
    assert {e["functional"] for e in data["estimates"]} == {
        "diameter", "perimeter", "area", "range",
    }
    assert data["config"]["n_paths"] == 300
    assert data["audit"]["violations"] == 0
    fine = [e for e in data["estimates"] if e["n_steps"] == 256][0]
    assert "extrapolated" in fine and "ci95" in fine
