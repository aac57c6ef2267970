"""Deterministic, seedable planar Brownian motion on the unit time interval.

Randomness contract (pinned so the bitstream is reproducible):

* Bit generator: numpy Philox (4x64, 10 rounds), a counter-based generator
  keyed with ``key = [seed, replicate_index]`` as two uint64 words.  Distinct
  replicate indices give independent streams, so replicates can be generated
  in any order or in parallel with identical results.
* Normal variates: ``numpy.random.Generator.standard_normal`` (ziggurat
  rejection method) on that bit generator, drawn in float64.
* Draw order: one ``(2, n)`` block for the base level (row 0 = x increments,
  row 1 = y increments), then one ``(2, m)`` block per midpoint-refinement
  stage doubling m intervals to 2m.  Nothing else is drawn.
* Scaling: increments are ``z * sqrt(1/n)`` (scale applied to the draw,
  then cumulative-summed); midpoint noise at spacing ``dt = 1/m`` is
  ``z * (0.5 / sqrt(m))``, the conditional standard deviation of a bridge
  midpoint.

``sample_path(cfg)`` equals ``sample_path_levels(seed, r, [n])[n]`` bit for
bit.  Refinement keeps every existing point, so the functionals of the
refined path dominate those of the coarse path sample by sample; that
monotone coupling is what the step-level extrapolation relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .geometry import HullStats, Point2

_U64 = 2**64


@dataclass(frozen=True)
class PathConfig:
    """Identifies one discretized path: step count and stream key."""

    n_steps: int
    seed: int
    replicate_index: int = 0

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be at least 1")
        if not 0 <= self.seed < _U64:
            raise ValueError("seed must fit in uint64")
        if not 0 <= self.replicate_index < _U64:
            raise ValueError("replicate_index must be a nonnegative uint64")


@dataclass(frozen=True)
class BrownianPath:
    """Discretized path; point k sits at time k / n_steps.

    Coordinates are held as two float64 arrays of length n_steps + 1 with
    xs[0] = ys[0] = 0; the ``points`` property presents them as Point2
    values when object access is more convenient than array access.
    """

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        if self.xs.shape != self.ys.shape or self.xs.ndim != 1 or self.xs.shape[0] < 2:
            raise ValueError("need matching 1-d coordinate arrays, length >= 2")
        if self.xs[0] != 0.0 or self.ys[0] != 0.0:
            raise ValueError("paths start at the origin")
        if not (np.isfinite(self.xs).all() and np.isfinite(self.ys).all()):
            raise ValueError("path coordinates must be finite")

    @property
    def n_steps(self) -> int:
        return self.xs.shape[0] - 1

    @property
    def points(self) -> list[Point2]:
        return [Point2(float(x), float(y)) for x, y in zip(self.xs, self.ys)]


def _generator(seed: int, replicate_index: int) -> np.random.Generator:
    key = np.array([seed, replicate_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _validate_levels(levels: Sequence[int]) -> list[int]:
    lv = [int(n) for n in levels]
    if not lv or any(n < 1 for n in lv):
        raise ValueError("levels must be positive integers")
    for a, b in zip(lv, lv[1:]):
        if b <= a:
            raise ValueError("levels must be strictly increasing")
        q = b // a
        if a * q != b or q & (q - 1) != 0:
            raise ValueError("each level must be a power-of-two multiple of the previous")
    return lv


def _levels_arrays(
    seed: int, replicate_index: int, lv: list[int]
) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    # hot path used by the estimator: levels pre-validated, no wrapping
    rng = _generator(seed, replicate_index)
    n = lv[0]
    z = rng.standard_normal((2, n))
    scale = math.sqrt(1.0 / n)
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    xs[0] = 0.0
    ys[0] = 0.0
    np.cumsum(z[0] * scale, out=xs[1:])
    np.cumsum(z[1] * scale, out=ys[1:])

    out: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    if n in lv:
        out[n] = (xs, ys)
    while n < lv[-1]:
        noise = rng.standard_normal((2, n)) * (0.5 / math.sqrt(n))
        nxs = np.empty(2 * n + 1)
        nys = np.empty(2 * n + 1)
        nxs[0::2] = xs
        nys[0::2] = ys
        nxs[1::2] = 0.5 * (xs[:-1] + xs[1:]) + noise[0]
        nys[1::2] = 0.5 * (ys[:-1] + ys[1:]) + noise[1]
        xs, ys = nxs, nys
        n *= 2
        if n in lv:
            out[n] = (xs, ys)
    return out


def sample_path_levels(
    seed: int, replicate_index: int, levels: Sequence[int]
) -> dict[int, BrownianPath]:
    """One Brownian path sampled at several nested step counts.

    The coarsest level is drawn directly; each doubling inserts bridge
    midpoints, so every returned path is a refinement of the previous one
    (coarse points reappear bit-identically at even indices).
    """
    lv = _validate_levels(levels)
    PathConfig(lv[0], seed, replicate_index)  # validates the key
    return {
        n: BrownianPath(xs, ys)
        for n, (xs, ys) in _levels_arrays(seed, replicate_index, lv).items()
    }


def sample_path(config: PathConfig) -> BrownianPath:
    """Sample one path; a pure function of (seed, replicate_index, n_steps)."""
    return sample_path_levels(config.seed, config.replicate_index, [config.n_steps])[
        config.n_steps
    ]


def path_hull_stats(path: BrownianPath) -> HullStats:
    """Hull functionals of one path: diameter, perimeter, area, axis ranges."""
    d, p, a, r0, r90 = _kernels.hull_stats_xy(path.xs, path.ys)
    return HullStats(diameter=d, perimeter=p, area=a, range_x=r0, range_y=r90)
