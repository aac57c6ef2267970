"""Shared point-set factories for the geometry and kernel tests."""

import numpy as np
import pytest


def gaussian_cloud(rng, n, scale=1.0):
    pts = rng.standard_normal((n, 2)) * scale
    return pts[:, 0].copy(), pts[:, 1].copy()


def walk_cloud(rng, n, step=0.1):
    pts = np.cumsum(rng.standard_normal((n, 2)) * step, axis=0)
    return pts[:, 0].copy(), pts[:, 1].copy()


def disc_cloud(rng, n, radius=1.0):
    # uniform in the disc via rejection-free polar sampling
    r = radius * np.sqrt(rng.random(n))
    t = rng.random(n) * 2.0 * np.pi
    return r * np.cos(t), r * np.sin(t)


def lattice_cloud(rng, n, pitch=0.25):
    pts = np.round(rng.standard_normal((n, 2)) / pitch) * pitch
    return pts[:, 0].copy(), pts[:, 1].copy()


def circle_cloud(rng, n, vertices=8):
    # many duplicates on few circle vertices: degenerate-support stress
    k = rng.integers(0, vertices, n)
    t = 2.0 * np.pi * k / vertices
    return np.cos(t), np.sin(t)


CLOUD_MAKERS = (gaussian_cloud, walk_cloud, disc_cloud, lattice_cloud, circle_cloud)


def mixed_cloud(rng, trial):
    maker = CLOUD_MAKERS[trial % len(CLOUD_MAKERS)]
    n = int(rng.integers(1, 400))
    return maker(rng, n)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260814)
