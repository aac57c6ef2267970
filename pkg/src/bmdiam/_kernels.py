"""Hot kernels for hull extraction on large point sets.

Two interchangeable backends: numba @njit loops (default) and vectorized
numpy.  Selection happens once at import time; set BMDIAM_DISABLE_NUMBA=1
to force the numpy path.  Both backends perform the same elementwise IEEE
operations in the same order, so results are bit-identical; the equality
is asserted in tests and measured in benchmarks/bench_kernels.py.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


_env_off = os.environ.get("BMDIAM_DISABLE_NUMBA", "0").lower() not in ("0", "", "false")
USE_NUMBA = HAVE_NUMBA and not _env_off
BACKEND = "numba" if USE_NUMBA else "numpy"

# Rounding slop for the octagon inclusion test.  |cross| for coordinates of
# magnitude M carries at most a few ulp(4 M^2) of error; 64 ulp(M^2) clears
# that with room, and keeping a few extra candidate points is harmless.
_EPS_UNIT = 64.0 * 2.0 ** -52


# ---------------------------------------------------------------------------
# support scan: extreme points in the 8 compass/diagonal directions


def _support8_loop(xs, ys):
    n = xs.shape[0]
    x0 = xs[0]
    y0 = ys[0]
    xmin = x0; xmax = x0; ymin = y0; ymax = y0
    smin = x0 + y0; smax = smin
    dmin = x0 - y0; dmax = dmin
    ixmin = 0; ixmax = 0; iymin = 0; iymax = 0
    ismin = 0; ismax = 0; idmin = 0; idmax = 0
    for i in range(1, n):
        x = xs[i]
        y = ys[i]
        s = x + y
        d = x - y
        if x < xmin: xmin = x; ixmin = i
        if x > xmax: xmax = x; ixmax = i
        if y < ymin: ymin = y; iymin = i
        if y > ymax: ymax = y; iymax = i
        if s < smin: smin = s; ismin = i
        if s > smax: smax = s; ismax = i
        if d < dmin: dmin = d; idmin = i
        if d > dmax: dmax = d; idmax = i
    out = np.empty(8, dtype=np.int64)
    # counter-clockwise: W, SW, S, SE, E, NE, N, NW
    out[0] = ixmin
    out[1] = ismin
    out[2] = iymin
    out[3] = idmax
    out[4] = ixmax
    out[5] = ismax
    out[6] = iymax
    out[7] = idmin
    return out


def _support8_numpy(xs, ys):
    s = xs + ys
    d = xs - ys
    # argmin/argmax return the first occurrence, matching the strict
    # comparisons of the loop backend
    return np.array(
        [
            np.argmin(xs),
            np.argmin(s),
            np.argmin(ys),
            np.argmax(d),
            np.argmax(xs),
            np.argmax(s),
            np.argmax(ys),
            np.argmin(d),
        ],
        dtype=np.int64,
    )


# ---------------------------------------------------------------------------
# octagon inclusion: True where the point is strictly inside the support
# polygon by more than eps, i.e. provably not a hull vertex


def _strict_inside_loop(xs, ys, qx, qy, eps):
    n = xs.shape[0]
    m = qx.shape[0]
    out = np.empty(n, dtype=np.bool_)
    for i in range(n):
        px = xs[i]
        py = ys[i]
        inside = True
        for j in range(m):
            k = j + 1
            if k == m:
                k = 0
            cr = (qx[k] - qx[j]) * (py - qy[j]) - (qy[k] - qy[j]) * (px - qx[j])
            if cr <= eps:
                inside = False
                break
        out[i] = inside
    return out


def _strict_inside_numpy(xs, ys, qx, qy, eps):
    inside = np.ones(xs.shape[0], dtype=np.bool_)
    m = qx.shape[0]
    for j in range(m):
        k = (j + 1) % m
        cr = (qx[k] - qx[j]) * (ys - qy[j]) - (qy[k] - qy[j]) * (xs - qx[j])
        inside &= cr > eps
    return inside


# ---------------------------------------------------------------------------
# monotone chain on lexicographically sorted, deduplicated points


def _chain_hull_loop(xs, ys):
    n = xs.shape[0]
    if n <= 2:
        return np.arange(n, dtype=np.int64)
    lower = np.empty(n, dtype=np.int64)
    upper = np.empty(n, dtype=np.int64)
    nl = 0
    for i in range(n):
        while nl >= 2:
            a = lower[nl - 2]
            b = lower[nl - 1]
            cr = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a])
            if cr <= 0.0:
                nl -= 1
            else:
                break
        lower[nl] = i
        nl += 1
    nu = 0
    for i in range(n - 1, -1, -1):
        while nu >= 2:
            a = upper[nu - 2]
            b = upper[nu - 1]
            cr = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a])
            if cr <= 0.0:
                nu -= 1
            else:
                break
        upper[nu] = i
        nu += 1
    out = np.empty(nl + nu - 2, dtype=np.int64)
    out[: nl - 1] = lower[: nl - 1]
    out[nl - 1 :] = upper[: nu - 1]
    return out


# same algorithm; the numpy backend only differs upstream (vectorized
# prefilter), the chain itself runs on the few surviving points
_chain_hull_python = _chain_hull_loop


# ---------------------------------------------------------------------------
# metrics of a CCW convex polygon: diameter (rotating calipers),
# perimeter (edge sum), area (shoelace)


def _hull_metrics_loop(hx, hy):
    m = hx.shape[0]
    if m == 1:
        return 0.0, 0.0, 0.0
    if m == 2:
        dx = hx[1] - hx[0]
        dy = hy[1] - hy[0]
        d = np.sqrt(dx * dx + dy * dy)
        return d, d + d, 0.0

    perim = 0.0
    area2 = 0.0
    for i in range(m):
        k = i + 1
        if k == m:
            k = 0
        dx = hx[k] - hx[i]
        dy = hy[k] - hy[i]
        perim += np.sqrt(dx * dx + dy * dy)
        area2 += hx[i] * hy[k] - hx[k] * hy[i]
    area = 0.5 * abs(area2)

    best = 0.0
    j = 1
    for i in range(m):
        i1 = i + 1
        if i1 == m:
            i1 = 0
        ex = hx[i1] - hx[i]
        ey = hy[i1] - hy[i]
        # advance the far caliper while the edge-triangle area grows
        guard = 0
        cur = ex * (hy[j] - hy[i]) - ey * (hx[j] - hx[i])
        nxt = cur
        while guard <= m:
            j1 = j + 1
            if j1 == m:
                j1 = 0
            nxt = ex * (hy[j1] - hy[i]) - ey * (hx[j1] - hx[i])
            if nxt > cur:
                j = j1
                cur = nxt
                guard += 1
            else:
                break
        dx = hx[j] - hx[i]
        dy = hy[j] - hy[i]
        d = np.sqrt(dx * dx + dy * dy)
        if d > best:
            best = d
        dx = hx[j] - hx[i1]
        dy = hy[j] - hy[i1]
        d = np.sqrt(dx * dx + dy * dy)
        if d > best:
            best = d
        if nxt == cur:
            # parallel edges: the next caliper position is antipodal too
            j1 = j + 1
            if j1 == m:
                j1 = 0
            dx = hx[j1] - hx[i]
            dy = hy[j1] - hy[i]
            d = np.sqrt(dx * dx + dy * dy)
            if d > best:
                best = d
            dx = hx[j1] - hx[i1]
            dy = hy[j1] - hy[i1]
            d = np.sqrt(dx * dx + dy * dy)
            if d > best:
                best = d
    return best, perim, area


_hull_metrics_python = _hull_metrics_loop


# ---------------------------------------------------------------------------
# largest directional range over a table of unit directions


def _range_grid_loop(xs, ys, cs, sn):
    n = xs.shape[0]
    m = cs.shape[0]
    best = 0.0
    for k in range(m):
        c = cs[k]
        s = sn[k]
        p = c * xs[0] + s * ys[0]
        lo = p
        hi = p
        for i in range(1, n):
            p = c * xs[i] + s * ys[i]
            if p < lo:
                lo = p
            elif p > hi:
                hi = p
        r = hi - lo
        if r > best:
            best = r
    return best


def _range_grid_numpy(xs, ys, cs, sn):
    # elementwise multiply/add (no BLAS, no fused ops) so the projections
    # match the loop backend bit for bit; max reductions are order-exact
    proj = xs[:, None] * cs[None, :] + ys[:, None] * sn[None, :]
    return float((proj.max(axis=0) - proj.min(axis=0)).max())


# ---------------------------------------------------------------------------
# backend binding

if HAVE_NUMBA:
    _support8_nb = njit(cache=True, nogil=True)(_support8_loop)
    _strict_inside_nb = njit(cache=True, nogil=True)(_strict_inside_loop)
    _chain_hull_nb = njit(cache=True, nogil=True)(_chain_hull_loop)
    _hull_metrics_nb = njit(cache=True, nogil=True)(_hull_metrics_loop)
    _range_grid_nb = njit(cache=True, nogil=True)(_range_grid_loop)

IMPLS = {
    "numpy": {
        "support8": _support8_numpy,
        "strict_inside": _strict_inside_numpy,
        "chain_hull": _chain_hull_python,
        "hull_metrics": _hull_metrics_python,
        "range_grid": _range_grid_numpy,
    }
}
if HAVE_NUMBA:
    IMPLS["numba"] = {
        "support8": _support8_nb,
        "strict_inside": _strict_inside_nb,
        "chain_hull": _chain_hull_nb,
        "hull_metrics": _hull_metrics_nb,
        "range_grid": _range_grid_nb,
    }

_active = IMPLS[BACKEND]
support8 = _active["support8"]
strict_inside = _active["strict_inside"]
chain_hull = _active["chain_hull"]
hull_metrics = _active["hull_metrics"]
range_grid = _active["range_grid"]


# ---------------------------------------------------------------------------
# shared orchestration (identical for both backends)


def _keep_mask_from_support(xs, ys, sup, impl):
    qx = xs[sup]
    qy = ys[sup]
    # drop consecutive duplicate support points, wrap included
    keep = [0]
    for j in range(1, 8):
        if qx[j] != qx[keep[-1]] or qy[j] != qy[keep[-1]]:
            keep.append(j)
    if len(keep) > 1 and qx[keep[-1]] == qx[keep[0]] and qy[keep[-1]] == qy[keep[0]]:
        keep.pop()
    if len(keep) < 3:
        return np.ones(xs.shape[0], dtype=np.bool_)
    k = np.array(keep, dtype=np.int64)
    qx = np.ascontiguousarray(qx[k])
    qy = np.ascontiguousarray(qy[k])
    scale = max(
        abs(float(qx.max())), abs(float(qx.min())),
        abs(float(qy.max())), abs(float(qy.min())), 1e-300,
    )
    eps = _EPS_UNIT * scale * scale
    return ~impl["strict_inside"](xs, ys, qx, qy, eps)


def octagon_keep_mask(xs, ys, backend=None):
    """Candidate mask: True for every point that may be a hull vertex.

    Points strictly inside the octagon spanned by the 8 support points are
    dropped.  Support points themselves always survive, and the eps margin
    guarantees no true hull vertex is lost to rounding.  Degenerate support
    polygons (fewer than 3 distinct support points) disable filtering.
    """
    impl = IMPLS[backend] if backend else _active
    sup = impl["support8"](xs, ys)
    return _keep_mask_from_support(xs, ys, sup, impl)


def _hull_indices_from_mask(xs, ys, mask, impl):
    cand = np.flatnonzero(mask)
    cx = xs[cand]
    cy = ys[cand]
    order = np.lexsort((cy, cx))
    cx = cx[order]
    cy = cy[order]
    if cx.shape[0] > 1:
        dist = np.empty(cx.shape[0], dtype=np.bool_)
        dist[0] = True
        np.logical_or(cx[1:] != cx[:-1], cy[1:] != cy[:-1], out=dist[1:])
        sel = np.flatnonzero(dist)
        cx = np.ascontiguousarray(cx[sel])
        cy = np.ascontiguousarray(cy[sel])
        order = order[sel]
    h = impl["chain_hull"](cx, cy)
    return cand[order[h]]


def hull_indices_xy(xs, ys, backend=None):
    """Indices of hull vertices (CCW from the lexicographic minimum)."""
    impl = IMPLS[backend] if backend else _active
    sup = impl["support8"](xs, ys)
    mask = _keep_mask_from_support(xs, ys, sup, impl)
    return _hull_indices_from_mask(xs, ys, mask, impl)


def hull_stats_xy(xs, ys, backend=None):
    """(diameter, perimeter, area, range_x, range_y) of one point set.

    range_x / range_y come from the raw support scan, the rest from the
    rotating-calipers pass over the hull polygon.
    """
    impl = IMPLS[backend] if backend else _active
    sup = impl["support8"](xs, ys)
    r0 = xs[sup[4]] - xs[sup[0]]
    r90 = ys[sup[6]] - ys[sup[2]]
    mask = _keep_mask_from_support(xs, ys, sup, impl)
    hidx = _hull_indices_from_mask(xs, ys, mask, impl)
    hx = np.ascontiguousarray(xs[hidx])
    hy = np.ascontiguousarray(ys[hidx])
    d, p, a = impl["hull_metrics"](hx, hy)
    return float(d), float(p), float(a), float(r0), float(r90)
