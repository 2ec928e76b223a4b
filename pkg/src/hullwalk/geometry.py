"""Planar geometry for walk paths: convex hulls, directional support extrema,
and the support-function (Cauchy) integral for the hull perimeter.

Perimeter conventions for degenerate hulls: a single point has perimeter 0 and
a segment of length l has perimeter 2*l (the closed boundary traversed twice),
which is exactly what the support-function integral produces.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a normal dependency
    njit = None

# Relative tolerance for cross-product orientation tests where erring on the
# side of keeping a point is safe (the prefilter's strict-inside test). The
# hull chain itself pops on exact cross signs; see _monotone_chain_impl.
GEOM_REL_TOL = 1e-9

# Direction components with |cos| or |sin| below this are snapped to exact 0
# so lattice paths get exact projection ties at axis-aligned directions.
_AXIS_SNAP = 1e-15

# Octagon prefilter only pays off above this point count.
_FILTER_MIN_POINTS = 128


class Vec2(NamedTuple):
    x: float
    y: float


class SupportExtrema(NamedTuple):
    theta: float
    max_projection: float
    min_projection: float
    argmax_index: int
    argmin_index: int


@dataclass(frozen=True, eq=False)
class HullSummary:
    """Convex hull vertices in counterclockwise order plus boundary length."""

    vertices: np.ndarray
    perimeter: float


@dataclass(frozen=True, eq=False)
class WalkPath:
    """Partial-sum points S_0 .. S_n of a planar walk, S_0 = (0, 0)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError("path points must form a non-empty (m, 2) array")
        if not np.isfinite(pts).all():
            raise ValueError("non-finite input")
        if pts[0, 0] != 0.0 or pts[0, 1] != 0.0:
            raise ValueError("path must start at the origin")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0] - 1


def unit_vector(theta: float) -> np.ndarray:
    """Direction e_theta = (cos theta, sin theta), axis components snapped."""
    c = math.cos(theta)
    s = math.sin(theta)
    if abs(c) < _AXIS_SNAP:
        c = 0.0
    if abs(s) < _AXIS_SNAP:
        s = 0.0
    return np.array([c, s])


def _unit_vectors(thetas: np.ndarray) -> np.ndarray:
    e = np.column_stack((np.cos(thetas), np.sin(thetas)))
    e[np.abs(e) < _AXIS_SNAP] = 0.0
    return e


def theta_grid(grid_size: int) -> np.ndarray:
    """Uniform quadrature nodes on [0, pi]: grid_size panels, grid_size+1 nodes."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    return np.linspace(0.0, math.pi, grid_size + 1)


def rotate(points: np.ndarray, angle: float) -> np.ndarray:
    c = math.cos(angle)
    s = math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return np.asarray(points, dtype=np.float64) @ rot.T


def _monotone_chain_impl(xs, ys):
    # Points must be lexicographically sorted and deduplicated. Returns CCW
    # hull vertex indices. Pops use the exact cross-product sign (<= 0):
    # a tolerance band here can discard a point that extends a near-degenerate
    # sliver hull, losing containment; exact signs are always correct, and
    # exactly-collinear boundary points (cross == 0.0) still drop out.
    m = xs.shape[0]
    idx = np.empty(2 * m, np.int64)
    k = 0
    for i in range(m):
        while k >= 2:
            o = idx[k - 2]
            a = idx[k - 1]
            dx1 = xs[a] - xs[o]
            dy1 = ys[a] - ys[o]
            dx2 = xs[i] - xs[o]
            dy2 = ys[i] - ys[o]
            if dx1 * dy2 - dy1 * dx2 <= 0.0:
                k -= 1
            else:
                break
        idx[k] = i
        k += 1
    t = k + 1
    for i in range(m - 2, -1, -1):
        while k >= t:
            o = idx[k - 2]
            a = idx[k - 1]
            dx1 = xs[a] - xs[o]
            dy1 = ys[a] - ys[o]
            dx2 = xs[i] - xs[o]
            dy2 = ys[i] - ys[o]
            if dx1 * dy2 - dy1 * dx2 <= 0.0:
                k -= 1
            else:
                break
        idx[k] = i
        k += 1
    return idx[: k - 1].copy()


if njit is not None:
    _monotone_chain = njit(cache=True)(_monotone_chain_impl)
else:  # pragma: no cover
    _monotone_chain = _monotone_chain_impl


def _outer_mask(pts: np.ndarray) -> np.ndarray:
    """Keep-mask that discards points strictly inside the octagon spanned by
    the 8 directional extreme points. Dropped points are interior to the hull,
    so the hull of the survivors is the hull of the full set."""
    x = pts[:, 0]
    y = pts[:, 1]
    s = x + y
    d = x - y
    # Extreme points for outward directions at 0,45,...,315 degrees (CCW).
    corner_ids = [
        int(np.argmax(x)),
        int(np.argmax(s)),
        int(np.argmax(y)),
        int(np.argmin(d)),
        int(np.argmin(x)),
        int(np.argmin(s)),
        int(np.argmin(y)),
        int(np.argmax(d)),
    ]
    corners = []
    for cid in corner_ids:
        p = (pts[cid, 0], pts[cid, 1])
        if not corners or p != corners[-1]:
            corners.append(p)
    if len(corners) > 1 and corners[0] == corners[-1]:
        corners.pop()
    if len(corners) < 3:
        return np.ones(pts.shape[0], dtype=bool)
    inside = np.ones(pts.shape[0], dtype=bool)
    for j in range(len(corners)):
        v0x, v0y = corners[j]
        v1x, v1y = corners[(j + 1) % len(corners)]
        ex = v1x - v0x
        ey = v1y - v0y
        rx = x - v0x
        ry = y - v0y
        cr = ex * ry - ey * rx
        sc = (abs(ex) + abs(ey)) * (np.abs(rx) + np.abs(ry))
        inside &= cr > GEOM_REL_TOL * sc
    return ~inside


def _validated_points(points) -> np.ndarray:
    pts = np.ascontiguousarray(np.asarray(points, dtype=np.float64))
    if pts.size == 0:
        raise ValueError("empty point set")
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must form an (m, 2) array")
    if not np.isfinite(pts).all():
        raise ValueError("non-finite input")
    return pts


def hull_vertices(points) -> np.ndarray:
    """Convex hull vertices in CCW order starting at the lexicographic minimum.

    Collinear boundary points are dropped; a segment yields 2 vertices and a
    single repeated point yields 1.
    """
    pts = _validated_points(points)
    if pts.shape[0] > _FILTER_MIN_POINTS:
        pts = pts[_outer_mask(pts)]
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    x = pts[order, 0]
    y = pts[order, 1]
    keep = np.empty(x.shape[0], dtype=bool)
    keep[0] = True
    keep[1:] = (x[1:] != x[:-1]) | (y[1:] != y[:-1])
    x = x[keep]
    y = y[keep]
    if x.shape[0] <= 2:
        return np.column_stack((x, y))
    idx = _monotone_chain(x, y)
    return np.column_stack((x[idx], y[idx]))


def _cycle_length(vertices: np.ndarray) -> float:
    if vertices.shape[0] < 2:
        return 0.0
    diffs = np.diff(np.vstack((vertices, vertices[:1])), axis=0)
    return float(np.hypot(diffs[:, 0], diffs[:, 1]).sum())


def hull_perimeter(points) -> float:
    """Perimeter of the convex hull of a point set (fast path)."""
    return _cycle_length(hull_vertices(points))


def convex_hull(points) -> HullSummary:
    verts = hull_vertices(points)
    return HullSummary(vertices=verts, perimeter=_cycle_length(verts))


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= math.pi:
        raise ValueError("theta must lie in [0, pi]")
    return theta


def support_extrema(path: WalkPath, theta: float) -> SupportExtrema:
    """Exact directional extrema over path points; ties break to the smallest
    index (S_0 included, so max >= 0 >= min)."""
    theta = _check_theta(theta)
    proj = path.points @ unit_vector(theta)
    j_max = int(np.argmax(proj))
    j_min = int(np.argmin(proj))
    return SupportExtrema(
        theta=theta,
        max_projection=float(proj[j_max]),
        min_projection=float(proj[j_min]),
        argmax_index=j_max,
        argmin_index=j_min,
    )


def range_function(path: WalkPath, theta: float) -> float:
    """Directional range R(theta) = max_j S_j . e_theta - min_j S_j . e_theta."""
    ext = support_extrema(path, theta)
    return ext.max_projection - ext.min_projection


def range_profile(points: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """R(theta) for every theta, evaluated over raw path points.

    Chunked over directions to bound the projection matrix size.
    """
    pts = np.asarray(points, dtype=np.float64)
    thetas = np.asarray(thetas, dtype=np.float64)
    out = np.empty(thetas.shape[0])
    step = max(1, int(4_000_000 // max(1, pts.shape[0])))
    for lo in range(0, thetas.shape[0], step):
        e = _unit_vectors(thetas[lo : lo + step])
        proj = pts @ e.T
        out[lo : lo + step] = proj.max(axis=0) - proj.min(axis=0)
    return out


def cauchy_perimeter(path: WalkPath, grid_size: int = 1024) -> float:
    """Hull perimeter via the support-function integral of R over [0, pi],
    composite trapezoid rule on a uniform grid of `grid_size` panels.

    R is Lipschitz with constant 2*max_j |S_j|, so the quadrature error is at
    most pi^2 * max_j |S_j| / (2 * grid_size); in practice R is piecewise
    smooth and the error decays like grid_size**-2.
    """
    thetas = theta_grid(grid_size)
    r = range_profile(path.points, thetas)
    h = math.pi / grid_size
    return float(h * (r.sum() - 0.5 * (r[0] + r[-1])))
