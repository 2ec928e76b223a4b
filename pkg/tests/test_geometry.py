import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import hullwalk.geometry as geometry
from hullwalk import (
    CircleDrift,
    GaussianDrift,
    SeedSpec,
    TwoPointDegenerate,
    WalkPath,
    cauchy_perimeter,
    convex_hull,
    generate_walk,
    hull_perimeter,
    hull_vertices,
    range_function,
    range_profile,
    rotate,
    support_extrema,
    theta_grid,
    unit_vector,
)

SQRT2 = math.sqrt(2.0)


def walk_points(model, n, seed):
    path, _ = generate_walk(model, n, SeedSpec(seed))
    return path


# ---------------------------------------------------------------- hulls

def test_right_triangle_hull():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    summary = convex_hull(pts)
    assert summary.perimeter == pytest.approx(2.0 + SQRT2, abs=1e-12)
    # CCW from the lexicographic minimum.
    assert np.array_equal(summary.vertices, np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))


def test_single_point_hull():
    pts = np.zeros((5, 2))
    summary = convex_hull(pts)
    assert summary.perimeter == 0.0
    assert summary.vertices.shape == (1, 2)


def test_segment_perimeter_is_twice_length():
    pts = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [0.5, 0.0]])
    summary = convex_hull(pts)
    assert summary.vertices.shape == (2, 2)
    assert summary.perimeter == pytest.approx(4.0, abs=1e-12)
    assert hull_perimeter(np.array([[0.0, 0.0], [1.0, 0.0]])) == pytest.approx(2.0)


def test_collinear_boundary_points_dropped():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    mids = [(0.5, 0), (1, 0.5), (0.5, 1), (0, 0.5)]
    pts = np.array(square + mids, dtype=float)
    summary = convex_hull(pts)
    assert summary.vertices.shape == (4, 2)
    assert summary.perimeter == pytest.approx(4.0, abs=1e-12)


def test_vertices_are_input_points():
    rng = np.random.default_rng(5)
    pts = rng.standard_normal((300, 2))
    verts = hull_vertices(pts)
    rows = {tuple(p) for p in pts}
    assert all(tuple(v) in rows for v in verts)


def _all_inside(pts, verts):
    if verts.shape[0] < 3:
        return True
    m = verts.shape[0]
    for j in range(m):
        v0 = verts[j]
        v1 = verts[(j + 1) % m]
        e = v1 - v0
        r = pts - v0
        cr = e[0] * r[:, 1] - e[1] * r[:, 0]
        sc = (abs(e[0]) + abs(e[1])) * (np.abs(r[:, 0]) + np.abs(r[:, 1]))
        if not (cr >= -1e-8 * (sc + 1.0)).all():
            return False
    return True


def test_hull_contains_every_input_point():
    rng = np.random.default_rng(11)
    for _ in range(20):
        pts = rng.standard_normal((rng.integers(1, 400), 2)) * rng.uniform(0.1, 50)
        verts = hull_vertices(pts)
        assert _all_inside(pts, verts)


def test_hull_input_validation():
    with pytest.raises(ValueError, match="empty point set"):
        hull_vertices(np.empty((0, 2)))
    with pytest.raises(ValueError, match="non-finite input"):
        hull_vertices(np.array([[0.0, np.nan]]))
    with pytest.raises(ValueError, match=r"\(m, 2\)"):
        hull_vertices(np.zeros((3, 3)))


def test_prefilter_matches_unfiltered(monkeypatch):
    rng = np.random.default_rng(7)
    cases = [
        rng.standard_normal((500, 2)),
        np.cumsum(rng.choice([-1.0, 1.0], size=(400, 2)), axis=0),  # lattice walk
        np.round(rng.standard_normal((300, 2)) * 3),
    ]
    for pts in cases:
        filtered = hull_vertices(pts)
        monkeypatch.setattr(geometry, "_FILTER_MIN_POINTS", 10**9)
        direct = hull_vertices(pts)
        monkeypatch.undo()
        assert np.array_equal(filtered, direct)


def test_numba_kernel_matches_python_source():
    rng = np.random.default_rng(13)
    for _ in range(25):
        pts = rng.standard_normal((rng.integers(3, 200), 2))
        order = np.lexsort((pts[:, 1], pts[:, 0]))
        x = np.ascontiguousarray(pts[order, 0])
        y = np.ascontiguousarray(pts[order, 1])
        jit_idx = geometry._monotone_chain(x, y)
        py_idx = geometry._monotone_chain_impl(x, y)
        assert np.array_equal(jit_idx, py_idx)


def test_perimeter_monotone_as_path_grows():
    for seed, model in ((1, CircleDrift(0.3)), (2, TwoPointDegenerate())):
        path = walk_points(model, 120, seed)
        perims = [hull_perimeter(path.points[: k + 1]) for k in range(path.n + 1)]
        for a, b in zip(perims, perims[1:]):
            assert b >= a - 1e-9 * (1.0 + abs(a))


def test_translation_invariance():
    rng = np.random.default_rng(3)
    pts = rng.standard_normal((200, 2))
    base = hull_perimeter(pts)
    for shift in ([3.0, -7.0], [1e3, 2e3]):
        moved = hull_perimeter(pts + np.array(shift))
        assert moved == pytest.approx(base, rel=1e-10)


def test_rotation_invariance():
    rng = np.random.default_rng(4)
    pts = rng.standard_normal((200, 2))
    base = hull_perimeter(pts)
    for angle in (0.3, 1.2, 2.9, -0.7):
        assert hull_perimeter(rotate(pts, angle)) == pytest.approx(base, rel=1e-9)


# ---------------------------------------------------- support extrema

def test_support_extrema_horizontal_segment():
    path = WalkPath(np.array([[0.0, 0.0], [1.0, 0.0]]))
    ext = support_extrema(path, 0.0)
    assert (ext.max_projection, ext.min_projection) == (1.0, 0.0)
    assert (ext.argmax_index, ext.argmin_index) == (1, 0)
    ext = support_extrema(path, math.pi)
    assert (ext.max_projection, ext.min_projection) == (0.0, -1.0)
    assert (ext.argmax_index, ext.argmin_index) == (0, 1)


def test_support_extrema_axis_snap_at_half_pi():
    # cos(pi/2) is not exactly zero in floats; the snapped direction makes
    # lattice projections exact so ties resolve to the smallest index.
    assert unit_vector(math.pi / 2.0)[0] == 0.0
    path = WalkPath(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]))
    ext = support_extrema(path, math.pi / 2.0)
    assert ext.max_projection == 0.0
    assert ext.min_projection == 0.0
    assert ext.argmax_index == 0
    assert ext.argmin_index == 0


def test_support_extrema_sign_invariant():
    # S_0 = 0 forces max >= 0 >= min.
    path = walk_points(CircleDrift(0.4), 80, 9)
    for theta in np.linspace(0.0, math.pi, 17):
        ext = support_extrema(path, theta)
        assert ext.max_projection >= 0.0 >= ext.min_projection
        assert 0 <= ext.argmax_index <= path.n
        assert 0 <= ext.argmin_index <= path.n


def test_theta_domain_checked():
    path = WalkPath(np.array([[0.0, 0.0], [1.0, 0.0]]))
    for bad in (-0.1, math.pi + 0.1):
        with pytest.raises(ValueError, match=r"theta must lie in \[0, pi\]"):
            support_extrema(path, bad)


def test_walkpath_validation():
    with pytest.raises(ValueError, match="start at the origin"):
        WalkPath(np.array([[1.0, 0.0], [2.0, 0.0]]))
    with pytest.raises(ValueError, match="non-finite"):
        WalkPath(np.array([[0.0, 0.0], [np.inf, 0.0]]))
    with pytest.raises(ValueError, match="non-empty"):
        WalkPath(np.empty((0, 2)))
    assert WalkPath(np.zeros((1, 2))).n == 0


# ------------------------------------------------------- range function

def test_range_nonnegative_and_lipschitz():
    path = walk_points(GaussianDrift((0.2, 0.5), 0.8, 0.6), 150, 17)
    radius = float(np.hypot(path.points[:, 0], path.points[:, 1]).max())
    thetas = np.linspace(0.0, math.pi, 400)
    r = range_profile(path.points, thetas)
    assert (r >= 0.0).all()
    gaps = np.abs(np.diff(r))
    step = thetas[1] - thetas[0]
    assert gaps.max() <= 2.0 * radius * step + 1e-9


def test_range_profile_matches_scalar():
    path = walk_points(CircleDrift(0.1), 60, 23)
    thetas = theta_grid(64)
    prof = range_profile(path.points, thetas)
    scalar = np.array([range_function(path, t) for t in thetas])
    assert np.allclose(prof, scalar, rtol=0, atol=1e-12)


def test_theta_grid_shape():
    grid = theta_grid(8)
    assert grid.shape == (9,)
    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(math.pi)
    with pytest.raises(ValueError, match="grid_size must be at least 2"):
        theta_grid(1)


# --------------------------------------------------- Cauchy quadrature

def test_cauchy_unit_square():
    path = WalkPath(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
    assert abs(cauchy_perimeter(path, 1024) - 4.0) < 1e-5
    assert abs(cauchy_perimeter(path, 4096) - 4.0) < 1e-6


def test_cauchy_segment():
    path = WalkPath(np.array([[0.0, 0.0], [1.0, 0.0]]))
    assert abs(cauchy_perimeter(path, 1024) - 2.0) < 1e-5


def test_cauchy_single_point():
    assert cauchy_perimeter(WalkPath(np.zeros((1, 2))), 256) == 0.0


def test_cauchy_matches_hull_on_sampled_walks():
    for seed, model in enumerate((CircleDrift(0.2), CircleDrift(0.0), TwoPointDegenerate())):
        path = walk_points(model, 100, 31 + seed)
        quad = cauchy_perimeter(path, 4096)
        exact = hull_perimeter(path.points)
        assert quad == pytest.approx(exact, rel=1e-3)
        assert quad == pytest.approx(exact, rel=1e-5)  # typically far tighter


def test_cauchy_grid_validation():
    path = WalkPath(np.zeros((1, 2)))
    with pytest.raises(ValueError, match="grid_size must be at least 2"):
        cauchy_perimeter(path, 1)


# ------------------------------------------------- hypothesis properties

coord = st.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False)
increments_strategy = st.lists(st.tuples(coord, coord), min_size=1, max_size=50)


def _path_from(increment_list):
    inc = np.array(increment_list, dtype=np.float64)
    return WalkPath(np.vstack((np.zeros((1, 2)), np.cumsum(inc, axis=0))))


@settings(max_examples=60, deadline=None)
@given(increments_strategy)
def test_property_cauchy_within_documented_bound(increment_list):
    path = _path_from(increment_list)
    grid_size = 512
    radius = float(np.hypot(path.points[:, 0], path.points[:, 1]).max())
    bound = math.pi**2 * radius / (2.0 * grid_size)
    quad = cauchy_perimeter(path, grid_size)
    exact = hull_perimeter(path.points)
    assert abs(quad - exact) <= bound + 1e-9 * (1.0 + exact)


@settings(max_examples=60, deadline=None)
@given(increments_strategy)
def test_property_hull_contains_points_and_monotone(increment_list):
    path = _path_from(increment_list)
    verts = hull_vertices(path.points)
    assert _all_inside(path.points, verts)
    shorter = hull_perimeter(path.points[:-1]) if path.n >= 1 else 0.0
    full = hull_perimeter(path.points)
    assert full >= shorter - 1e-9 * (1.0 + abs(full))


@settings(max_examples=40, deadline=None)
@given(increments_strategy, st.floats(min_value=0.0, max_value=math.pi))
def test_property_range_bounded_by_diameter(increment_list, theta):
    path = _path_from(increment_list)
    r = range_function(path, theta)
    radius = float(np.hypot(path.points[:, 0], path.points[:, 1]).max())
    assert 0.0 <= r <= 2.0 * radius + 1e-9
