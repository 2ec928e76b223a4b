import math

import numpy as np
import pytest

from hullwalk import (
    CircleDrift,
    FiniteSupport,
    GaussianDrift,
    SeedSpec,
    TwoPointDegenerate,
    canonical_rotation_angle,
    drift_projection,
    normal_cdf,
    point_mass,
    rotate,
    sigma_squared,
    snyder_steele_coefficient,
    swb_expected_perimeter,
    theory_quantities,
    y_increment,
    y_increments,
)

HALF_PI_SQ = math.pi**2 / 2.0


# ------------------------------------------------- variance growth limit

def test_sigma_squared_circle_is_two_for_any_drift():
    for mu in (0.2, 0.25, 0.36, 1.0, 5.0):
        assert sigma_squared(CircleDrift(mu)) == 2.0


def test_sigma_squared_two_point_vanishes():
    assert sigma_squared(TwoPointDegenerate()) == 0.0
    tq = theory_quantities(TwoPointDegenerate())
    assert tq.degenerate
    assert tq.sigma_sq == 0.0
    assert tq.mu == 1.0


def test_sigma_squared_gaussian():
    for b in (0.3, 0.7, 2.0):
        model = GaussianDrift((0.0, 0.9), b, 1.3)
        assert sigma_squared(model) == pytest.approx(4.0 * b * b, rel=1e-12)


def test_sigma_squared_finite_support_exact():
    # Hand computation: mean (1, 0); centered atoms (+-1, 0) dot the mean to
    # +-1, so sigma^2 = 4 * 1 / 1 = 4.
    model = FiniteSupport((((2.0, 0.0), 0.5), ((0.0, 0.0), 0.5)))
    assert sigma_squared(model) == pytest.approx(4.0, abs=1e-14)
    # Atoms (1, 0) / (0, 1) have fluctuation along (1, -1), orthogonal to the
    # drift (0.5, 0.5): a rotated copy of the degenerate two-point law.
    diag = FiniteSupport((((1.0, 0.0), 0.5), ((0.0, 1.0), 0.5)))
    assert sigma_squared(diag) == pytest.approx(0.0, abs=1e-14)
    assert theory_quantities(diag).degenerate


def test_sigma_squared_zero_drift_error():
    with pytest.raises(ValueError, match="sigma_squared undefined for zero drift"):
        sigma_squared(CircleDrift(0.0))
    tq = theory_quantities(CircleDrift(0.0))
    assert tq.sigma_sq is None
    assert not tq.degenerate


def test_sigma_squared_rotation_invariant():
    rng = np.random.default_rng(42)
    for _ in range(25):
        k = int(rng.integers(2, 5))
        pts = rng.normal(scale=2.0, size=(k, 2)).round(3) + np.array([1.0, 0.0])
        probs = rng.dirichlet(np.ones(k))
        probs = probs / probs.sum()
        model = FiniteSupport(tuple((tuple(p), w) for p, w in zip(pts, probs)))
        if model.drift_magnitude == 0.0:
            continue
        base = sigma_squared(model)
        for angle in (0.7, -1.9, 3.0):
            rot = sigma_squared(model.rotated(angle))
            assert rot == pytest.approx(base, rel=1e-12, abs=1e-12)


def test_sigma_squared_bounded_by_step_spread():
    # sigma^2 <= 4 (E|Z|^2 - |EZ|^2) over random finite-support laws.
    rng = np.random.default_rng(31)
    for _ in range(50):
        k = int(rng.integers(2, 6))
        pts = rng.normal(scale=1.5, size=(k, 2)) + rng.normal(scale=0.5, size=2)
        probs = rng.dirichlet(np.ones(k))
        model = FiniteSupport(tuple((tuple(p), w) for p, w in zip(pts, probs)))
        if model.drift_magnitude == 0.0:
            continue
        spread = model.second_moment - model.drift_magnitude**2
        assert sigma_squared(model) <= 4.0 * spread + 1e-10


# --------------------------------------------------- universal variance bound

def test_snyder_steele_values():
    assert snyder_steele_coefficient(TwoPointDegenerate()) == pytest.approx(HALF_PI_SQ)
    assert snyder_steele_coefficient(CircleDrift(0.2)) == pytest.approx(HALF_PI_SQ)
    assert snyder_steele_coefficient(CircleDrift(0.0)) == pytest.approx(HALF_PI_SQ)
    assert snyder_steele_coefficient(point_mass(2.0, -1.0)) == 0.0
    assert snyder_steele_coefficient(TwoPointDegenerate()) == pytest.approx(4.9348, abs=5e-5)


def test_snyder_steele_dominates_sigma_squared():
    for model in (CircleDrift(0.2), TwoPointDegenerate(), GaussianDrift((0.5, 0.0), 0.4, 0.9)):
        spread_bound = snyder_steele_coefficient(model) * 4.0 * 2.0 / math.pi**2
        assert spread_bound >= sigma_squared(model) - 1e-12


# ------------------------------------------------ expected-perimeter identity

def test_swb_point_mass_exactly_2n():
    for n in (1, 2, 7, 50):
        value = swb_expected_perimeter(point_mass(1.0, 0.0), n, reps=3, seed=SeedSpec(5))
        assert value == 2.0 * n  # exact float equality: each |S_i|/i is 1.0
    value = swb_expected_perimeter(point_mass(0.0, 2.5), 10, reps=2, seed=SeedSpec(5))
    assert value == pytest.approx(2.0 * 2.5 * 10, rel=1e-15)


def test_swb_argument_validation():
    with pytest.raises(ValueError, match="n must be"):
        swb_expected_perimeter(CircleDrift(0.1), 0, 5, SeedSpec(1))
    with pytest.raises(ValueError, match="reps must be"):
        swb_expected_perimeter(CircleDrift(0.1), 5, 0, SeedSpec(1))


def test_swb_deterministic():
    a = swb_expected_perimeter(CircleDrift(0.25), 50, 20, SeedSpec(9))
    b = swb_expected_perimeter(CircleDrift(0.25), 50, 20, SeedSpec(9))
    assert a == b


# ---------------------------------------------------------- drift projection

def test_drift_projection_values():
    model = CircleDrift(0.25)
    assert drift_projection(model, math.pi / 2.0) == pytest.approx(0.25, abs=1e-15)
    assert drift_projection(model, 0.0) == 0.0
    assert drift_projection(model, math.pi) == pytest.approx(0.0, abs=1e-12)
    assert drift_projection(model, math.pi / 6.0) == pytest.approx(0.125, abs=1e-12)
    with pytest.raises(ValueError, match="theta"):
        drift_projection(model, -0.01)


def test_canonical_rotation_angle():
    assert canonical_rotation_angle(point_mass(0.0, 1.0)) == pytest.approx(0.0)
    assert canonical_rotation_angle(point_mass(1.0, 0.0)) == pytest.approx(math.pi / 2.0)
    for mean in ((0.3, 0.4), (-1.0, 0.2), (0.0, -2.0)):
        model = GaussianDrift(mean, 0.5, 0.5)
        angle = canonical_rotation_angle(model)
        rotated = rotate(np.array([mean]), angle)[0]
        assert rotated[0] == pytest.approx(0.0, abs=1e-12)
        assert rotated[1] == pytest.approx(model.drift_magnitude, rel=1e-12)
    with pytest.raises(ValueError, match="zero drift"):
        canonical_rotation_angle(CircleDrift(0.0))


# ------------------------------------------------- i.i.d. approximation step

def test_y_increment_values():
    model = point_mass(1.0, 0.0)  # mean (1, 0)
    assert y_increment((2.0, 0.0), model) == pytest.approx(2.0, abs=1e-14)
    assert y_increment((1.0, 0.0), model) == 0.0
    assert y_increment((1.0, 1.0), TwoPointDegenerate()) == 0.0
    assert y_increment((1.0, -1.0), TwoPointDegenerate()) == 0.0
    with pytest.raises(ValueError, match="zero drift"):
        y_increment((1.0, 0.0), CircleDrift(0.0))


def test_y_increment_moments_match_sigma_squared():
    model = CircleDrift(0.3)
    rng = SeedSpec(2024).generator()
    draws = model.sample(rng, 100_000)
    ys = y_increments(draws, model)
    se_mean = ys.std(ddof=1) / math.sqrt(ys.size)
    assert abs(ys.mean()) <= 4.0 * se_mean
    y2 = ys**2
    se_second = y2.std(ddof=1) / math.sqrt(y2.size)
    assert abs(y2.mean() - sigma_squared(model)) <= 4.0 * se_second


# ------------------------------------------------------------- normal CDF

def test_normal_cdf_reference_values():
    # Frozen high-precision references (standard normal table values).
    refs = {
        0.0: 0.5,
        0.5: 0.6914624612740131,
        1.0: 0.8413447460685429,
        1.96: 0.9750021048517795,
        2.0: 0.9772498680518208,
        3.0: 0.9986501019683699,
    }
    for x, phi in refs.items():
        assert abs(normal_cdf(x) - phi) <= 1e-7
    assert abs(normal_cdf(1.96) - 0.9750) <= 1e-4


def test_normal_cdf_symmetry_and_monotone():
    xs = np.linspace(-6.0, 6.0, 121)
    values = [normal_cdf(x) for x in xs]
    for x in xs:
        assert normal_cdf(x) + normal_cdf(-x) == pytest.approx(1.0, abs=1e-14)
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert all(0.0 <= v <= 1.0 for v in values)
