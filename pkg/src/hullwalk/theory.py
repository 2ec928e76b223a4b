"""Closed-form reference quantities for perimeter statistics: the variance
growth limit, the universal variance upper bound, the expected-perimeter
identity, the drift projection, and the i.i.d. approximation increments."""

import math
from dataclasses import dataclass

import numpy as np

from .walk import (
    CircleDrift,
    GaussianDrift,
    IncrementModel,
    SeedSpec,
    TwoPointDegenerate,
    generate_walk,
)


@dataclass(frozen=True)
class TheoryQuantities:
    """Per-model reference values; sigma_sq is None when the drift is zero."""

    mu: float
    sigma_sq: float | None
    ss_bound_coeff: float
    degenerate: bool


def sigma_squared(model: IncrementModel) -> float:
    """Limit of Var[L_n] / n: 4 * E[((Z - E Z) . E Z)^2] / |E Z|^2.

    Closed forms for the circle, two-point, and Gaussian laws; exact finite
    summation otherwise. Zero when the centered step is almost surely
    orthogonal to the drift (degenerate case). Undefined for zero drift.
    """
    mean = model.mean_vector
    mu_sq = float(mean @ mean)
    if mu_sq == 0.0:
        raise ValueError("sigma_squared undefined for zero drift")
    if isinstance(model, CircleDrift):
        return 2.0
    if isinstance(model, TwoPointDegenerate):
        return 0.0
    if isinstance(model, GaussianDrift):
        return 4.0 * model.sdev_along**2
    atom_list = model.atoms()
    if atom_list is None:
        raise TypeError(f"no sigma_squared rule for {type(model).__name__}")
    total = 0.0
    for a, p in atom_list:
        centered = (a.x - mean[0]) * mean[0] + (a.y - mean[1]) * mean[1]
        total += p * centered * centered
    return 4.0 * total / mu_sq


def snyder_steele_coefficient(model: IncrementModel) -> float:
    """Coefficient c in the universal bound Var[L_n] <= c * n, namely
    (pi^2 / 2) * (E|Z|^2 - |E Z|^2)."""
    mean = model.mean_vector
    spread = model.second_moment - float(mean @ mean)
    return (math.pi**2 / 2.0) * max(0.0, spread)


def theory_quantities(model: IncrementModel) -> TheoryQuantities:
    mu = model.drift_magnitude
    if mu == 0.0:
        sig = None
        degen = False
    else:
        sig = sigma_squared(model)
        degen = sig == 0.0
    return TheoryQuantities(
        mu=mu,
        sigma_sq=sig,
        ss_bound_coeff=snyder_steele_coefficient(model),
        degenerate=degen,
    )


def _swb_path_value(model: IncrementModel, n: int, seed: SeedSpec) -> float:
    """Coupled single-path estimate of 2 * sum_{i<=n} E|S_i| / i: all prefix
    terms are read off the same replicate path."""
    path, _ = generate_walk(model, n, seed)
    pts = path.points[1:]
    norms = np.hypot(pts[:, 0], pts[:, 1])
    return float(2.0 * np.sum(norms / np.arange(1, n + 1)))


def swb_expected_perimeter(model: IncrementModel, n: int, reps: int, seed: SeedSpec) -> float:
    """Monte Carlo value of the expected-perimeter identity
    E[L_n] = 2 * sum_{i=1}^{n} E|S_i| / i (coupled estimator, mean over reps)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    total = 0.0
    for r in range(reps):
        total += _swb_path_value(model, n, seed.replicate(r))
    return total / reps


def drift_projection(model: IncrementModel, theta: float) -> float:
    """Per-step drift of the projected walk S . e_theta in the canonical
    orientation (drift along e_{pi/2}): mu * sin(theta)."""
    theta = float(theta)
    if not 0.0 <= theta <= math.pi:
        raise ValueError("theta must lie in [0, pi]")
    return model.drift_magnitude * math.sin(theta)


def canonical_rotation_angle(model: IncrementModel) -> float:
    """Rotation that sends the drift direction onto e_{pi/2}."""
    mean = model.mean_vector
    if mean[0] == 0.0 and mean[1] == 0.0:
        raise ValueError("canonical orientation undefined for zero drift")
    return math.pi / 2.0 - math.atan2(mean[1], mean[0])


def y_increments(increments: np.ndarray, model: IncrementModel) -> np.ndarray:
    """Vectorized i.i.d. approximation increments 2 * (Z - E Z) . E Z / |E Z|;
    mean 0 and second moment sigma_squared(model)."""
    mean = model.mean_vector
    mu = float(np.hypot(mean[0], mean[1]))
    if mu == 0.0:
        raise ValueError("y increment undefined for zero drift")
    z = np.asarray(increments, dtype=np.float64)
    return 2.0 * ((z[:, 0] - mean[0]) * mean[0] + (z[:, 1] - mean[1]) * mean[1]) / mu


def y_increment(z, model: IncrementModel) -> float:
    """Scalar form of y_increments for a single step."""
    arr = np.asarray(z, dtype=np.float64).reshape(1, 2)
    return float(y_increments(arr, model)[0])


def normal_cdf(x: float) -> float:
    """Standard normal CDF via erfc; absolute error far below 1e-7."""
    return 0.5 * math.erfc(-float(x) / math.sqrt(2.0))
