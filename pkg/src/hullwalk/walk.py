"""Increment laws, deterministic seeded walk generation, and single-step
resampling of a walk (replace increment i, shift the suffix)."""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .geometry import Vec2, WalkPath, hull_perimeter, range_profile, rotate

_U64_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _U64_MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64_MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64_MASK
    return z ^ (z >> 31)


def derive_key(master_seed: int, *words: int) -> int:
    """Avalanche-mix (master_seed, words...) into one 64-bit stream key.

    Bijective in the last word for fixed preceding words, so distinct
    stream ids never collide under the same master seed.
    """
    key = _splitmix64(master_seed & _U64_MASK)
    for w in words:
        key = _splitmix64(key ^ (w & _U64_MASK))
    return key


def _check_u64(value: int, name: str) -> int:
    value = int(value)
    if not 0 <= value <= _U64_MASK:
        raise ValueError(f"{name} must fit in an unsigned 64-bit integer")
    return value


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus a stream id; replicate r conventionally uses stream r."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "master_seed", _check_u64(self.master_seed, "master_seed"))
        object.__setattr__(self, "stream_id", _check_u64(self.stream_id, "stream_id"))

    def key(self) -> int:
        return derive_key(self.master_seed, self.stream_id)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.key()))

    def draw_generator(self, k: int) -> np.random.Generator:
        """Generator keyed to a single draw index (counter style)."""
        return np.random.Generator(np.random.PCG64(derive_key(self.master_seed, self.stream_id, k)))

    def replicate(self, r: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, self.stream_id + r)


def _as_vec2(value, name: str) -> Vec2:
    v = Vec2(float(value[0]), float(value[1]))
    if not (math.isfinite(v.x) and math.isfinite(v.y)):
        raise ValueError(f"{name} must be finite")
    return v


class IncrementModel(ABC):
    """A law for one i.i.d. step Z of the walk."""

    @property
    @abstractmethod
    def mean(self) -> Vec2:
        """E[Z]."""

    @property
    @abstractmethod
    def second_moment(self) -> float:
        """E[|Z|^2]."""

    @abstractmethod
    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw `size` increments as a (size, 2) array."""

    @abstractmethod
    def describe(self) -> str:
        """Short descriptor for reports, e.g. 'circle(mu=0.2)'."""

    def atoms(self):
        """[(Vec2, prob), ...] when the law has finite support, else None."""
        return None

    def rotated(self, angle: float) -> "IncrementModel":
        raise ValueError("rotation not representable for this increment law")

    @property
    def mean_vector(self) -> np.ndarray:
        return np.array(self.mean, dtype=np.float64)

    @property
    def drift_magnitude(self) -> float:
        return float(np.hypot(*self.mean))


@dataclass(frozen=True)
class CircleDrift(IncrementModel):
    """Z = (mu, 0) + (cos Theta, sin Theta), Theta uniform on [0, 2*pi)."""

    mu: float = 0.0

    def __post_init__(self):
        mu = float(self.mu)
        if not (math.isfinite(mu) and mu >= 0.0):
            raise ValueError("mu must be finite and >= 0")
        object.__setattr__(self, "mu", mu)

    @property
    def mean(self) -> Vec2:
        return Vec2(self.mu, 0.0)

    @property
    def second_moment(self) -> float:
        return self.mu * self.mu + 1.0

    def sample(self, rng, size):
        # One uniform per step, scaled to an angle; no rejection.
        angles = rng.random(size) * (2.0 * math.pi)
        return np.column_stack((self.mu + np.cos(angles), np.sin(angles)))

    def describe(self) -> str:
        return f"circle(mu={self.mu:g})"


@dataclass(frozen=True)
class TwoPointDegenerate(IncrementModel):
    """Z is (1, 1) or (1, -1) with equal probability; drift (1, 0) and the
    fluctuation is orthogonal to it, so the variance growth limit is 0."""

    @property
    def mean(self) -> Vec2:
        return Vec2(1.0, 0.0)

    @property
    def second_moment(self) -> float:
        return 2.0

    def sample(self, rng, size):
        ys = np.where(rng.random(size) < 0.5, 1.0, -1.0)
        return np.column_stack((np.ones(size), ys))

    def atoms(self):
        return [(Vec2(1.0, 1.0), 0.5), (Vec2(1.0, -1.0), 0.5)]

    def rotated(self, angle: float) -> "FiniteSupport":
        return FiniteSupport(tuple((rotate(np.array(a), angle), p) for a, p in self.atoms()))

    def describe(self) -> str:
        return "two_point"


_PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class FiniteSupport(IncrementModel):
    """Z takes finitely many values; probabilities must sum to 1 within 1e-12."""

    atom_table: tuple

    def __post_init__(self):
        table = []
        total = 0.0
        for entry in self.atom_table:
            point, prob = entry
            prob = float(prob)
            if not (math.isfinite(prob) and prob >= 0.0):
                raise ValueError("atom probabilities must be finite and >= 0")
            table.append((_as_vec2(point, "atom"), prob))
            total += prob
        if not table:
            raise ValueError("finite-support law needs at least one atom")
        if abs(total - 1.0) > _PROB_SUM_TOL:
            raise ValueError(f"atom probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "atom_table", tuple(table))

    def _arrays(self):
        pts = np.array([a for a, _ in self.atom_table], dtype=np.float64)
        probs = np.array([p for _, p in self.atom_table], dtype=np.float64)
        return pts, probs

    @property
    def mean(self) -> Vec2:
        pts, probs = self._arrays()
        m = probs @ pts
        return Vec2(float(m[0]), float(m[1]))

    @property
    def second_moment(self) -> float:
        pts, probs = self._arrays()
        return float(probs @ (pts[:, 0] ** 2 + pts[:, 1] ** 2))

    def sample(self, rng, size):
        pts, probs = self._arrays()
        cum = np.cumsum(probs)
        cum[-1] = max(cum[-1], 1.0)  # guard float sum slightly below 1
        idx = np.searchsorted(cum, rng.random(size), side="right")
        return pts[idx]

    def atoms(self):
        return list(self.atom_table)

    def rotated(self, angle: float) -> "FiniteSupport":
        return FiniteSupport(tuple((rotate(np.array(a), angle), p) for a, p in self.atom_table))

    def describe(self) -> str:
        return "finite(" + ",".join(f"({a.x:g},{a.y:g})@{p:g}" for a, p in self.atom_table) + ")"


def point_mass(x: float, y: float) -> FiniteSupport:
    return FiniteSupport(((Vec2(float(x), float(y)), 1.0),))


@dataclass(frozen=True)
class GaussianDrift(IncrementModel):
    """Z = mean + N(0, sdev_along^2) * u + N(0, sdev_perp^2) * u_perp, where u
    is the unit drift direction (e_x when the mean is zero)."""

    mean_value: Vec2
    sdev_along: float
    sdev_perp: float

    def __post_init__(self):
        object.__setattr__(self, "mean_value", _as_vec2(self.mean_value, "mean"))
        for name in ("sdev_along", "sdev_perp"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0")
            object.__setattr__(self, name, v)

    def _frame(self):
        m = np.array(self.mean_value)
        norm = np.hypot(m[0], m[1])
        along = m / norm if norm > 0 else np.array([1.0, 0.0])
        perp = np.array([-along[1], along[0]])
        return along, perp

    @property
    def mean(self) -> Vec2:
        return self.mean_value

    @property
    def second_moment(self) -> float:
        m = self.mean_value
        return m.x * m.x + m.y * m.y + self.sdev_along**2 + self.sdev_perp**2

    def sample(self, rng, size):
        along, perp = self._frame()
        g = rng.standard_normal((size, 2))
        return (
            np.array(self.mean_value)
            + np.outer(g[:, 0] * self.sdev_along, along)
            + np.outer(g[:, 1] * self.sdev_perp, perp)
        )

    def rotated(self, angle: float) -> "GaussianDrift":
        return GaussianDrift(rotate(np.array(self.mean_value), angle), self.sdev_along, self.sdev_perp)

    def describe(self) -> str:
        m = self.mean_value
        return f"gaussian(mean=({m.x:g},{m.y:g}),along={self.sdev_along:g},perp={self.sdev_perp:g})"


@dataclass(frozen=True, eq=False)
class ResampleView:
    """Original increments plus one replacement: step `index` (1-based) is
    swapped for `replacement`, shifting every later partial sum."""

    base_increments: np.ndarray
    index: int
    replacement: Vec2

    def __post_init__(self):
        inc = np.ascontiguousarray(np.asarray(self.base_increments, dtype=np.float64))
        if inc.ndim != 2 or inc.shape[1] != 2:
            raise ValueError("increments must form an (n, 2) array")
        if not np.isfinite(inc).all():
            raise ValueError("non-finite input")
        idx = int(self.index)
        if not 1 <= idx <= inc.shape[0]:
            raise ValueError("resample index out of range")
        object.__setattr__(self, "base_increments", inc)
        object.__setattr__(self, "index", idx)
        object.__setattr__(self, "replacement", _as_vec2(self.replacement, "replacement"))

    @property
    def n(self) -> int:
        return self.base_increments.shape[0]


def _path_from_increments(increments: np.ndarray) -> WalkPath:
    pts = np.vstack((np.zeros((1, 2)), np.cumsum(increments, axis=0)))
    return WalkPath(pts)


def sample_increment(model: IncrementModel, seed: SeedSpec, k: int) -> Vec2:
    """The k-th single-draw increment for (model, seed); deterministic in k."""
    if k < 0:
        raise ValueError("draw index must be >= 0")
    row = model.sample(seed.draw_generator(k), 1)[0]
    return Vec2(float(row[0]), float(row[1]))


def generate_walk(model: IncrementModel, n: int, seed: SeedSpec):
    """n-step walk from the seeded stream; returns (WalkPath, increments)."""
    if n < 0:
        raise ValueError("step count must be >= 0")
    increments = model.sample(seed.generator(), n)
    increments = np.ascontiguousarray(np.asarray(increments, dtype=np.float64).reshape(n, 2))
    return _path_from_increments(increments), increments


def original_path(view: ResampleView) -> WalkPath:
    return _path_from_increments(view.base_increments)


def resample_path(view: ResampleView) -> WalkPath:
    """Walk with step `index` replaced: prefix partial sums are untouched and
    the suffix is shifted by (replacement - Z_index)."""
    increments = view.base_increments.copy()
    increments[view.index - 1] = view.replacement
    return _path_from_increments(increments)


def perimeter_delta(view: ResampleView) -> float:
    """Hull-perimeter change L_n - L_n^(i) caused by the replacement."""
    return hull_perimeter(original_path(view).points) - hull_perimeter(resample_path(view).points)


def delta_profile(view: ResampleView, thetas: np.ndarray) -> np.ndarray:
    """Per-direction range change R(theta) - R^(i)(theta); each entry is
    bounded by 2*|Z_i| + 2*|Z_i'| in absolute value."""
    orig = original_path(view).points
    res = resample_path(view).points
    return range_profile(orig, thetas) - range_profile(res, thetas)
