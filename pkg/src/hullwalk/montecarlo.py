"""Seeded replicate engine: perimeter sampling, variance sweeps, normality
checks, drift-approximation residuals, the expected-perimeter identity check,
and extrema-localization diagnostics.

Replicate r always uses stream id r (offset streams for independent blocks),
so every result is a pure function of (config, arguments) and is bit-identical
for any worker count: workers only split the replicate range into contiguous
chunks that are reduced in index order.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exact import DecompositionRecord, exact_decomposition  # noqa: F401  (re-export)
from .geometry import WalkPath, hull_perimeter, theta_grid, _unit_vectors
from .report import ExperimentReport, ReportRow
from .theory import (
    canonical_rotation_angle,
    normal_cdf,
    sigma_squared,
    theory_quantities,
    y_increments,
    _swb_path_value,
)
from .walk import IncrementModel, SeedSpec, generate_walk

# One-sample KS critical values c(alpha), threshold = c / sqrt(count).
_KS_CRITICAL = {0.10: 1.2238, 0.05: 1.3581, 0.01: 1.6276}

# Float slack on the per-direction resampling bound (exact inequality; the
# slack only absorbs projection roundoff).
_DELTA_BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class McConfig:
    """Shared experiment inputs. n_values must be strictly increasing."""

    model: IncrementModel
    n_values: tuple
    reps: int
    master_seed: int
    grid_size: int = 1024
    delta: float = 0.3
    gamma: float = 0.1

    def __post_init__(self):
        ns = tuple(int(v) for v in self.n_values)
        if not ns:
            raise ValueError("n_values must be non-empty")
        if any(v < 1 for v in ns):
            raise ValueError("every n must be >= 1")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n_values must be strictly increasing")
        object.__setattr__(self, "n_values", ns)
        if int(self.reps) < 2:
            raise ValueError("reps must be >= 2")
        object.__setattr__(self, "reps", int(self.reps))
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "master_seed", int(self.master_seed))
        if int(self.grid_size) < 2:
            raise ValueError("grid_size must be at least 2")
        object.__setattr__(self, "grid_size", int(self.grid_size))
        if not 0.0 < float(self.delta) < math.pi / 2.0:
            raise ValueError("delta must lie in (0, pi/2)")
        object.__setattr__(self, "delta", float(self.delta))
        if not 0.0 < float(self.gamma) < 0.5:
            raise ValueError("gamma must lie in (0, 0.5)")
        object.__setattr__(self, "gamma", float(self.gamma))


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    variance: float
    standard_error_of_mean: float
    standard_error_of_variance: float

    @classmethod
    def from_samples(cls, values) -> "SummaryStats":
        x = np.asarray(values, dtype=np.float64)
        n = int(x.size)
        if n < 2:
            raise ValueError("need at least two samples")
        mean = float(x.mean())
        dev = x - mean
        var = float(dev @ dev / (n - 1))
        m4 = float(np.mean(dev**4))
        var_of_var = (m4 - var * var * (n - 3) / (n - 1)) / n
        return cls(
            count=n,
            mean=mean,
            variance=var,
            standard_error_of_mean=math.sqrt(var / n),
            standard_error_of_variance=math.sqrt(max(0.0, var_of_var)),
        )


@dataclass(frozen=True)
class EventDiagnostic:
    """Estimated probabilities that both directional extrema over the window
    [delta, pi - delta] localize to the first/last gamma*n steps, for the
    original and the step-i-resampled walk, per resample index i."""

    n: int
    delta: float
    gamma: float
    min_probability: float
    per_index: tuple


@dataclass(frozen=True)
class SwbComparison:
    """Two independent Monte Carlo sides of the expected-perimeter identity."""

    n: int
    direct: SummaryStats
    identity: SummaryStats
    gap: float
    combined_se: float


def ks_distance_to_normal(values) -> float:
    """One-sample Kolmogorov-Smirnov distance to the standard normal CDF."""
    x = np.sort(np.asarray(values, dtype=np.float64))
    n = x.size
    if n == 0:
        raise ValueError("need at least one sample")
    cdf = np.array([normal_cdf(v) for v in x])
    above = np.arange(1, n + 1) / n - cdf
    below = cdf - np.arange(0, n) / n
    return float(max(above.max(), below.max()))


def ks_critical_value(count: int, alpha: float = 0.01) -> float:
    if alpha not in _KS_CRITICAL:
        raise ValueError(f"no critical value tabulated for alpha={alpha}")
    return _KS_CRITICAL[alpha] / math.sqrt(count)


def _chunk_bounds(reps: int, workers: int):
    k = max(1, min(workers, reps))
    base, extra = divmod(reps, k)
    bounds = []
    start = 0
    for j in range(k):
        size = base + (1 if j < extra else 0)
        bounds.append((start, start + size))
        start += size
    return bounds


def _map_replicates(worker, args, reps, workers):
    """Run worker(*args, r0, r1) over contiguous replicate chunks; results
    come back in chunk order so reductions are worker-count invariant."""
    bounds = _chunk_bounds(reps, workers)
    if len(bounds) == 1:
        return [worker(*args, 0, reps)]
    with ProcessPoolExecutor(max_workers=len(bounds)) as pool:
        futures = [pool.submit(worker, *args, r0, r1) for r0, r1 in bounds]
        return [f.result() for f in futures]


def _perimeter_chunk(model, master_seed, n, stream_offset, r0, r1):
    out = np.empty(r1 - r0)
    for j, r in enumerate(range(r0, r1)):
        path, _ = generate_walk(model, n, SeedSpec(master_seed, stream_offset + r))
        out[j] = hull_perimeter(path.points)
    return out


def _raw_perimeter_samples(config: McConfig, n: int, workers: int = 1) -> np.ndarray:
    parts = _map_replicates(
        _perimeter_chunk, (config.model, config.master_seed, n, 0), config.reps, workers
    )
    return np.concatenate(parts)


def perimeter_samples(config: McConfig, n: int, workers: int = 1) -> np.ndarray:
    """reps hull perimeters of n-step walks; replicate r uses stream id r."""
    if n not in config.n_values:
        raise ValueError("n is not one of config.n_values")
    return _raw_perimeter_samples(config, n, workers)


def variance_sweep(config: McConfig, workers: int = 1) -> ExperimentReport:
    """Per-n perimeter statistics plus a least-squares (through the origin)
    slope of Var[L_n] against n; degenerate laws also get an exploratory
    Var-versus-log-n coefficient."""
    tq = theory_quantities(config.model)
    predict = tq.sigma_sq is not None and not tq.degenerate
    desc = config.model.describe()
    seed = config.master_seed
    rows = []
    variances = []
    for n in config.n_values:
        st = SummaryStats.from_samples(_raw_perimeter_samples(config, n, workers))
        variances.append(st.variance)
        rows.append(
            ReportRow("variance-sweep", desc, n, "mean_perimeter", st.mean,
                      st.standard_error_of_mean, None, seed)
        )
        rows.append(
            ReportRow("variance-sweep", desc, n, "perimeter_variance", st.variance,
                      st.standard_error_of_variance,
                      tq.sigma_sq * n if predict else None, seed)
        )
        rows.append(
            ReportRow("variance-sweep", desc, n, "variance_over_n", st.variance / n,
                      st.standard_error_of_variance / n,
                      tq.sigma_sq if predict else None, seed)
        )
    ns = np.array(config.n_values, dtype=np.float64)
    vs = np.array(variances)
    slope = float(ns @ vs / (ns @ ns))
    rows.append(
        ReportRow("variance-sweep", desc, None, "variance_slope", slope, None,
                  tq.sigma_sq if predict else None, seed)
    )
    rows.append(
        ReportRow("variance-sweep", desc, None, "ss_bound_coeff", tq.ss_bound_coeff,
                  None, None, seed)
    )
    if tq.degenerate:
        design = np.column_stack((np.ones_like(ns), np.log(ns)))
        coef, *_ = np.linalg.lstsq(design, vs, rcond=None)
        rows.append(
            ReportRow("variance-sweep", desc, None, "variance_logn_slope",
                      float(coef[1]), None, None, seed)
        )
    return ExperimentReport(rows=tuple(rows))


def clt_samples(config: McConfig, n: int, standardization: str = "sample", workers: int = 1):
    """Standardized perimeter samples and their KS distance to the standard
    normal. `standardization` picks the scale: the sample standard deviation,
    or the predicted sqrt(sigma_sq * n); both center at the sample mean."""
    sig = sigma_squared(config.model)  # raises for zero drift
    if sig == 0.0:
        raise ValueError("CLT undefined in degenerate case")
    samples = _raw_perimeter_samples(config, n, workers)
    st = SummaryStats.from_samples(samples)
    if standardization == "sample":
        scale = math.sqrt(st.variance)
    elif standardization == "theory":
        scale = math.sqrt(sig * n)
    else:
        raise ValueError("standardization must be 'sample' or 'theory'")
    standardized = (samples - st.mean) / scale
    return standardized, ks_distance_to_normal(standardized)


def _approx_chunk(model, master_seed, n, r0, r1):
    perims = np.empty(r1 - r0)
    ysums = np.empty(r1 - r0)
    for j, r in enumerate(range(r0, r1)):
        path, steps = generate_walk(model, n, SeedSpec(master_seed, r))
        perims[j] = hull_perimeter(path.points)
        ysums[j] = y_increments(steps, model).sum()
    return perims, ysums


def approximation_residual(config: McConfig, n: int, workers: int = 1) -> SummaryStats:
    """Stats of r^2 where r = (L_n - mean_hat - sum_i Y_i) / sqrt(n): the
    scaled residual of approximating the centered perimeter by the summed
    drift projections of the increments. mean_hat is the leave-one-out
    cross-replicate mean, so each replicate is centered without using itself.
    The mean of r^2 must drift toward 0 as n grows."""
    if config.model.drift_magnitude == 0.0:
        raise ValueError("approximation residual requires non-zero drift")
    parts = _map_replicates(_approx_chunk, (config.model, config.master_seed, n),
                            config.reps, workers)
    perims = np.concatenate([p for p, _ in parts])
    ysums = np.concatenate([y for _, y in parts])
    loo_mean = (perims.sum() - perims) / (config.reps - 1)
    residual = (perims - loo_mean - ysums) / math.sqrt(n)
    return SummaryStats.from_samples(residual**2)


def _swb_chunk(model, master_seed, n, stream_offset, r0, r1):
    out = np.empty(r1 - r0)
    for j, r in enumerate(range(r0, r1)):
        out[j] = _swb_path_value(model, n, SeedSpec(master_seed, stream_offset + r))
    return out


def swb_comparison(config: McConfig, n: int, workers: int = 1) -> SwbComparison:
    """Direct perimeter mean (streams 0..reps-1) versus the identity estimator
    2 * sum E|S_i| / i (streams reps..2reps-1); the two block means must agree
    within a few combined standard errors."""
    direct = SummaryStats.from_samples(_raw_perimeter_samples(config, n, workers))
    parts = _map_replicates(_swb_chunk, (config.model, config.master_seed, n, config.reps),
                            config.reps, workers)
    identity = SummaryStats.from_samples(np.concatenate(parts))
    gap = abs(direct.mean - identity.mean)
    combined = math.hypot(direct.standard_error_of_mean, identity.standard_error_of_mean)
    return SwbComparison(n=n, direct=direct, identity=identity, gap=gap, combined_se=combined)


def _index_panel(n: int):
    picks = {1, n}
    for frac in (0.1, 0.25, 0.5, 0.75, 0.9):
        picks.add(min(n, max(1, math.ceil(frac * n))))
    return tuple(sorted(picks))


def _merge_extrema(val_a, idx_a, val_b, idx_b, take_max):
    """Merge (value, index) extrema where block b sits at larger indices than
    block a; ties keep block a, i.e. the smaller index."""
    better = val_b > val_a if take_max else val_b < val_a
    return np.where(better, val_b, val_a), np.where(better, idx_b, idx_a)


def _event_chunk(model, master_seed, n, grid_size, delta, gamma, r0, r1):
    angle = canonical_rotation_angle(model)
    c, s = math.cos(angle), math.sin(angle)
    rot_t = np.array([[c, s], [-s, c]])  # right-multiply == rotate by angle
    thetas = theta_grid(grid_size)
    e_t = _unit_vectors(thetas).T
    window = (thetas >= delta - 1e-12) & (thetas <= math.pi - delta + 1e-12)
    panel = _index_panel(n)
    p = len(panel)
    starts = np.array((0,) + panel)
    ends = np.append(starts[1:], n + 1)
    nseg = p + 1
    g = thetas.size

    counts = np.zeros(p, dtype=np.int64)
    for r in range(r0, r1):
        rng = SeedSpec(master_seed, r).generator()
        steps = model.sample(rng, n) @ rot_t
        replacements = model.sample(rng, p) @ rot_t
        path = np.vstack((np.zeros((1, 2)), np.cumsum(steps, axis=0)))
        proj = path @ e_t

        seg_max = np.empty((nseg, g))
        seg_jmax = np.empty((nseg, g), dtype=np.int64)
        seg_min = np.empty((nseg, g))
        seg_jmin = np.empty((nseg, g), dtype=np.int64)
        for segment in range(nseg):
            block = proj[starts[segment] : ends[segment]]
            am = block.argmax(axis=0)
            seg_jmax[segment] = am + starts[segment]
            seg_max[segment] = np.take_along_axis(block, am[None, :], 0)[0]
            am = block.argmin(axis=0)
            seg_jmin[segment] = am + starts[segment]
            seg_min[segment] = np.take_along_axis(block, am[None, :], 0)[0]

        # Running prefix combines (segments 0..t) and suffix combines
        # (segments t..end); first-occurrence tie-breaks survive both.
        pref = [None] * nseg
        pref[0] = (seg_max[0], seg_jmax[0], seg_min[0], seg_jmin[0])
        for t in range(1, nseg):
            mx, jx, mn, jn = pref[t - 1]
            mx, jx = _merge_extrema(mx, jx, seg_max[t], seg_jmax[t], True)
            mn, jn = _merge_extrema(mn, jn, seg_min[t], seg_jmin[t], False)
            pref[t] = (mx, jx, mn, jn)
        suff = [None] * (nseg + 1)
        suff[nseg - 1] = (seg_max[-1], seg_jmax[-1], seg_min[-1], seg_jmin[-1])
        for t in range(nseg - 2, 0, -1):
            mx, jx, mn, jn = suff[t + 1]
            mx, jx = _merge_extrema(seg_max[t], seg_jmax[t], mx, jx, True)
            mn, jn = _merge_extrema(seg_min[t], seg_jmin[t], mn, jn, False)
            suff[t] = (mx, jx, mn, jn)

        full_max, full_jmax, full_min, full_jmin = pref[nseg - 1]
        lo_cut = gamma * n
        hi_cut = (1.0 - gamma) * n
        orig_ok = bool(
            (full_jmin[window] < lo_cut).all() and (full_jmax[window] > hi_cut).all()
        )
        base_range = full_max - full_min

        for t, i in enumerate(panel):
            shift_vec = replacements[t] - steps[i - 1]
            shift = shift_vec[0] * e_t[0] + shift_vec[1] * e_t[1]
            pmx, pjx, pmn, pjn = pref[t]
            smx, sjx, smn, sjn = suff[t + 1]
            mx, jx = _merge_extrema(pmx, pjx, smx + shift, sjx, True)
            mn, jn = _merge_extrema(pmn, pjn, smn + shift, sjn, False)
            res_ok = bool((jn[window] < lo_cut).all() and (jx[window] > hi_cut).all())
            if orig_ok and res_ok:
                counts[t] += 1
            delta_range = base_range - (mx - mn)
            bound = 2.0 * (
                math.hypot(steps[i - 1, 0], steps[i - 1, 1])
                + math.hypot(replacements[t, 0], replacements[t, 1])
            )
            if np.any(np.abs(delta_range) > bound + _DELTA_BOUND_SLACK * (1.0 + bound)):
                raise RuntimeError(
                    f"per-direction resampling bound violated at n={n}, i={i}, replicate {r}"
                )
    return counts


def event_probability(config: McConfig, n: int, workers: int = 1) -> EventDiagnostic:
    """Frequency, per resample index i in a panel spanning 1..n, of the event
    that every direction in [delta, pi - delta] (quadrature grid restricted to
    the window, canonical drift orientation) has its minimizing step before
    gamma*n and its maximizing step after (1-gamma)*n, for both the original
    and the resampled walk. Also hard-checks the per-direction resampling
    bound |R - R^(i)| <= 2|Z_i| + 2|Z_i'| on every grid point."""
    if config.model.drift_magnitude == 0.0:
        raise ValueError("event probability requires non-zero drift")
    if config.delta >= math.pi / 2.0 - 1e-12:
        raise ValueError("delta must leave a non-empty window")
    parts = _map_replicates(
        _event_chunk,
        (config.model, config.master_seed, n, config.grid_size, config.delta, config.gamma),
        config.reps,
        workers,
    )
    counts = np.sum(parts, axis=0)
    panel = _index_panel(n)
    estimates = tuple((i, float(c) / config.reps) for i, c in zip(panel, counts))
    return EventDiagnostic(
        n=n,
        delta=config.delta,
        gamma=config.gamma,
        min_probability=min(e for _, e in estimates),
        per_index=estimates,
    )
