"""Exact enumeration over finite-support increment laws: perimeter moments,
the expected-perimeter identity, and the one-step resampling decomposition
of the perimeter variance.

The decomposition writes L_n - E[L_n] as a sum of martingale differences
D_{n,i} = E[L_n - L_n^(i) | first i steps], so Var[L_n] = sum_i E[D_{n,i}^2].
Everything here is computed by direct summation over all k^n step sequences.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import hull_perimeter
from .walk import IncrementModel

STATE_SPACE_LIMIT = 1_000_000
_CHUNK = 32768


@dataclass(frozen=True)
class DecompositionRecord:
    """Exact per-step second moments E[D_{n,i}^2] plus the identities they
    must satisfy: total == var_exact, zero conditional mean, and the pathwise
    telescoping of L - E[L] into the D's."""

    n: int
    per_index: tuple
    total: float
    mean_exact: float
    var_exact: float
    max_pathwise_gap: float
    max_centering_gap: float


def _require_atoms(model: IncrementModel):
    atom_list = model.atoms()
    if atom_list is None:
        raise ValueError("exact enumeration requires a finite-support increment law")
    pts = np.array([a for a, _ in atom_list], dtype=np.float64)
    probs = np.array([p for _, p in atom_list], dtype=np.float64)
    return pts, probs


def _sequence_count(k: int, n: int) -> int:
    count = k**n
    if count > STATE_SPACE_LIMIT:
        raise ValueError(
            f"state space too large: {k}^{n} = {count} sequences exceeds limit {STATE_SPACE_LIMIT}"
        )
    return count


def _digit_block(ids: np.ndarray, k: int, n: int) -> np.ndarray:
    digits = np.empty((ids.shape[0], n), dtype=np.int64)
    for t in range(n):
        digits[:, t] = (ids // k ** (n - 1 - t)) % k
    return digits


def _paths_for(digits: np.ndarray, atoms: np.ndarray) -> np.ndarray:
    steps = atoms[digits]
    b = digits.shape[0]
    paths = np.empty((b, digits.shape[1] + 1, 2))
    paths[:, 0] = 0.0
    np.cumsum(steps, axis=1, out=paths[:, 1:])
    return paths


def _enumerate(model: IncrementModel, n: int):
    if n < 1:
        raise ValueError("n must be >= 1")
    atoms, probs = _require_atoms(model)
    count = _sequence_count(atoms.shape[0], n)
    for start in range(0, count, _CHUNK):
        ids = np.arange(start, min(start + _CHUNK, count))
        digits = _digit_block(ids, atoms.shape[0], n)
        yield ids, digits, _paths_for(digits, atoms), np.prod(probs[digits], axis=1)


def exact_perimeter_distribution(model: IncrementModel, n: int):
    """Support and probabilities of L_n over all k^n increment sequences;
    equal perimeter values are merged, support is sorted ascending."""
    atoms, _ = _require_atoms(model)
    count = _sequence_count(atoms.shape[0], n)
    values = np.empty(count)
    weights = np.empty(count)
    for ids, _, paths, w in _enumerate(model, n):
        for j, row in enumerate(ids):
            values[row] = hull_perimeter(paths[j])
        weights[ids] = w
    support, inverse = np.unique(values, return_inverse=True)
    probs = np.zeros(support.shape[0])
    np.add.at(probs, inverse, weights)
    return support, probs


def exact_perimeter_moments(model: IncrementModel, n: int):
    """Exact (E[L_n], Var[L_n]) by enumeration."""
    values, weights = exact_perimeter_distribution(model, n)
    mean = float(weights @ values)
    var = float(weights @ (values - mean) ** 2)
    return mean, var


def exact_swb_rhs(model: IncrementModel, n: int) -> float:
    """Exact value of 2 * sum_{i=1}^{n} E|S_i| / i by enumeration."""
    atoms, _ = _require_atoms(model)
    _sequence_count(atoms.shape[0], n)
    expected_norms = np.zeros(n)
    for _, _, paths, w in _enumerate(model, n):
        norms = np.hypot(paths[:, 1:, 0], paths[:, 1:, 1])
        expected_norms += w @ norms
    return float(2.0 * np.sum(expected_norms / np.arange(1, n + 1)))


def exact_decomposition(model: IncrementModel, n: int) -> DecompositionRecord:
    """Exact D_{n,i} by conditional averaging over the replacement step and
    the suffix, organized as a (k,)*n table of perimeters."""
    atoms, probs = _require_atoms(model)
    k = atoms.shape[0]
    count = _sequence_count(k, n)
    table = np.empty(count)
    for ids, _, paths, _ in _enumerate(model, n):
        for j, row in enumerate(ids):
            table[row] = hull_perimeter(paths[j])
    tensor = table.reshape((k,) * n)

    # cond[i] = E[L_n | first i steps], axis t <-> step t+1.
    cond = [None] * (n + 1)
    cond[n] = tensor
    for i in range(n, 0, -1):
        cond[i - 1] = np.tensordot(cond[i], probs, axes=([i - 1], [0]))
    mean = float(cond[0])

    per_index = []
    max_centering = 0.0
    telescoped = np.zeros((k,) * n)
    for i in range(1, n + 1):
        # Averaging cond[i] over a fresh step i is exactly the conditional
        # average of L_n^(i) given the first i steps, so D_i is cond-to-cond.
        d = cond[i] - np.expand_dims(cond[i - 1], axis=-1)
        w = d * d
        for _ in range(i):
            w = np.tensordot(probs, w, axes=([0], [0]))
        per_index.append(float(w))
        centering = np.tensordot(d, probs, axes=([-1], [0]))
        max_centering = max(max_centering, float(np.max(np.abs(centering))))
        telescoped = telescoped + d.reshape(d.shape + (1,) * (n - i))

    centered = tensor - mean
    max_pathwise = float(np.max(np.abs(centered - telescoped)))
    w = centered * centered
    for _ in range(n):
        w = np.tensordot(probs, w, axes=([0], [0]))
    var_exact = float(w)

    return DecompositionRecord(
        n=n,
        per_index=tuple(per_index),
        total=float(sum(per_index)),
        mean_exact=mean,
        var_exact=var_exact,
        max_pathwise_gap=max_pathwise,
        max_centering_gap=max_centering,
    )
