"""Prediction error and attractor-comparison metrics.

``log_nmse`` is the benchmark error measure: the base-10 logarithm of the
mean squared error normalized by the target variance, both averaged over
the evaluation window.  Attractor geometry is compared by embedding scalar
series in delay coordinates and computing an exact 1-Wasserstein distance
between equal-size subsamples of the two point clouds: the minimum over
bijections of the mean matched Euclidean distance, solved as a linear
assignment problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

__all__ = [
    "PERFECT_FIT_LOGNMSE",
    "DIVERGED_LOGNMSE",
    "LOGNMSE_BASE",
    "AttractorCloud",
    "TransportPlan",
    "log_nmse",
    "embed_delay",
    "shuffle_surrogate",
    "solve_assignment",
    "wasserstein_distance",
]

# log of an exactly-zero error is -inf; reported as a large negative sentinel
# so downstream medians and CSV stay well-behaved.
PERFECT_FIT_LOGNMSE = -1e9
# trials with non-finite predictions score as the worst possible value.
DIVERGED_LOGNMSE = float("inf")
LOGNMSE_BASE = 10


@dataclass(frozen=True)
class AttractorCloud:
    """Delay-coordinate embedding of a scalar series.

    ``points`` has shape (count, dim) with point k equal to
    (s[k], s[k+tau], ..., s[k+(dim-1) tau]); ``source`` labels where the
    series came from (target, predicted, surrogate).
    """

    points: np.ndarray
    tau: int
    dim: int
    source: str

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class TransportPlan:
    """Optimal assignment between two equal-size point sets.

    ``assignment[i]`` is the column matched to row i; ``cost`` is the total
    (not mean) matched ground distance.
    """

    assignment: np.ndarray
    cost: float


def log_nmse(y, y_hat) -> float:
    """log10 of mean squared error over target variance, time-averaged.

    Returns ``PERFECT_FIT_LOGNMSE`` for an exact match and
    ``DIVERGED_LOGNMSE`` when predictions contain non-finite values.

    Raises
    ------
    ValueError
        On length mismatch, windows shorter than 2 steps, or a
        zero-variance target (the metric is undefined there).
    """
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y.ndim == 1:
        y = y[:, None]
    if y_hat.ndim == 1:
        y_hat = y_hat[:, None]
    if y.shape != y_hat.shape:
        raise ValueError(f"shape mismatch: targets {y.shape} vs predictions {y_hat.shape}")
    if y.shape[0] < 2:
        raise ValueError("evaluation window must hold at least 2 steps")
    if not np.all(np.isfinite(y)):
        raise ValueError("targets must be finite")
    den = float(np.mean(np.sum((y - y.mean(axis=0)) ** 2, axis=1)))
    if den <= 0.0:
        raise ValueError("zero-variance target: logNMSE is undefined")
    if not np.all(np.isfinite(y_hat)):
        return DIVERGED_LOGNMSE
    num = float(np.mean(np.sum((y_hat - y) ** 2, axis=1)))
    if num == 0.0:
        return PERFECT_FIT_LOGNMSE
    return float(np.log10(num / den))


def embed_delay(series, tau: int, dim: int, source: str = "target") -> AttractorCloud:
    """Embed a scalar series in delay coordinates."""
    s = np.asarray(series, dtype=np.float64)
    if s.ndim != 1:
        raise ValueError(f"expected a 1-D series, got shape {s.shape}")
    if tau < 1 or dim < 1:
        raise ValueError(f"tau and dim must be >= 1, got tau={tau}, dim={dim}")
    count = s.shape[0] - (dim - 1) * tau
    if count < 1:
        raise ValueError(
            f"series of length {s.shape[0]} too short for dim={dim}, tau={tau}"
        )
    points = np.column_stack([s[i * tau : i * tau + count] for i in range(dim)])
    return AttractorCloud(points=points, tau=tau, dim=dim, source=source)


def shuffle_surrogate(series, seed: int) -> np.ndarray:
    """Uniformly random permutation of the series values.

    Preserves the value multiset exactly while destroying temporal
    structure; deterministic under the seed.
    """
    s = np.asarray(series)
    if s.ndim != 1 or s.shape[0] < 1:
        raise ValueError(f"expected a non-empty 1-D series, got shape {s.shape}")
    return np.random.default_rng(seed).permutation(s)


def solve_assignment(cost_matrix) -> TransportPlan:
    """Minimum-total-cost perfect matching for a square cost matrix.

    Exact; backed by scipy's Jonker-Volgenant linear assignment solver.
    """
    c = np.asarray(cost_matrix, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("cost matrix entries must be finite")
    if np.any(c < 0):
        raise ValueError("cost matrix entries must be non-negative")
    rows, cols = linear_sum_assignment(c)
    assignment = np.empty(c.shape[0], dtype=np.intp)
    assignment[rows] = cols
    return TransportPlan(assignment=assignment, cost=float(c[rows, cols].sum()))


def _subsample_seeds(seed) -> tuple:
    if isinstance(seed, (tuple, list)):
        if len(seed) != 2:
            raise ValueError("seed pair must hold exactly two entries")
        return tuple(seed)
    # one integer seeds both draws identically: identical clouds then get
    # identical subsamples, making wasserstein(a, a, m, s) exactly zero
    return seed, seed


def wasserstein_distance(a: AttractorCloud, b: AttractorCloud, m: int, seed) -> float:
    """Exact 1-Wasserstein distance between subsampled point clouds.

    Draws ``m`` points without replacement from each cloud (deterministic
    under ``seed``), then returns the minimum over bijections of the mean
    matched Euclidean distance.  ``seed`` may be a single integer, which
    seeds both per-cloud draws identically (so identical clouds subsample
    identically and their distance is exactly zero), or an explicit
    ``(seed_a, seed_b)`` pair; swapping the pair together with the clouds
    reproduces the same matching, making the distance symmetric.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if m < 1:
        raise ValueError(f"subsample count must be >= 1, got {m}")
    if len(a) < m or len(b) < m:
        raise ValueError(
            f"clouds must hold at least m={m} points, got {len(a)} and {len(b)}"
        )
    seed_a, seed_b = _subsample_seeds(seed)
    idx_a = np.random.default_rng(seed_a).choice(len(a), size=m, replace=False)
    idx_b = np.random.default_rng(seed_b).choice(len(b), size=m, replace=False)
    costs = cdist(a.points[idx_a], b.points[idx_b])
    plan = solve_assignment(costs)
    return plan.cost / m
