"""Distance correlation, energy distance and permutation machinery.

Internal helpers for the independence harness.  Statistics are computed on
explicit double-centered distance matrices (the biased V-statistic form) so
permutation nulls reuse the matrices; sample caps keep the O(n^2) cost of
the permutation loop within the suite runtime budgets.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist


def whiten(points: np.ndarray) -> np.ndarray:
    """Center and decorrelate rows; degenerate directions are left centered."""
    centered = points - points.mean(axis=0, keepdims=True)
    cov = centered.T @ centered / max(len(centered) - 1, 1)
    vals, vecs = np.linalg.eigh(cov)
    floor = 1e-12 * max(float(vals.max()), 1e-30)
    inv_sqrt = np.where(vals > floor, 1.0 / np.sqrt(np.maximum(vals, floor)), 0.0)
    return centered @ (vecs * inv_sqrt) @ vecs.T


def double_center(dist: np.ndarray) -> np.ndarray:
    row = dist.mean(axis=0, keepdims=True)
    col = dist.mean(axis=1, keepdims=True)
    return dist - row - col + dist.mean()


def centered_distance_matrices(x: np.ndarray, y: np.ndarray):
    a = double_center(cdist(x, x))
    b = double_center(cdist(y, y))
    return a, b


def dcor_from_centered(a: np.ndarray, b: np.ndarray) -> float:
    n2 = a.shape[0] ** 2
    cov_xy = (a * b).sum() / n2
    var_x = (a * a).sum() / n2
    var_y = (b * b).sum() / n2
    denom = np.sqrt(var_x * var_y)
    if denom <= 0:
        return 0.0
    return float(np.sqrt(max(cov_xy, 0.0) / denom))


def distance_correlation(x: np.ndarray, y: np.ndarray) -> float:
    a, b = centered_distance_matrices(np.atleast_2d(x), np.atleast_2d(y))
    return dcor_from_centered(a, b)


def subsample_rows(n: int, max_points: int, rng: np.random.Generator) -> np.ndarray:
    if n <= max_points:
        return np.arange(n)
    return np.sort(rng.permutation(n)[:max_points])


def dcor_permutation_test(
    x: np.ndarray,
    y: np.ndarray,
    n_perm: int,
    rng: np.random.Generator,
    max_points: int = 1280,
):
    """Permutation p-value for distance correlation; returns (stat, p, n_used).

    The p-value uses the add-one convention (1 + #{perm >= observed}) /
    (1 + n_perm), so it is never zero and is exact for exchangeable nulls.
    """
    x = np.atleast_2d(x)
    y = np.atleast_2d(y)
    keep = subsample_rows(len(x), max_points, rng)
    a, b = centered_distance_matrices(x[keep], y[keep])
    observed = dcor_from_centered(a, b)
    m = a.shape[0]
    exceed = 0
    for _ in range(n_perm):
        perm = rng.permutation(m)
        stat = dcor_from_centered(a, b[np.ix_(perm, perm)])
        if stat >= observed:
            exceed += 1
    p_value = (1.0 + exceed) / (1.0 + n_perm)
    return float(observed), float(p_value), int(m)


def energy_statistic(dist: np.ndarray, idx_a: np.ndarray, idx_b: np.ndarray, row_sums=None) -> float:
    """Two-sample energy statistic from a pooled distance matrix."""
    if row_sums is None:
        row_sums = dist.sum(axis=1)
    na, nb = len(idx_a), len(idx_b)
    s_aa = dist[np.ix_(idx_a, idx_a)].sum()
    r_a = row_sums[idx_a].sum()
    total = row_sums.sum()
    s_ab = r_a - s_aa
    s_bb = total + s_aa - 2.0 * r_a
    return float(2.0 * s_ab / (na * nb) - s_aa / (na * na) - s_bb / (nb * nb))


def energy_permutation_test(
    a: np.ndarray,
    b: np.ndarray,
    n_perm: int,
    rng: np.random.Generator,
    max_points: int = 768,
):
    """Permutation two-sample energy test; returns (stat, p, n_used_per_group)."""
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    keep_a = subsample_rows(len(a), max_points, rng)
    keep_b = subsample_rows(len(b), max_points, rng)
    pool = np.vstack([a[keep_a], b[keep_b]])
    na = len(keep_a)
    dist = cdist(pool, pool)
    row_sums = dist.sum(axis=1)
    labels = np.arange(len(pool))
    observed = energy_statistic(dist, labels[:na], labels[na:], row_sums)
    exceed = 0
    for _ in range(n_perm):
        perm = rng.permutation(len(pool))
        stat = energy_statistic(dist, perm[:na], perm[na:], row_sums)
        if stat >= observed:
            exceed += 1
    p_value = (1.0 + exceed) / (1.0 + n_perm)
    return float(observed), float(p_value), int(min(na, len(keep_b)))


def ks_distance_to_uniform(values: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance of a sample to the uniform law on [0, 1]."""
    u = np.sort(np.asarray(values, dtype=float))
    n = len(u)
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    return float(max(np.max(np.abs(grid_hi - u)), np.max(np.abs(u - grid_lo))))


def rng_seed_record(rng: np.random.Generator) -> dict:
    """Best-effort description of the generator's seed for reports."""
    seq = getattr(rng.bit_generator, "seed_seq", None)
    if seq is None:
        return {}
    return {
        "entropy": str(seq.entropy),
        "spawn_key": [int(k) for k in seq.spawn_key],
    }
