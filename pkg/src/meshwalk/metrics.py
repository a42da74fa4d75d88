"""Observables of single- and two-particle output distributions."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError
from .lattice import WalkConfig
from .two_particle import JointDistribution

__all__ = [
    "ScalingFit",
    "similarity",
    "marginal",
    "mean_position_variance",
    "relative_distance_distribution",
    "variance_R",
    "mean_R",
    "position_variance",
    "scaling_fit",
    "classical_walk_distribution",
    "total_variation",
]


def _matrix(p: JointDistribution | ArrayLike) -> NDArray[np.float64]:
    if isinstance(p, JointDistribution):
        return p.matrix
    return np.asarray(p, dtype=np.float64)


def similarity(d: ArrayLike, d_prime: ArrayLike) -> float:
    """Bhattacharyya-type overlap of two nonnegative arrays of equal shape.

    ``S = (sum sqrt(D * D'))^2 / (sum D * sum D')``.  Inputs need not be
    normalized (raw counts are fine); ``S`` is 1 iff the arrays are
    proportional and 0 iff their supports are disjoint.
    """
    d = np.asarray(d, dtype=np.float64)
    d_prime = np.asarray(d_prime, dtype=np.float64)
    if d.shape != d_prime.shape:
        raise DomainError(f"shape mismatch: {d.shape} vs {d_prime.shape}")
    if np.any(d < 0) or np.any(d_prime < 0):
        raise DomainError("distributions must be nonnegative")
    total, total_prime = d.sum(), d_prime.sum()
    if total <= 0 or total_prime <= 0:
        raise DomainError("distributions must have positive total mass")
    overlap = np.sqrt(d * d_prime).sum()
    return float(min(1.0, overlap**2 / (total * total_prime)))


def marginal(p: JointDistribution | ArrayLike) -> NDArray[np.float64]:
    """Single-particle distribution obtained by summing ``P[j, k]`` over ``k``."""
    return _matrix(p).sum(axis=1)


def _variance(values: NDArray[np.float64], weights: NDArray[np.float64]) -> float:
    mean = (weights * values).sum()
    return float((weights * (values - mean) ** 2).sum())


def mean_position_variance(p: JointDistribution | ArrayLike, center: float | None = None) -> float:
    """Variance of ``x_M = (j + k) / 2`` in site units.

    ``center`` only shifts the origin (by default the input midpoint for a
    :class:`JointDistribution`) and does not change the result.
    """
    mat = _matrix(p)
    if center is None:
        center = 0.5 * (p.input_a + p.input_b) if isinstance(p, JointDistribution) else 0.0
    j = np.arange(mat.shape[0]) - center
    xm = 0.5 * (j[:, None] + j[None, :])
    return _variance(xm, mat)


def relative_distance_distribution(p: JointDistribution | ArrayLike) -> NDArray[np.float64]:
    """``P(R)`` for ``R = |j - k|``, indexed ``R = 0 .. M - 1``."""
    mat = _matrix(p)
    m = mat.shape[0]
    j = np.arange(m)
    r = np.abs(j[:, None] - j[None, :])
    return np.bincount(r.ravel(), weights=mat.ravel(), minlength=m)


def variance_R(p: JointDistribution | ArrayLike) -> float:
    pr = relative_distance_distribution(p)
    return _variance(np.arange(pr.size, dtype=np.float64), pr)


def mean_R(p: JointDistribution | ArrayLike) -> float:
    pr = relative_distance_distribution(p)
    return float((np.arange(pr.size) * pr).sum())


def position_variance(prob: ArrayLike) -> float:
    """Variance of the mode index under a single-particle distribution."""
    prob = np.asarray(prob, dtype=np.float64)
    return _variance(np.arange(prob.size, dtype=np.float64), prob)


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    intercept: float
    r_squared: float
    n_range: tuple[int, ...]

    def predict(self, n: ArrayLike) -> NDArray[np.float64]:
        return np.exp(self.intercept) * np.asarray(n, dtype=np.float64) ** self.exponent


def scaling_fit(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """Least-squares power law ``Var ~ n^exponent`` in log-log coordinates."""
    if len(points) < 4:
        raise DomainError(f"scaling fit needs at least 4 points, got {len(points)}")
    n, var = (np.asarray(col, dtype=np.float64) for col in zip(*points))
    if np.any(n <= 0) or np.any(var <= 0):
        raise DomainError("scaling fit needs strictly positive step counts and variances")
    x, y = np.log(n), np.log(var)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = ((y - y.mean()) ** 2).sum()
    r2 = 1.0 - (resid**2).sum() / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(float(slope), float(intercept), float(r2), tuple(int(k) for k in n))


def classical_walk_distribution(config: WalkConfig) -> NDArray[np.float64]:
    """Output distribution when every coupler acts as a fair coin toss.

    After layer ``n`` the walker sits in one of ``n`` couplers whose lower
    modes are ``input_a - (n - 1) + 2 i``; coupler ``i`` is reached with
    binomial weight ``C(n - 1, i) / 2^(n - 1)`` and splits it evenly over its
    two output modes.  Either input port gives the same result.
    """
    n = config.n_steps
    out = np.zeros(config.mode_count)
    first = config.input_a - (n - 1)
    for i in range(n):
        w = comb(n - 1, i) / 2.0 ** (n - 1)
        lo = first + 2 * i
        if lo < 0 or lo + 1 >= config.mode_count:
            raise DomainError("classical light cone leaves the strip; widen mode_count")
        out[lo] += 0.5 * w
        out[lo + 1] += 0.5 * w
    return out


def total_variation(p: ArrayLike, q: ArrayLike) -> float:
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise DomainError(f"shape mismatch: {p.shape} vs {q.shape}")
    return float(0.5 * np.abs(p - q).sum())
