"""Independent verification machinery.

Monte Carlo mutual information for discrete input constellations gives
achievable rates that must stay below every upper bound, and a brute-force
bisection water-filler cross-checks the closed-form allocator.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import channel as _channel
from .bounds import BoundResult, KIND_ORACLE, WaterfillAllocation

_LOG2 = math.log(2.0)

# Refuse constellations beyond this many points.
MAX_POINTS = 10 ** 6


@dataclass(frozen=True)
class Constellation:
    """Finite input distribution: one point per row, simplex weights."""

    points: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        probs = np.asarray(self.probabilities, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("points must form a non-empty 2-D array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("constellation points must be finite")
        if probs.shape != (pts.shape[0],):
            raise ValueError("one probability per point is required")
        if np.any(probs < 0) or abs(float(probs.sum()) - 1.0) > 1e-12:
            raise ValueError("probabilities must be a simplex vector")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probabilities", probs)

    def __len__(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class MiEstimate:
    """Monte Carlo mutual information estimate with its standard error."""

    value_bits: float
    std_error_bits: float
    samples: int
    seed: int

    def __post_init__(self):
        if not math.isfinite(self.value_bits) or not math.isfinite(self.std_error_bits):
            raise ValueError("estimate and standard error must be finite")
        if self.std_error_bits < 0:
            raise ValueError("standard error must be non-negative")
        if self.value_bits < -3.0 * self.std_error_bits:
            raise ValueError("estimate is implausibly negative; estimator misconfigured")

    def to_bound_result(self, snr_db: float) -> BoundResult:
        return BoundResult(
            KIND_ORACLE,
            max(self.value_bits, 0.0),
            snr_db,
            {"std_error_bits": self.std_error_bits, "samples": self.samples, "seed": self.seed},
        )


def per_antenna_constellation(
    model: _channel.ChannelModel, rings: int, phases: int
) -> Constellation:
    """Product of ring-and-phase grids, one grid per antenna.

    Each antenna carries ``rings`` evenly spaced amplitudes, the outermost at
    the constraint radius, with ``phases`` uniform angles on each ring. The
    product across antennas is weighted uniformly.
    """
    region = model.region
    if not region.is_per_antenna:
        raise ValueError("ring-phase constellations need a per-antenna region")
    rings, phases = int(rings), int(phases)
    if rings < 1:
        raise ValueError("need at least one ring")
    if phases < 2:
        raise ValueError("need at least two phases")
    K = len(region.subregions)
    R = region.common_radius
    per_antenna = rings * phases
    count = per_antenna ** K
    if count > MAX_POINTS:
        raise ValueError(f"constellation would have {count} points (limit {MAX_POINTS})")
    radii = R * np.arange(1, rings + 1) / rings
    angles = 2.0 * np.pi * np.arange(phases) / phases
    grid = np.stack(
        [
            np.outer(radii, np.cos(angles)).ravel(),
            np.outer(radii, np.sin(angles)).ravel(),
        ],
        axis=1,
    )
    meshes = np.meshgrid(*([np.arange(per_antenna)] * K), indexing="ij")
    idx = np.stack([g.ravel() for g in meshes], axis=1)
    points = grid[idx].reshape(count, 2 * K)
    return Constellation(points, np.full(count, 1.0 / count))


def default_constellation(model: _channel.ChannelModel) -> Constellation:
    """Ring count grows with SNR (capped at 4), 8 phases per ring."""
    m = _channel.normalize_radii(model)
    rings = min(4, max(1, int(m.region.common_radius / (2.0 * m.sigma_z))))
    return per_antenna_constellation(m, rings=rings, phases=8)


def _check_membership(constellation: Constellation, region: _channel.ConstraintRegion) -> None:
    part = region.partition()
    for i, sr in enumerate(region.subregions):
        block = constellation.points[:, part.block_slice(i)]
        if sr.shape == _channel.BALL:
            worst = float(np.max(np.linalg.norm(block, axis=1)))
            limit = sr.radius
        else:
            worst = float(np.max(np.abs(block)))
            limit = 0.5 * sr.box_side
        if worst > limit * (1.0 + 1e-9):
            raise ValueError(f"constellation leaves sub-region {i} (max {worst} > {limit})")


def mc_mutual_information(
    model: _channel.ChannelModel,
    constellation: Constellation,
    samples: int,
    seed: int,
    batch_size: int = 8192,
) -> MiEstimate:
    """Monte Carlo estimate of the input-output mutual information in bits.

    Draws channel inputs from the constellation and Gaussian noise, then
    averages the log ratio of the conditional output density to the mixture
    output density. The estimator is unbiased and its spread is reported as
    the standard error of the sample mean. Results are reproducible for a
    fixed seed regardless of batch size.
    """
    samples = int(samples)
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    if constellation.points.shape[1] != model.dimension:
        raise ValueError("constellation dimension does not match the channel")
    _check_membership(constellation, model.region)

    rng = np.random.default_rng(seed)
    n_points = len(constellation)
    probs = constellation.probabilities
    idx = rng.choice(n_points, size=samples, p=probs)
    noise = rng.standard_normal((samples, model.dimension))

    # Log-likelihood up to a per-sample constant that cancels between the
    # conditional and mixture terms: y . y_k / var - |y_k|^2 / (2 var).
    y_points = constellation.points @ model.H.T
    half_pts_sq = 0.5 * np.einsum("ij,ij->i", y_points, y_points)
    with np.errstate(divide="ignore"):
        log_prior = np.log(probs)
    inv_var = 1.0 / model.sigma_z2
    sigma_z = model.sigma_z
    y_points_scaled = y_points * inv_var
    offset = log_prior - half_pts_sq * inv_var

    vals = np.empty(samples)
    for start in range(0, samples, batch_size):
        sl = slice(start, min(start + batch_size, samples))
        sent = idx[sl]
        y = y_points[sent] + sigma_z * noise[sl]
        loglik = y @ y_points_scaled.T
        loglik += offset[None, :]
        num = loglik[np.arange(loglik.shape[0]), sent] - log_prior[sent]
        peak = loglik.max(axis=1)
        loglik -= peak[:, None]
        np.exp(loglik, out=loglik)
        den = peak + np.log(loglik.sum(axis=1))
        vals[sl] = num - den

    mean_bits = float(vals.mean()) / _LOG2
    stderr_bits = float(vals.std(ddof=1)) / math.sqrt(samples) / _LOG2
    return MiEstimate(mean_bits, stderr_bits, samples, int(seed))


def waterfill_bisection(noise_vars, budget: float, iterations: int = 200) -> WaterfillAllocation:
    """Water-filling by bisection on the water level; slow but independent.

    Searches the level on ``[min v, max v + budget]``; used to cross-check
    the closed-form allocator in tests.
    """
    v = np.asarray(noise_vars, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("noise variances must form a non-empty vector")
    if np.any(v <= 0) or not np.all(np.isfinite(v)):
        raise ValueError("noise variances must be positive and finite")
    if not (budget > 0 and math.isfinite(budget)):
        raise ValueError("budget must be positive and finite")
    lo = float(v.min())
    hi = float(v.max()) + budget
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if float(np.maximum(mid - v, 0.0).sum()) < budget:
            lo = mid
        else:
            hi = mid
    mu = 0.5 * (lo + hi)
    powers = np.maximum(mu - v, 0.0)
    total = float(powers.sum())
    if total > 0:
        powers *= budget / total
    return WaterfillAllocation(powers, mu, float(budget))
