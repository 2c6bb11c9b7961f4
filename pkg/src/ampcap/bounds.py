"""Capacity bounds for amplitude-constrained MIMO Gaussian channels.

Two families of upper bounds are computed on the whitened channel
``X + H^{-1} Z``. The sub-space decomposition bound sums a scalar bound per
constraint factor and pays a log-det coupling penalty for treating the
whitened noise as independent across factors; it is tight at high SNR. The
water-filling bound relaxes the peak constraint to an average-power one and
is tight at low SNR. The lower bound applies the entropy power inequality
to the channel-transformed constraint region.

All reported values are bits per channel use; internal math is in nats.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import channel as _channel
from . import linalg

_LOG2 = math.log(2.0)
_TWO_PI_E = 2.0 * math.pi * math.e

KIND_EPI_LB = "epi_lb"
KIND_UB_T1 = "ub_theorem1"
KIND_UB_T2 = "ub_theorem2"
KIND_UB_PA = "ub_pa_mckellips"
KIND_COMPOUND = "compound_ub"
KIND_ORACLE = "oracle_achievable"

BOUND_KINDS = (
    KIND_EPI_LB,
    KIND_UB_T1,
    KIND_UB_T2,
    KIND_UB_PA,
    KIND_COMPOUND,
    KIND_ORACLE,
)


@dataclass(frozen=True)
class BoundResult:
    """One bound value in bits per channel use at one SNR point."""

    kind: str
    value_bits: float
    snr_db: float
    detail: Optional[dict] = None

    def __post_init__(self):
        if self.kind not in BOUND_KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if not math.isfinite(self.value_bits):
            raise ValueError("bound value must be finite")


@dataclass(frozen=True)
class WaterfillAllocation:
    """Per-channel powers filling up to a common water level."""

    powers: np.ndarray
    water_level: float
    budget: float

    def __post_init__(self):
        p = np.asarray(self.powers, dtype=float)
        object.__setattr__(self, "powers", p)
        if np.any(p < 0):
            raise ValueError("powers must be non-negative")
        if abs(float(p.sum()) - self.budget) > 1e-10 * self.budget:
            raise ValueError("powers do not exhaust the budget")


def waterfill(noise_vars, budget: float) -> WaterfillAllocation:
    """Optimal average-power split over parallel Gaussian channels.

    Returns powers ``P_i = max(mu - v_i, 0)`` with the water level ``mu``
    chosen so the powers sum to ``budget``.
    """
    v = np.asarray(noise_vars, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("noise variances must form a non-empty vector")
    if np.any(v <= 0) or not np.all(np.isfinite(v)):
        raise ValueError("noise variances must be positive and finite")
    if not (budget > 0 and math.isfinite(budget)):
        raise ValueError("budget must be positive and finite")
    vs = np.sort(v)
    n = vs.size
    mu = budget + float(vs[0])
    for k in range(n, 0, -1):
        mu = (budget + float(vs[:k].sum())) / k
        if mu > vs[k - 1]:
            break
    powers = np.maximum(mu - v, 0.0)
    powers *= budget / powers.sum()  # snap pure roundoff in the total
    return WaterfillAllocation(powers, float(mu), float(budget))


@dataclass(frozen=True)
class NoiseCovariance:
    """Whitened-noise covariance with its diagonal blocks and whiteners.

    ``D`` is the covariance of the noise after inverting the channel.
    ``blocks[i]`` is the i-th main-diagonal block under the partition and
    ``whiteners[i]`` is a matrix M with block = sigma_z2 * (M M^T)^{-1}.
    Whiteners are unique only up to an orthogonal factor; everything
    downstream depends on their singular values only.
    """

    D: np.ndarray
    partition: linalg.Partition
    sigma_z2: float
    blocks: tuple
    whiteners: tuple
    eigenvalues: np.ndarray

    @classmethod
    def from_noise(cls, D, partition: linalg.Partition, sigma_z2: float) -> "NoiseCovariance":
        A = linalg.as_real_matrix(D)
        if A.shape[0] != A.shape[1] or A.shape[0] != partition.total:
            raise ValueError("covariance shape does not match the partition")
        scale = float(np.abs(A).max())
        if not np.allclose(A, A.T, rtol=1e-9, atol=1e-12 * max(scale, 1.0)):
            raise ValueError("noise covariance must be symmetric")
        A = 0.5 * (A + A.T)
        if not (sigma_z2 > 0 and math.isfinite(sigma_z2)):
            raise ValueError("noise variance must be positive and finite")
        sigma_z = math.sqrt(sigma_z2)
        eig = np.linalg.eigvalsh(A)
        if eig[0] <= 0:
            raise np.linalg.LinAlgError("noise covariance is not positive definite")
        blocks, whiteners = [], []
        for i in range(len(partition)):
            B = linalg.principal_block(A, partition, i)
            L = linalg.cholesky_lower(B)
            M = sigma_z * np.linalg.inv(L)
            # defining relation: block = sigma_z2 * M^{-1} M^{-T}
            Minv = np.linalg.inv(M)
            recon = sigma_z2 * (Minv @ Minv.T)
            err = np.linalg.norm(recon - B) / max(np.linalg.norm(B), 1e-300)
            if err > 1e-9:
                raise np.linalg.LinAlgError("whitener reconstruction failed")
            blocks.append(B)
            whiteners.append(M)
        nc = cls(
            D=A,
            partition=partition,
            sigma_z2=float(sigma_z2),
            blocks=tuple(blocks),
            whiteners=tuple(whiteners),
            eigenvalues=eig[::-1].copy(),
        )
        if log_det_correction(nc) < -1e-12:
            raise np.linalg.LinAlgError("block determinants undershoot the full determinant")
        return nc

    def whitener_gains(self, rtol: float = 1e-8) -> list:
        """Paired singular value of each 2x2 whitener (per-antenna case)."""
        gains = []
        for M in self.whiteners:
            if M.shape != (2, 2):
                raise ValueError("whitener gains are defined for 2-dimensional sub-spaces")
            s = np.linalg.svd(M, compute_uv=False)
            gains.append(float(linalg.pair_singular_values(s, rtol=rtol)[0]))
        return gains


def noise_covariance(model: _channel.ChannelModel) -> NoiseCovariance:
    """Covariance of the channel-inverted noise, with blocks and whiteners."""
    linalg.require_full_rank(model.H)
    Hinv = np.linalg.inv(model.H)
    D = model.sigma_z2 * (Hinv @ Hinv.T)
    return NoiseCovariance.from_noise(D, model.region.partition(), model.sigma_z2)


def log_det_correction(nc: NoiseCovariance) -> float:
    """Half the log-ratio of block determinants to the full determinant, nats.

    Non-negative for positive-definite covariances; exactly zero when the
    covariance is block diagonal (diagonal channels).
    """
    block_sum = sum(linalg.log_det(B) for B in nc.blocks)
    return 0.5 * (block_sum - linalg.log_det(nc.D))


def epi_lower_bound(model: _channel.ChannelModel) -> BoundResult:
    """Entropy-power-inequality lower bound in bits per channel use."""
    m = _channel.normalize_radii(model)
    n = m.region.dimension
    log_vol_hx = linalg.log_det(m.H) + m.region.log_volume()
    arg = math.exp(2.0 * log_vol_hx / n) / (_TWO_PI_E * m.sigma_z2)
    bits = 0.5 * n * math.log1p(arg) / _LOG2
    return BoundResult(
        KIND_EPI_LB,
        max(bits, 0.0),
        _channel.snr_db_of(m),
        {"log_volume_hx_nats": log_vol_hx},
    )


def upper_bound_waterfilling(model: _channel.ChannelModel) -> BoundResult:
    """Low-SNR upper bound from an average-power relaxation.

    The peak constraint is relaxed to a total average power of
    ``radius^2 * K`` spent over the eigen-channels of the whitened noise via
    water-filling.
    """
    m = _channel.normalize_radii(model)
    nc = noise_covariance(m)
    R = m.region.common_radius
    budget = R * R * len(m.region.subregions)
    alloc = waterfill(nc.eigenvalues, budget)
    nats = 0.5 * float(np.sum(np.log1p(alloc.powers / nc.eigenvalues)))
    detail = {
        "powers": alloc.powers,
        "water_level": alloc.water_level,
        "noise_eigenvalues": nc.eigenvalues,
    }
    return BoundResult(KIND_UB_T2, max(nats / _LOG2, 0.0), _channel.snr_db_of(m), detail)


def mckellips_ci(gain: float, radius: float, sigma_z: float) -> float:
    """Closed-form cap for one 2-D amplitude-constrained sub-channel, in nats.

    Monotone increasing in ``gain * radius / sigma_z``.
    """
    if gain <= 0 or radius <= 0 or sigma_z <= 0:
        raise ValueError("gain, radius and sigma_z must be positive")
    x = gain * radius / sigma_z
    return math.log1p(math.sqrt(math.pi / 2.0) * x + x * x / (2.0 * math.e))


def mckellips_sub_bound(nc: NoiseCovariance, region: _channel.ConstraintRegion, i: int) -> float:
    """Per-sub-space bound using the 2-D closed form; needs 2-ball factors."""
    sr = region.subregions[i]
    if sr.shape != _channel.BALL or sr.dimension != 2:
        raise ValueError("McKellips sub-bound requires 2-ball sub-regions")
    s = np.linalg.svd(nc.whiteners[i], compute_uv=False)
    gain = float(linalg.pair_singular_values(s)[0])
    return mckellips_ci(gain, sr.radius, math.sqrt(nc.sigma_z2))


def gaussian_power_sub_bound(nc: NoiseCovariance, region: _channel.ConstraintRegion, i: int) -> float:
    """Average-power bound for one sub-space, any factor shape, in nats.

    Water-fills ``radius^2`` over the block's noise spectrum; valid because
    the peak radius caps the average power of the factor.
    """
    sr = region.subregions[i]
    lam = np.linalg.eigvalsh(nc.blocks[i])
    alloc = waterfill(lam, sr.radius ** 2)
    return 0.5 * float(np.sum(np.log1p(alloc.powers / lam)))


SubBounder = Callable[[NoiseCovariance, _channel.ConstraintRegion, int], float]


def upper_bound_subspaces(
    model: _channel.ChannelModel, sub_bounder: Optional[SubBounder] = None
) -> BoundResult:
    """High-SNR upper bound: per-sub-space bounds plus the coupling penalty.

    ``sub_bounder(nc, region, i)`` must return an upper bound in nats for the
    i-th whitened sub-channel; the default is the shape-agnostic
    average-power bounder.
    """
    m = _channel.normalize_radii(model)
    nc = noise_covariance(m)
    bounder = sub_bounder if sub_bounder is not None else gaussian_power_sub_bound
    terms = [float(bounder(nc, m.region, i)) for i in range(len(m.region.subregions))]
    corr = log_det_correction(nc)
    bits = (sum(terms) + corr) / _LOG2
    detail = {
        "per_subspace_bits": [t / _LOG2 for t in terms],
        "correction_bits": corr / _LOG2,
    }
    return BoundResult(KIND_UB_T1, max(bits, 0.0), _channel.snr_db_of(m), detail)


def upper_bound_per_antenna(model: _channel.ChannelModel) -> BoundResult:
    """Per-antenna specialization of the sub-space bound via the 2-D closed form."""
    m = _channel.normalize_radii(model)
    if not m.region.is_per_antenna:
        raise ValueError("per-antenna bound requires 2-ball sub-regions of a common radius")
    inner = upper_bound_subspaces(m, sub_bounder=mckellips_sub_bound)
    return BoundResult(KIND_UB_PA, inner.value_bits, inner.snr_db, inner.detail)


def _try_per_antenna(model: _channel.ChannelModel) -> Optional[BoundResult]:
    """Per-antenna bound, or None when the configuration does not support it.

    Besides the region shape this needs paired whitener singular values,
    which only vectorized complex channels guarantee.
    """
    if not model.region.is_per_antenna:
        return None
    try:
        return upper_bound_per_antenna(model)
    except ValueError:
        return None


def compound_upper_bound(model: _channel.ChannelModel) -> BoundResult:
    """Minimum of all upper bounds applicable to the model's region."""
    m = _channel.normalize_radii(model)
    candidates = [upper_bound_waterfilling(m), upper_bound_subspaces(m)]
    pa = _try_per_antenna(m)
    if pa is not None:
        candidates.append(pa)
    best = min(candidates, key=lambda r: r.value_bits)
    detail = {
        "candidates": {r.kind: r.value_bits for r in candidates},
        "selected": best.kind,
    }
    return BoundResult(KIND_COMPOUND, best.value_bits, best.snr_db, detail)


def bound_summary(model: _channel.ChannelModel) -> dict:
    """Every bound at the model's SNR, in bits, plus correction and gap.

    Keys match the sweep CSV columns. ``ub_pa1`` is None when the region is
    not per-antenna; ``gap_bits`` is the compound upper bound minus the lower
    bound.
    """
    m = _channel.normalize_radii(model)
    nc = noise_covariance(m)
    epi = epi_lower_bound(m)
    t2 = upper_bound_waterfilling(m)
    t1 = upper_bound_subspaces(m)
    pa = _try_per_antenna(m)
    uppers = [t1, t2] + ([pa] if pa is not None else [])
    compound = min(r.value_bits for r in uppers)
    return {
        "snr_db": _channel.snr_db_of(m),
        "epi_lb": epi.value_bits,
        "ub_t1": t1.value_bits,
        "ub_t2": t2.value_bits,
        "ub_pa1": None if pa is None else pa.value_bits,
        "compound_ub": compound,
        "correction": log_det_correction(nc) / _LOG2,
        "gap_bits": compound - epi.value_bits,
    }
