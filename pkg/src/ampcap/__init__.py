"""Capacity bounds for peak-amplitude-constrained MIMO Gaussian channels.

The input lives in a Cartesian product of amplitude-limited sub-regions,
one per power amplifier. The package computes an entropy-power-inequality
lower bound, high- and low-SNR upper bounds, their per-antenna
specialization, and Monte Carlo achievability checks.
"""

from .linalg import (
    CONDITION_LIMIT,
    Partition,
    RankDeficientError,
    cholesky_lower,
    log_det,
    pair_singular_values,
    principal_block,
    realify,
    svd,
)
from .channel import (
    BALL,
    BOX,
    ChannelModel,
    ConstraintRegion,
    ModelFormatError,
    SnrPoint,
    SubRegion,
    channel_with_whitener_gains,
    load_model,
    model_at_snr,
    normalize_radii,
    per_antenna_model,
    per_antenna_region,
    random_channel,
    save_complex_channel,
    save_model,
    sigma_for_snr,
    snr_db_of,
    volume,
)
from .bounds import (
    BOUND_KINDS,
    BoundResult,
    NoiseCovariance,
    WaterfillAllocation,
    bound_summary,
    compound_upper_bound,
    epi_lower_bound,
    gaussian_power_sub_bound,
    log_det_correction,
    mckellips_ci,
    mckellips_sub_bound,
    noise_covariance,
    upper_bound_per_antenna,
    upper_bound_subspaces,
    upper_bound_waterfilling,
    waterfill,
)
from .oracle import (
    Constellation,
    MiEstimate,
    default_constellation,
    mc_mutual_information,
    per_antenna_constellation,
    waterfill_bisection,
)

__version__ = "0.1.0"

__all__ = [
    "BALL",
    "BOX",
    "BOUND_KINDS",
    "BoundResult",
    "CONDITION_LIMIT",
    "ChannelModel",
    "Constellation",
    "ConstraintRegion",
    "MiEstimate",
    "ModelFormatError",
    "NoiseCovariance",
    "Partition",
    "RankDeficientError",
    "SnrPoint",
    "SubRegion",
    "WaterfillAllocation",
    "bound_summary",
    "channel_with_whitener_gains",
    "cholesky_lower",
    "compound_upper_bound",
    "default_constellation",
    "epi_lower_bound",
    "gaussian_power_sub_bound",
    "load_model",
    "log_det",
    "log_det_correction",
    "mc_mutual_information",
    "mckellips_ci",
    "mckellips_sub_bound",
    "model_at_snr",
    "noise_covariance",
    "normalize_radii",
    "pair_singular_values",
    "per_antenna_constellation",
    "per_antenna_model",
    "per_antenna_region",
    "principal_block",
    "random_channel",
    "realify",
    "save_complex_channel",
    "save_model",
    "sigma_for_snr",
    "snr_db_of",
    "svd",
    "upper_bound_per_antenna",
    "upper_bound_subspaces",
    "upper_bound_waterfilling",
    "volume",
    "waterfill",
    "waterfill_bisection",
]
