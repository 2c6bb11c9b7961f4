"""Channel instances: product constraint regions, fading matrix, noise and SNR.

A channel is ``Y = H X + sigma_z Z`` with ``X`` confined to a Cartesian
product of sub-regions (balls or boxes), one per power amplifier. Radii are
defined as the norm supremum of each sub-region, so a box stores its
circumscribed radius.
"""

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from . import linalg

BALL = "ball"
BOX = "box"
_SHAPES = (BALL, BOX)


class ModelFormatError(ValueError):
    """Channel file is malformed or violates the schema."""


@dataclass(frozen=True)
class SubRegion:
    """One factor of the constraint region.

    ``radius`` is the norm supremum of the sub-region. For a box this is the
    circumscribed radius, so the side length is ``2 * radius / sqrt(dimension)``.
    """

    dimension: int
    shape: str
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "dimension", int(self.dimension))
        object.__setattr__(self, "radius", float(self.radius))
        if self.dimension < 1:
            raise ValueError("sub-region dimension must be at least 1")
        if self.shape not in _SHAPES:
            raise ValueError(f"unknown sub-region shape {self.shape!r}")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError("sub-region radius must be positive and finite")

    @property
    def box_side(self) -> float:
        if self.shape != BOX:
            raise ValueError("box_side is only defined for box sub-regions")
        return 2.0 * self.radius / math.sqrt(self.dimension)

    def log_volume(self) -> float:
        n = self.dimension
        if self.shape == BALL:
            return 0.5 * n * math.log(math.pi) + n * math.log(self.radius) - math.lgamma(0.5 * n + 1.0)
        return n * math.log(self.box_side)

    def volume(self) -> float:
        return math.exp(self.log_volume())

    def contains(self, x, tol: float = 1e-9) -> bool:
        v = np.asarray(x, dtype=float).ravel()
        if v.size != self.dimension:
            raise ValueError("point dimension does not match the sub-region")
        slack = 1.0 + tol
        if self.shape == BALL:
            return float(np.linalg.norm(v)) <= self.radius * slack
        return float(np.max(np.abs(v))) <= 0.5 * self.box_side * slack


@dataclass(frozen=True)
class ConstraintRegion:
    """Cartesian product of sub-regions."""

    subregions: tuple

    def __post_init__(self):
        subs = tuple(self.subregions)
        if not subs:
            raise ValueError("constraint region needs at least one sub-region")
        if not all(isinstance(s, SubRegion) for s in subs):
            raise ValueError("subregions must be SubRegion instances")
        object.__setattr__(self, "subregions", subs)

    @property
    def dimension(self) -> int:
        return sum(s.dimension for s in self.subregions)

    @property
    def radii(self) -> tuple:
        return tuple(s.radius for s in self.subregions)

    @property
    def is_normalized(self) -> bool:
        r0 = self.subregions[0].radius
        return all(s.radius == r0 for s in self.subregions)

    @property
    def common_radius(self) -> float:
        if not self.is_normalized:
            raise ValueError("region radii differ; normalize the model first")
        return self.subregions[0].radius

    @property
    def is_per_antenna(self) -> bool:
        """True when every factor is a 2-ball of one common radius."""
        return (
            all(s.shape == BALL and s.dimension == 2 for s in self.subregions)
            and self.is_normalized
        )

    def partition(self) -> linalg.Partition:
        return linalg.Partition(tuple(s.dimension for s in self.subregions))

    def log_volume(self) -> float:
        return sum(s.log_volume() for s in self.subregions)

    def volume(self) -> float:
        out = 1.0
        for s in self.subregions:
            out *= s.volume()
        return out

    def contains(self, point, tol: float = 1e-9) -> bool:
        v = np.asarray(point, dtype=float).ravel()
        if v.size != self.dimension:
            raise ValueError("point dimension does not match the region")
        part = self.partition()
        return all(
            s.contains(v[part.block_slice(i)], tol=tol)
            for i, s in enumerate(self.subregions)
        )


def volume(region: ConstraintRegion) -> float:
    """Volume of the product region (product of sub-region volumes)."""
    return region.volume()


def per_antenna_region(n_antennas: int, radius: float = 1.0) -> ConstraintRegion:
    """One 2-ball per antenna, all with the same radius."""
    if n_antennas < 1:
        raise ValueError("need at least one antenna")
    return ConstraintRegion(tuple(SubRegion(2, BALL, radius) for _ in range(n_antennas)))


@dataclass(frozen=True)
class ChannelModel:
    """Square fading channel with Gaussian noise and a product constraint region."""

    H: np.ndarray
    sigma_z2: float
    region: ConstraintRegion

    def __post_init__(self):
        H = linalg.as_real_matrix(self.H).copy()
        if H.shape[0] != H.shape[1]:
            raise ValueError("channel matrix must be square")
        if H.shape[0] != self.region.dimension:
            raise ValueError(
                f"channel is {H.shape[0]}-dimensional but region covers {self.region.dimension}"
            )
        linalg.require_full_rank(H)
        H.flags.writeable = False
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "sigma_z2", float(self.sigma_z2))
        if not (self.sigma_z2 > 0 and math.isfinite(self.sigma_z2)):
            raise ValueError("noise variance must be positive and finite")

    @property
    def dimension(self) -> int:
        return self.region.dimension

    @property
    def sigma_z(self) -> float:
        return math.sqrt(self.sigma_z2)


@dataclass(frozen=True)
class SnrPoint:
    """Linear/dB view of one signal-to-noise ratio value."""

    snr_linear: float
    snr_db: float

    @classmethod
    def from_db(cls, snr_db: float) -> "SnrPoint":
        return cls(10.0 ** (snr_db / 10.0), float(snr_db))

    @classmethod
    def from_linear(cls, snr_linear: float) -> "SnrPoint":
        if snr_linear <= 0:
            raise ValueError("linear SNR must be positive")
        return cls(float(snr_linear), 10.0 * math.log10(snr_linear))

    @classmethod
    def of_model(cls, model: ChannelModel) -> "SnrPoint":
        R = model.region.common_radius
        return cls.from_linear(R * R / (model.dimension * model.sigma_z2))


def snr_db_of(model: ChannelModel) -> float:
    """SNR of a normalized model in dB."""
    return SnrPoint.of_model(model).snr_db


def sigma_for_snr(region: ConstraintRegion, snr_db: float) -> float:
    """Noise variance that puts a normalized region at the requested SNR."""
    R = region.common_radius
    return R * R / (region.dimension * 10.0 ** (snr_db / 10.0))


def normalize_radii(model: ChannelModel) -> ChannelModel:
    """Rescale sub-regions to one common radius, compensating inside H.

    The common radius is the first sub-region's. Each column block of H is
    scaled by the ratio old radius over new, which leaves the input-output
    map over the constraint set unchanged. Already-normalized models are
    returned as is.
    """
    region = model.region
    if region.is_normalized:
        return model
    R = region.subregions[0].radius
    H = np.array(model.H)
    part = region.partition()
    for i, sr in enumerate(region.subregions):
        if sr.radius != R:
            H[:, part.block_slice(i)] *= sr.radius / R
    new_region = ConstraintRegion(tuple(replace(s, radius=R) for s in region.subregions))
    return ChannelModel(H, model.sigma_z2, new_region)


def model_at_snr(model: ChannelModel, snr_db: float) -> ChannelModel:
    """Copy of the model with its noise variance set for the given SNR."""
    m = normalize_radii(model)
    return replace(m, sigma_z2=sigma_for_snr(m.region, snr_db))


def random_channel(n_complex: int, seed: int, max_attempts: int = 100) -> np.ndarray:
    """Random complex fading matrix with i.i.d. unit-variance entries.

    Entries are circularly-symmetric complex Gaussian. Draws are rejected
    and repeated while the condition number exceeds the rank threshold,
    which almost never triggers.
    """
    if n_complex < 1:
        raise ValueError("need at least one complex dimension")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        Hc = (
            rng.standard_normal((n_complex, n_complex))
            + 1j * rng.standard_normal((n_complex, n_complex))
        ) / math.sqrt(2.0)
        if np.linalg.cond(Hc) <= linalg.CONDITION_LIMIT:
            return Hc
    raise RuntimeError("could not draw a well-conditioned channel; check the RNG setup")


def per_antenna_model(Hc, radius: float = 1.0, sigma_z2: float = 1.0) -> ChannelModel:
    """Realify a complex channel and attach a per-antenna ball constraint."""
    A = linalg.as_complex_matrix(Hc)
    return ChannelModel(linalg.realify(A), sigma_z2, per_antenna_region(A.shape[0], radius))


def channel_with_whitener_gains(gains, mixing: float = 0.5, phase_step: float = 0.9) -> np.ndarray:
    """Complex channel whose per-antenna noise whiteners have the given gains.

    The whitener gain of antenna i equals the reciprocal norm of row i of the
    inverse channel, so the matrix is built by writing down that inverse: unit
    rows tilted off the coordinate axes (to keep the cross-antenna noise
    coupling non-trivial), scaled by one over the requested gains.
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1 or g.size == 0 or np.any(g <= 0):
        raise ValueError("gains must be a non-empty vector of positive reals")
    n = g.size
    rows = np.eye(n, dtype=complex)
    for i in range(n):
        for j in range(n):
            if i != j:
                rows[i, j] = mixing * np.exp(1j * phase_step * (i + j + 1))
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    Hc_inv = rows / g[:, None]
    if np.linalg.cond(Hc_inv) > linalg.CONDITION_LIMIT:
        raise ValueError("requested gains lead to a rank-deficient channel")
    return np.linalg.inv(Hc_inv)


def _fmt_number(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    v = float(x)
    if not math.isfinite(v):
        raise ValueError("cannot serialize a non-finite number")
    # 17 significant digits round-trip IEEE-754 doubles exactly
    return format(v, ".17g")


def _dumps(value, level: int = 0) -> str:
    pad = "  " * level
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f'{pad}  "{k}": {_dumps(v, level + 1)}' for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(_dumps(v, level + 1) for v in value) + "]"
        items = [pad + "  " + _dumps(v, level + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, str):
        return json.dumps(value)
    return _fmt_number(value)


def _region_doc(region: ConstraintRegion) -> list:
    return [
        {"dim": s.dimension, "shape": s.shape, "radius": s.radius}
        for s in region.subregions
    ]


def save_model(model: ChannelModel, path) -> None:
    """Write the model as JSON with the real channel matrix."""
    doc = {
        "H_real": [[float(v) for v in row] for row in model.H],
        "sigma_z2": model.sigma_z2,
        "partition": _region_doc(model.region),
    }
    with open(path, "w") as f:
        f.write(_dumps(doc) + "\n")


def save_complex_channel(path, Hc, region: ConstraintRegion, sigma_z2: float) -> None:
    """Write a channel file in complex form; loading realifies it."""
    A = linalg.as_complex_matrix(Hc)
    doc = {
        "n_complex": A.shape[0],
        "H_complex": [[[v.real, v.imag] for v in row] for row in A],
        "sigma_z2": float(sigma_z2),
        "partition": _region_doc(region),
    }
    with open(path, "w") as f:
        f.write(_dumps(doc) + "\n")


def _parse_region(doc) -> ConstraintRegion:
    part = doc.get("partition")
    if not isinstance(part, list) or not part:
        raise ModelFormatError("channel file needs a non-empty 'partition' array")
    subs = []
    for entry in part:
        if not isinstance(entry, dict):
            raise ModelFormatError("partition entries must be objects")
        try:
            subs.append(SubRegion(entry["dim"], entry["shape"], entry["radius"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelFormatError(f"bad partition entry {entry!r}: {exc}") from exc
    return ConstraintRegion(tuple(subs))


def load_model(path) -> ChannelModel:
    """Read a channel file written by :func:`save_model` or in complex form.

    Raises :class:`ModelFormatError` for parse or schema problems and
    :class:`ampcap.linalg.RankDeficientError` when the stored channel matrix
    is singular.
    """
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelFormatError("channel file must contain a JSON object")
    region = _parse_region(doc)
    has_real = "H_real" in doc
    has_complex = "H_complex" in doc
    if has_real == has_complex:
        raise ModelFormatError("channel file needs exactly one of 'H_real' or 'H_complex'")
    try:
        if has_real:
            H = linalg.as_real_matrix(np.array(doc["H_real"], dtype=float))
        else:
            raw = np.array(doc["H_complex"], dtype=float)
            if raw.ndim != 3 or raw.shape[2] != 2 or raw.shape[0] != raw.shape[1]:
                raise ModelFormatError("'H_complex' must be a square array of [re, im] pairs")
            Hc = raw[:, :, 0] + 1j * raw[:, :, 1]
            n_complex = doc.get("n_complex")
            if n_complex is not None and int(n_complex) != Hc.shape[0]:
                raise ModelFormatError("'n_complex' disagrees with the matrix size")
            H = linalg.realify(Hc)
        sigma_z2 = float(doc["sigma_z2"])
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"bad channel file: {exc}") from exc
    try:
        return ChannelModel(H, sigma_z2, region)
    except linalg.RankDeficientError:
        raise
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from exc
