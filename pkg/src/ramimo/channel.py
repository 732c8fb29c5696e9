r"""Channel generation: LoS array geometry, scattering draws, Rician mixing.

The deterministic part is a uniform-linear-array line-of-sight model in the
radiating near field: entry (i, j) of the channel carries the quadratic
phase ``exp(j*pi*(i*d_r - j*d_t)**2 / (wavelength * distance))``.  At the
optimal antenna-separation product ``d_t * d_r = wavelength * distance /
max(M, N)`` the columns are mutually orthogonal and the link supports its
full spatial multiplexing gain; shrinking the arrays (``eta`` above 1)
collapses the matrix toward the rank-one all-ones limit.

Randomness is counter-based: a :class:`RandomStream` names a generator by
``(master_seed, stream_index)`` instead of by draw order, so Monte Carlo
trials can be evaluated in any order, chunking, or thread layout and still
produce identical samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelValidityError, ValidationError

__all__ = [
    "PURE_LOS",
    "LosGeometry",
    "RicianSpec",
    "RandomStream",
    "ChannelSpec",
    "as_complex_matrix",
    "make_los_geometry",
    "spacing_for_eta",
    "los_channel",
    "nlos_sample",
    "rician_compose",
]

#: Rician factor sentinel selecting the deterministic (scatter-free) limit.
PURE_LOS = math.inf

# The quadratic-phase LoS model is a parabolic wavefront approximation; it is
# only trustworthy well clear of the reactive near field.
_MIN_RANGE_WAVELENGTHS = 100.0

_U64 = 1 << 64


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise ValidationError(f"{name} must be a positive finite number, got {value!r}")
    return value


def _check_count(name: str, value: int) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
        raise ValidationError(f"{name} must be an integer >= 1, got {value!r}")
    return int(value)


def as_complex_matrix(matrix, name: str = "matrix") -> np.ndarray:
    """Coerce ``matrix`` to a 2-D complex128 array with finite entries.

    Raises :class:`ValidationError` for anything that is not a non-empty
    two-dimensional array of finite complex numbers.
    """
    try:
        arr = np.asarray(matrix, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} is not convertible to a complex matrix: {exc}") from exc
    if arr.ndim != 2 or arr.size == 0:
        raise ValidationError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class LosGeometry:
    """Geometry of a point-to-point uniform-linear-array LoS link.

    Lengths are in meters.  ``tx_count``/``rx_count`` are the transmit and
    receive element counts (M and N); spacings are inter-element distances.
    """

    wavelength: float
    link_distance: float
    tx_count: int
    rx_count: int
    tx_spacing: float
    rx_spacing: float

    def __post_init__(self) -> None:
        for attr in ("wavelength", "link_distance", "tx_spacing", "rx_spacing"):
            object.__setattr__(self, attr, _check_positive(attr, getattr(self, attr)))
        object.__setattr__(self, "tx_count", _check_count("tx_count", self.tx_count))
        object.__setattr__(self, "rx_count", _check_count("rx_count", self.rx_count))
        if self.link_distance < _MIN_RANGE_WAVELENGTHS * self.wavelength:
            raise ModelValidityError(
                f"link_distance {self.link_distance} m is below "
                f"{_MIN_RANGE_WAVELENGTHS:g} wavelengths "
                f"({_MIN_RANGE_WAVELENGTHS * self.wavelength:g} m); the "
                "quadratic-phase LoS model does not apply that close"
            )

    @property
    def separation_product(self) -> float:
        """Product of the two element spacings, ``d_t * d_r``."""
        return self.tx_spacing * self.rx_spacing

    @property
    def eta(self) -> float:
        """Ratio of the orthogonality-optimal separation product to the actual one.

        1.0 means the geometry supports orthogonal LoS columns; values above 1
        mean the arrays are too compact for the link distance.
        """
        optimal = self.wavelength * self.link_distance / max(self.tx_count, self.rx_count)
        return optimal / self.separation_product


def make_los_geometry(
    wavelength: float,
    link_distance: float,
    tx_count: int,
    rx_count: int,
    tx_spacing: float,
    rx_spacing: float,
) -> LosGeometry:
    """Validate and bundle the parameters of a ULA LoS link."""
    return LosGeometry(
        wavelength=wavelength,
        link_distance=link_distance,
        tx_count=tx_count,
        rx_count=rx_count,
        tx_spacing=tx_spacing,
        rx_spacing=rx_spacing,
    )


def spacing_for_eta(
    wavelength: float,
    link_distance: float,
    n_max: int,
    eta: float,
) -> tuple[float, float]:
    """Equal transmit/receive spacings realizing a given ``eta``.

    Returns ``(d_t, d_r)`` with ``d_t == d_r`` chosen so that the resulting
    separation product is ``1/eta`` times the orthogonality-optimal one.
    """
    wavelength = _check_positive("wavelength", wavelength)
    link_distance = _check_positive("link_distance", link_distance)
    n_max = _check_count("n_max", n_max)
    eta = _check_positive("eta", eta)
    spacing = math.sqrt(wavelength * link_distance / (n_max * eta))
    return spacing, spacing


def los_channel(geometry: LosGeometry) -> np.ndarray:
    """Deterministic LoS channel matrix for ``geometry``.

    Shape is ``(rx_count, tx_count)``; every entry has unit modulus.
    """
    if not isinstance(geometry, LosGeometry):
        raise ValidationError(f"geometry must be a LosGeometry, got {type(geometry).__name__}")
    rx = np.arange(geometry.rx_count) * geometry.rx_spacing
    tx = np.arange(geometry.tx_count) * geometry.tx_spacing
    path = (rx[:, None] - tx[None, :]) ** 2
    return np.exp(1j * np.pi * path / (geometry.wavelength * geometry.link_distance))


@dataclass(frozen=True)
class RandomStream:
    """Keyed, counter-based random stream.

    A stream is named by ``(master_seed, stream_index)``.  Two streams with
    the same name always produce the same draws; distinct indices under one
    seed occupy disjoint 2**128-sized blocks of the underlying Philox counter
    space, so they never overlap no matter how much either is consumed.

    :meth:`child` packs a 64-bit sub-index below the current index, giving a
    two-level hierarchy such as (sweep point, trial).
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.master_seed, (int, np.integer)) or isinstance(self.master_seed, bool):
            raise ValidationError(f"master_seed must be an integer, got {self.master_seed!r}")
        if not 0 <= int(self.master_seed) < _U64:
            raise ValidationError(f"master_seed must be in [0, 2**64), got {self.master_seed}")
        if not isinstance(self.stream_index, (int, np.integer)) or isinstance(self.stream_index, bool):
            raise ValidationError(f"stream_index must be an integer, got {self.stream_index!r}")
        if not 0 <= int(self.stream_index) < _U64 * _U64:
            raise ValidationError(f"stream_index must be in [0, 2**128), got {self.stream_index}")
        object.__setattr__(self, "master_seed", int(self.master_seed))
        object.__setattr__(self, "stream_index", int(self.stream_index))

    def child(self, index: int) -> "RandomStream":
        """Sub-stream ``index`` of this stream (two levels at most)."""
        if not isinstance(index, (int, np.integer)) or isinstance(index, bool):
            raise ValidationError(f"child index must be an integer, got {index!r}")
        if not 0 <= int(index) < _U64:
            raise ValidationError(f"child index must be in [0, 2**64), got {index}")
        if self.stream_index >= _U64:
            raise ValidationError("stream hierarchy supports at most two levels")
        return RandomStream(self.master_seed, (self.stream_index << 64) | int(index))

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        bits = np.random.Philox(key=self.master_seed, counter=self.stream_index << 128)
        return np.random.Generator(bits)


@dataclass(frozen=True)
class RicianSpec:
    """Rician factor K >= 0; :data:`PURE_LOS` selects the deterministic limit."""

    k_factor: float

    def __post_init__(self) -> None:
        k = self.k_factor
        if isinstance(k, bool) or not isinstance(k, (int, float, np.integer, np.floating)):
            raise ValidationError(f"k_factor must be a number, got {k!r}")
        k = float(k)
        if math.isnan(k) or k < 0.0:
            raise ValidationError(f"k_factor must be >= 0 (or inf), got {k!r}")
        object.__setattr__(self, "k_factor", k)

    @property
    def is_pure_los(self) -> bool:
        return math.isinf(self.k_factor)

    def weights(self) -> tuple[float, float]:
        """Amplitude weights ``(w_los, w_nlos)`` with ``w_los**2 + w_nlos**2 == 1``."""
        if self.is_pure_los:
            return 1.0, 0.0
        k = self.k_factor
        return math.sqrt(k / (k + 1.0)), math.sqrt(1.0 / (k + 1.0))


def nlos_sample(tx_count: int, rx_count: int, stream: RandomStream) -> np.ndarray:
    """One i.i.d. circularly-symmetric unit-variance scattering matrix.

    Shape is ``(rx_count, tx_count)``; entries are ``(x + 1j*y) / sqrt(2)``
    with x, y independent standard normals, so ``E[|h|**2] == 1``.
    """
    tx_count = _check_count("tx_count", tx_count)
    rx_count = _check_count("rx_count", rx_count)
    if not isinstance(stream, RandomStream):
        raise ValidationError(f"stream must be a RandomStream, got {type(stream).__name__}")
    gen = stream.generator()
    re = gen.standard_normal((rx_count, tx_count))
    im = gen.standard_normal((rx_count, tx_count))
    return (re + 1j * im) / math.sqrt(2.0)


def rician_compose(spec: RicianSpec, h_los, h_nlos) -> np.ndarray:
    """Mix deterministic and scattered components by the Rician rule.

    Returns ``sqrt(K/(K+1)) * h_los + sqrt(1/(K+1)) * h_nlos``; the K = inf
    branch returns ``h_los`` exactly and K = 0 returns ``h_nlos`` exactly.
    """
    if not isinstance(spec, RicianSpec):
        raise ValidationError(f"spec must be a RicianSpec, got {type(spec).__name__}")
    los = as_complex_matrix(h_los, "h_los")
    nlos = as_complex_matrix(h_nlos, "h_nlos")
    if los.shape != nlos.shape:
        raise ValidationError(f"shape mismatch: h_los {los.shape} vs h_nlos {nlos.shape}")
    if spec.is_pure_los:
        return los.copy()
    w_los, w_nlos = spec.weights()
    return w_los * los + w_nlos * nlos


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    """LoS source plus Rician mixing rule, ready for Monte Carlo averaging.

    Exactly one of ``geometry`` and ``los`` must be set.  ``los`` carries an
    explicit deterministic matrix for limits that no finite geometry reaches
    (for instance the rank-one all-ones channel of a fully compact array).
    """

    rician: RicianSpec
    geometry: LosGeometry | None = None
    los: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.rician, RicianSpec):
            raise ValidationError(f"rician must be a RicianSpec, got {type(self.rician).__name__}")
        if (self.geometry is None) == (self.los is None):
            raise ValidationError("exactly one of geometry and los must be provided")
        if self.geometry is not None and not isinstance(self.geometry, LosGeometry):
            raise ValidationError(f"geometry must be a LosGeometry, got {type(self.geometry).__name__}")
        if self.los is not None:
            fixed = as_complex_matrix(self.los, "los")
            fixed.setflags(write=False)
            object.__setattr__(self, "los", fixed)

    @property
    def shape(self) -> tuple[int, int]:
        """(rx_count, tx_count) of the channel this spec generates."""
        if self.geometry is not None:
            return self.geometry.rx_count, self.geometry.tx_count
        return self.los.shape  # type: ignore[union-attr]

    def los_matrix(self) -> np.ndarray:
        """The deterministic component as a fresh array."""
        if self.geometry is not None:
            return los_channel(self.geometry)
        return np.array(self.los, dtype=np.complex128)
