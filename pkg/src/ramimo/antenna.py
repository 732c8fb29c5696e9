r"""Parametric multi-beam lens antenna model.

Models a switched-feed spherical-lens antenna by its far-field azimuth cut:
each feed launches a pencil beam whose main lobe is Gaussian in dB,

    G(theta) = peak - 12 * ((theta - theta_f) / beamwidth_3db)**2,

floored at the side-lobe level ``peak - sll_db``.  Two numbers (peak gain and
3 dB beamwidth) therefore fix the whole pattern.  Exciting several feeds at
once produces independent beams; the composite pattern power-sums the main
lobes and applies the side-lobe floor once to the combination, so each beam
keeps its inherent peak gain.  Per-feed phases act only on the complex state
entry a selection induces on a link (:func:`state_entry`).

The default model is a five-feed design: beams at 30..150 degrees (a
120-degree switchable span), 30 dBi per beam, side lobes 12 dB down, in the
50-70 GHz band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import CoverageError, FeedConflictError, ValidationError

__all__ = [
    "AntennaModel",
    "BeamSelection",
    "default_model",
    "beamwidth_from_gain",
    "feed_gain",
    "composite_gain",
    "select_feeds",
    "state_entry",
    "pattern_cut",
]

#: Solid angle of the full sphere in square degrees (Kraus' constant).
FULL_SPHERE_SQ_DEG = 41253.0

_TWO_PI = 2.0 * math.pi


def beamwidth_from_gain(peak_gain_dbi: float) -> float:
    """3 dB beamwidth (degrees) of a symmetric pencil beam with the given gain.

    Kraus' directivity approximation ``D = 41253 / bw**2`` solved for the
    beamwidth; 30 dBi gives about 6.4 degrees.
    """
    peak_gain_dbi = float(peak_gain_dbi)
    if not math.isfinite(peak_gain_dbi):
        raise ValidationError(f"peak_gain_dbi must be finite, got {peak_gain_dbi!r}")
    return math.sqrt(FULL_SPHERE_SQ_DEG / 10.0 ** (peak_gain_dbi / 10.0))


@dataclass(frozen=True)
class AntennaModel:
    """A multi-feed lens antenna described by its azimuth-cut pattern parameters.

    ``band_ghz`` and ``lens_metadata`` are descriptive only; no operation
    reads them.
    """

    feed_directions_deg: tuple[float, ...]
    peak_gain_dbi: float
    sll_db: float
    beamwidth_3db_deg: float
    band_ghz: tuple[float, float] = (50.0, 70.0)
    lens_metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        directions = tuple(float(d) for d in self.feed_directions_deg)
        if len(directions) < 1:
            raise ValidationError("at least one feed direction is required")
        for d in directions:
            if not (math.isfinite(d) and 0.0 <= d <= 180.0):
                raise ValidationError(f"feed directions must lie in [0, 180] degrees, got {d!r}")
        if any(b <= a for a, b in zip(directions, directions[1:])):
            raise ValidationError(f"feed directions must be strictly increasing, got {directions}")
        object.__setattr__(self, "feed_directions_deg", directions)
        if not (math.isfinite(float(self.peak_gain_dbi))):
            raise ValidationError(f"peak_gain_dbi must be finite, got {self.peak_gain_dbi!r}")
        object.__setattr__(self, "peak_gain_dbi", float(self.peak_gain_dbi))
        if not (math.isfinite(float(self.sll_db)) and float(self.sll_db) > 0.0):
            raise ValidationError(f"sll_db must be a positive number of dB, got {self.sll_db!r}")
        object.__setattr__(self, "sll_db", float(self.sll_db))
        if not (math.isfinite(float(self.beamwidth_3db_deg)) and float(self.beamwidth_3db_deg) > 0.0):
            raise ValidationError(f"beamwidth_3db_deg must be positive, got {self.beamwidth_3db_deg!r}")
        object.__setattr__(self, "beamwidth_3db_deg", float(self.beamwidth_3db_deg))

    @property
    def feed_count(self) -> int:
        return len(self.feed_directions_deg)

    @property
    def coverage_span_deg(self) -> float:
        """Angular distance between the outermost beams."""
        return self.feed_directions_deg[-1] - self.feed_directions_deg[0]

    @property
    def floor_dbi(self) -> float:
        """Side-lobe floor: the gain far from every main lobe."""
        return self.peak_gain_dbi - self.sll_db


@dataclass(frozen=True)
class BeamSelection:
    """Excited feed indices and one phase (radians) per excited feed.

    Phases are wrapped into [0, 2*pi) on construction.  Index validity
    against a concrete model is checked by the operations that take both.
    """

    feeds: tuple[int, ...]
    phases: tuple[float, ...]

    def __post_init__(self) -> None:
        feeds = tuple(int(f) for f in self.feeds)
        if len(feeds) < 1:
            raise ValidationError("a beam selection must excite at least one feed")
        if any(f < 0 for f in feeds):
            raise ValidationError(f"feed indices must be non-negative, got {feeds}")
        if len(set(feeds)) != len(feeds):
            raise ValidationError(f"feed indices must be distinct, got {feeds}")
        phases = tuple(float(p) for p in self.phases)
        if len(phases) != len(feeds):
            raise ValidationError(f"got {len(phases)} phases for {len(feeds)} feeds")
        if any(not math.isfinite(p) for p in phases):
            raise ValidationError(f"phases must be finite, got {phases}")
        object.__setattr__(self, "feeds", feeds)
        object.__setattr__(self, "phases", tuple(p % _TWO_PI for p in phases))


def default_model() -> AntennaModel:
    """The five-feed reference design: 30..150 degree beams, 30 dBi, 12 dB SLL.

    The 6.4 degree beamwidth is the Kraus value for a 30 dBi pencil beam
    (6.42...), rounded to one decimal.
    """
    return AntennaModel(
        feed_directions_deg=(30.0, 60.0, 90.0, 120.0, 150.0),
        peak_gain_dbi=30.0,
        sll_db=12.0,
        beamwidth_3db_deg=6.4,
        band_ghz=(50.0, 70.0),
        lens_metadata={
            "lens": "dielectric sphere, 65 mm diameter, relative permittivity 2.2",
            "feed": "tapered slot antenna, 25 mm x 5 mm",
        },
    )


def _check_model(model: AntennaModel) -> AntennaModel:
    if not isinstance(model, AntennaModel):
        raise ValidationError(f"model must be an AntennaModel, got {type(model).__name__}")
    return model


def _check_selection(model: AntennaModel, selection: BeamSelection) -> BeamSelection:
    if not isinstance(selection, BeamSelection):
        raise ValidationError(f"selection must be a BeamSelection, got {type(selection).__name__}")
    for f in selection.feeds:
        if f >= model.feed_count:
            raise ValidationError(f"feed index {f} out of range for a {model.feed_count}-feed model")
    return selection


def _offset_deg(azimuth_deg, direction_deg: float):
    # Shortest signed angular distance; keeps the lobe symmetric and safe for
    # azimuths given modulo 360.
    return (np.asarray(azimuth_deg, dtype=np.float64) - direction_deg + 180.0) % 360.0 - 180.0


def _main_lobe_db(model: AntennaModel, feed_index: int, azimuth):
    offset = _offset_deg(azimuth, model.feed_directions_deg[feed_index])
    return model.peak_gain_dbi - 12.0 * (offset / model.beamwidth_3db_deg) ** 2


def feed_gain(model: AntennaModel, feed_index: int, azimuth_deg):
    """Gain in dBi of one feed's beam at the given azimuth(s).

    Accepts a scalar or an array of azimuth angles in degrees and returns the
    matching shape.
    """
    _check_model(model)
    if not isinstance(feed_index, (int, np.integer)) or isinstance(feed_index, bool):
        raise ValidationError(f"feed_index must be an integer, got {feed_index!r}")
    if not 0 <= feed_index < model.feed_count:
        raise ValidationError(f"feed index {feed_index} out of range for a {model.feed_count}-feed model")
    azimuth = np.asarray(azimuth_deg, dtype=np.float64)
    if not np.all(np.isfinite(azimuth)):
        raise ValidationError("azimuth_deg must be finite")
    gain = np.maximum(_main_lobe_db(model, feed_index, azimuth), model.floor_dbi)
    return float(gain) if gain.ndim == 0 else gain


def composite_gain(model: AntennaModel, selection: BeamSelection, azimuth_deg):
    """Gain in dBi of a multi-beam excitation.

    The selected main lobes are power-summed and the side-lobe floor is
    applied once to the combination, so widely separated beams each keep
    their inherent peak gain instead of being lifted by the other beams'
    side-lobe floors.  A single-feed selection reduces exactly to
    :func:`feed_gain`.  Per-feed phases do not enter this scalar power
    pattern.
    """
    _check_model(model)
    _check_selection(model, selection)
    if len(selection.feeds) == 1:
        return feed_gain(model, selection.feeds[0], azimuth_deg)
    azimuth = np.asarray(azimuth_deg, dtype=np.float64)
    if not np.all(np.isfinite(azimuth)):
        raise ValidationError("azimuth_deg must be finite")
    linear = np.zeros_like(azimuth, dtype=np.float64)
    for f in selection.feeds:
        linear = linear + 10.0 ** (_main_lobe_db(model, f, azimuth) / 10.0)
    with np.errstate(divide="ignore"):
        gain = np.maximum(10.0 * np.log10(linear), model.floor_dbi)
    return float(gain) if gain.ndim == 0 else gain


def select_feeds(
    model: AntennaModel,
    desired_directions_deg: Iterable[float],
) -> tuple[BeamSelection, tuple[float, ...]]:
    """Assign each desired beam direction to its nearest feed.

    Returns the selection (phases zero) and the per-beam pointing errors in
    degrees.  Directions outside the covered span, extended by one beamwidth
    past the outermost feeds, raise :class:`CoverageError`; two directions
    landing on the same feed raise :class:`FeedConflictError`.
    """
    _check_model(model)
    desired = [float(d) for d in desired_directions_deg]
    if not desired:
        raise ValidationError("at least one desired direction is required")
    directions = np.asarray(model.feed_directions_deg)
    low = model.feed_directions_deg[0] - model.beamwidth_3db_deg
    high = model.feed_directions_deg[-1] + model.beamwidth_3db_deg
    feeds: list[int] = []
    errors: list[float] = []
    for want in desired:
        if not math.isfinite(want):
            raise ValidationError(f"desired directions must be finite, got {want!r}")
        if not low <= want <= high:
            raise CoverageError(
                f"direction {want:g} degrees is outside the covered span [{low:g}, {high:g}]"
            )
        nearest = int(np.argmin(np.abs(directions - want)))
        if nearest in feeds:
            raise FeedConflictError(
                f"directions {desired[feeds.index(nearest)]:g} and {want:g} degrees both "
                f"resolve to the feed at {directions[nearest]:g} degrees"
            )
        feeds.append(nearest)
        errors.append(abs(want - float(directions[nearest])))
    selection = BeamSelection(feeds=tuple(feeds), phases=(0.0,) * len(feeds))
    return selection, tuple(errors)


def state_entry(model: AntennaModel, selection: BeamSelection, rx_azimuth_deg: float, phase: float) -> complex:
    """Complex channel state induced by a beam selection toward one receiver.

    The amplitude is the composite field strength toward ``rx_azimuth_deg``
    relative to a boresight beam, ``sqrt(linear_gain / linear_peak)``, clamped
    to at most 1 (a passive state cannot amplify); the argument is ``phase``.
    """
    _check_model(model)
    _check_selection(model, selection)
    phase = float(phase)
    if not math.isfinite(phase):
        raise ValidationError(f"phase must be finite, got {phase!r}")
    gain_db = composite_gain(model, selection, float(rx_azimuth_deg))
    amplitude = min(1.0, math.sqrt(10.0 ** ((gain_db - model.peak_gain_dbi) / 10.0)))
    return complex(amplitude * np.exp(1j * (phase % _TWO_PI)))


def pattern_cut(
    model: AntennaModel,
    selection: BeamSelection,
    start_deg: float = 0.0,
    stop_deg: float = 180.0,
    step_deg: float = 0.1,
) -> np.ndarray:
    """Sampled azimuth cut of the composite pattern.

    Returns an ``(n_points, 2)`` array of (azimuth_deg, gain_dbi) rows over
    the closed interval [start_deg, stop_deg].
    """
    _check_model(model)
    _check_selection(model, selection)
    start = float(start_deg)
    stop = float(stop_deg)
    step = float(step_deg)
    if not (math.isfinite(start) and math.isfinite(stop) and stop >= start):
        raise ValidationError(f"need finite stop_deg >= start_deg, got [{start!r}, {stop!r}]")
    if not (math.isfinite(step) and step > 0.0):
        raise ValidationError(f"step_deg must be positive, got {step!r}")
    count = int(round((stop - start) / step)) + 1
    azimuths = start + step * np.arange(count)
    gains = composite_gain(model, selection, azimuths)
    return np.column_stack([azimuths, gains])
