"""Declarative experiments: config parsing, sweep execution, CSV persistence.

Configs are flat UTF-8 ``key = value`` lines; ``#`` starts a comment and
lists are comma-separated.  Recognized keys (defaults in parentheses):

======================  =====================================================
``mode``                required: ``fig1_eta_sweep``, ``fig6_k_sweep``,
                        ``pattern_dump`` or ``optimize``
``snr_db``              transmit SNR in dB (10)
``dims``                ``M, N`` transmit and receive counts (``2, 2``)
``wavelength``          carrier wavelength in meters (0.005)
``distance``            link distance in meters (10)
``sweep_values``        grid swept by the mode: eta values, or Rician K
                        values where ``inf`` may close the grid (required
                        for sweep modes)
``trials``              Monte Carlo trials per sweep point (10000)
``master_seed``         64-bit seed of every random stream (42)
``state_mode``          ``none``, ``canonical_2x2`` or ``optimized(L)``
                        (``none``)
``eta``                 separation-product deviation fixing the LoS part in
                        ``fig6_k_sweep``/``optimize``; ``inf`` (the default)
                        selects the fully compact all-ones limit
``output_path``         destination CSV (``results.csv``)
``beam_directions``     desired beam angles for ``pattern_dump`` (``90``)
======================  =====================================================

Sweep modes emit one ``static`` record per sweep value plus, when a state
mode is set, one ``reconfigurable`` record.  Trial ``t`` of sweep point ``p``
always draws from the stream ``(master_seed, p, t)``, so output bytes do not
depend on scheduling or worker count.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .antenna import default_model, pattern_cut, select_feeds
from .capacity import CapacityParams, ergodic_capacity
from .channel import (
    PURE_LOS,
    ChannelSpec,
    RandomStream,
    RicianSpec,
    make_los_geometry,
    spacing_for_eta,
)
from .errors import ConfigError, RamimoError, ValidationError
from .optimizer import PhaseAlphabet, SearchResult, exhaustive_state_search
from .reconfig import StateMatrix, canonical_state_2x2

__all__ = [
    "CSV_HEADER",
    "SWEEP_MODES",
    "MODES",
    "ExperimentConfig",
    "SweepRecord",
    "parse_config",
    "run_sweep",
    "run_pattern",
    "run_optimize",
    "format_state_csv",
    "write_records",
    "read_records",
    "write_pattern",
]

SWEEP_MODES = ("fig1_eta_sweep", "fig6_k_sweep")
MODES = SWEEP_MODES + ("pattern_dump", "optimize")

STATIC = "static"
RECONFIGURABLE = "reconfigurable"

CSV_HEADER = (
    "mode,sweep_var,sweep_value,system,capacity_mean_bits,capacity_stderr_bits,"
    "trials,snr_db,M,N,eta,k_factor,master_seed"
)
PATTERN_HEADER = "azimuth_deg,gain_dbi"

_U64 = 1 << 64
_OPTIMIZED_RE = re.compile(r"^optimized\((\d+)\)$")


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment description; construction enforces all invariants."""

    mode: str
    snr_db: float = 10.0
    dims: tuple[int, int] = (2, 2)
    wavelength: float = 0.005
    distance: float = 10.0
    sweep_values: tuple[float, ...] = ()
    trials: int = 10_000
    master_seed: int = 42
    state_mode: str = "none"
    optimize_levels: int | None = None
    eta: float = math.inf
    output_path: str = "results.csv"
    beam_directions: tuple[float, ...] = (90.0,)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not math.isfinite(float(self.snr_db)):
            raise ValidationError(f"snr_db must be finite, got {self.snr_db!r}")
        object.__setattr__(self, "snr_db", float(self.snr_db))
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 2 or any(d < 1 for d in dims):
            raise ValidationError(f"dims must be two integers >= 1, got {self.dims!r}")
        object.__setattr__(self, "dims", dims)
        for attr in ("wavelength", "distance"):
            value = float(getattr(self, attr))
            if not (math.isfinite(value) and value > 0.0):
                raise ValidationError(f"{attr} must be a positive finite number, got {value!r}")
            object.__setattr__(self, attr, value)
        if not isinstance(self.trials, (int, np.integer)) or isinstance(self.trials, bool) or self.trials < 1:
            raise ValidationError(f"trials must be an integer >= 1, got {self.trials!r}")
        object.__setattr__(self, "trials", int(self.trials))
        if (
            not isinstance(self.master_seed, (int, np.integer))
            or isinstance(self.master_seed, bool)
            or not 0 <= self.master_seed < _U64
        ):
            raise ValidationError(f"master_seed must be an integer in [0, 2**64), got {self.master_seed!r}")
        object.__setattr__(self, "master_seed", int(self.master_seed))

        if self.state_mode not in ("none", "canonical_2x2", "optimized"):
            raise ValidationError(
                f"state_mode must be none, canonical_2x2 or optimized(L), got {self.state_mode!r}"
            )
        if self.state_mode == "optimized":
            if (
                not isinstance(self.optimize_levels, (int, np.integer))
                or isinstance(self.optimize_levels, bool)
                or self.optimize_levels < 2
            ):
                raise ValidationError(
                    f"optimized state_mode requires phase levels >= 2, got {self.optimize_levels!r}"
                )
            object.__setattr__(self, "optimize_levels", int(self.optimize_levels))
        elif self.optimize_levels is not None:
            raise ValidationError("optimize_levels only applies to state_mode = optimized(L)")
        if self.state_mode == "canonical_2x2" and dims != (2, 2):
            raise ValidationError(f"state_mode canonical_2x2 requires dims = 2, 2, got {dims}")

        eta = float(self.eta)
        if math.isnan(eta) or eta <= 0.0:
            raise ValidationError(f"eta must be positive (inf for the all-ones limit), got {self.eta!r}")
        object.__setattr__(self, "eta", eta)

        values = tuple(float(v) for v in self.sweep_values)
        object.__setattr__(self, "sweep_values", values)
        if self.mode in SWEEP_MODES:
            if not values:
                raise ValidationError(f"sweep_values is required for mode {self.mode}")
            if any(math.isnan(v) for v in values):
                raise ValidationError("sweep_values must not contain nan")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValidationError(f"sweep_values must be strictly increasing, got {values}")
            if self.mode == "fig1_eta_sweep":
                if any(not math.isfinite(v) or v <= 0.0 for v in values):
                    raise ValidationError(
                        "sweep_values for fig1_eta_sweep must be finite and positive "
                        "(inf is only admitted in Rician-factor grids)"
                    )
            else:
                if any(v < 0.0 for v in values):
                    raise ValidationError("sweep_values for fig6_k_sweep must be >= 0")
                if any(math.isinf(v) for v in values[:-1]):
                    raise ValidationError("inf may only close a Rician-factor grid")
        elif values:
            raise ValidationError(f"sweep_values does not apply to mode {self.mode}")

        if not isinstance(self.output_path, str) or not self.output_path:
            raise ValidationError(f"output_path must be a non-empty string, got {self.output_path!r}")
        beams = tuple(float(b) for b in self.beam_directions)
        if not beams or any(not math.isfinite(b) for b in beams):
            raise ValidationError(f"beam_directions must be finite and non-empty, got {self.beam_directions!r}")
        object.__setattr__(self, "beam_directions", beams)


@dataclass(frozen=True)
class SweepRecord:
    """One CSV row: a capacity estimate for one (sweep value, system) pair."""

    mode: str
    sweep_var: str
    sweep_value: float
    system: str
    capacity_mean_bits: float
    capacity_stderr_bits: float
    trials: int
    snr_db: float
    tx_count: int
    rx_count: int
    eta: float
    k_factor: float
    master_seed: int


def _convert_float(key: str, token: str) -> float:
    try:
        value = float(token)
    except ValueError as exc:
        raise ConfigError(f"{key}: {token!r} is not a number") from exc
    if math.isnan(value):
        raise ConfigError(f"{key}: nan is not allowed")
    return value


def _convert_int(key: str, token: str) -> int:
    try:
        return int(token, 0)
    except ValueError as exc:
        raise ConfigError(f"{key}: {token!r} is not an integer") from exc


def _convert_float_list(key: str, token: str) -> tuple[float, ...]:
    parts = [p.strip() for p in token.split(",")]
    if any(not p for p in parts):
        raise ConfigError(f"{key}: empty element in list {token!r}")
    return tuple(_convert_float(key, p) for p in parts)


def _convert_dims(key: str, token: str) -> tuple[int, int]:
    parts = [p.strip() for p in token.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"{key}: expected 'M, N', got {token!r}")
    return _convert_int(key, parts[0]), _convert_int(key, parts[1])


def _convert_state_mode(key: str, token: str) -> tuple[str, int | None]:
    if token in ("none", "canonical_2x2"):
        return token, None
    match = _OPTIMIZED_RE.match(token)
    if match:
        return "optimized", int(match.group(1))
    raise ConfigError(f"{key}: expected none, canonical_2x2 or optimized(L), got {token!r}")


_CONVERTERS = {
    "mode": lambda k, v: {"mode": v},
    "snr_db": lambda k, v: {"snr_db": _convert_float(k, v)},
    "dims": lambda k, v: {"dims": _convert_dims(k, v)},
    "wavelength": lambda k, v: {"wavelength": _convert_float(k, v)},
    "distance": lambda k, v: {"distance": _convert_float(k, v)},
    "sweep_values": lambda k, v: {"sweep_values": _convert_float_list(k, v)},
    "trials": lambda k, v: {"trials": _convert_int(k, v)},
    "master_seed": lambda k, v: {"master_seed": _convert_int(k, v)},
    "state_mode": lambda k, v: dict(zip(("state_mode", "optimize_levels"), _convert_state_mode(k, v))),
    "eta": lambda k, v: {"eta": _convert_float(k, v)},
    "output_path": lambda k, v: {"output_path": v},
    "beam_directions": lambda k, v: {"beam_directions": _convert_float_list(k, v)},
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate config text; unknown keys and bad values raise
    :class:`ConfigError` naming the offender."""
    if not isinstance(text, str):
        raise ConfigError(f"config must be text, got {type(text).__name__}")
    fields: dict = {}
    seen: set[str] = set()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONVERTERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: key {key!r} has no value")
        seen.add(key)
        fields.update(_CONVERTERS[key](key, value))
    if "mode" not in fields:
        raise ConfigError("missing required key 'mode'")
    try:
        return ExperimentConfig(**fields)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def _point_state(config: ExperimentConfig, spec: ChannelSpec, params: CapacityParams) -> StateMatrix | None:
    if config.state_mode == "none":
        return None
    if config.state_mode == "canonical_2x2":
        return canonical_state_2x2()
    alphabet = PhaseAlphabet(config.optimize_levels)  # type: ignore[arg-type]
    # The optimized state targets the deterministic LoS component of the
    # point; scattering realizations then share that one state.
    return exhaustive_state_search(spec.los_matrix(), alphabet, params).best_state


def _channel_spec(config: ExperimentConfig, eta: float, k_factor: float) -> ChannelSpec:
    tx, rx = config.dims
    rician = RicianSpec(k_factor)
    if math.isinf(eta):
        return ChannelSpec(rician, los=np.ones((rx, tx), dtype=np.complex128))
    d_t, d_r = spacing_for_eta(config.wavelength, config.distance, max(tx, rx), eta)
    geometry = make_los_geometry(config.wavelength, config.distance, tx, rx, d_t, d_r)
    return ChannelSpec(rician, geometry=geometry)


def _sweep_point(config: ExperimentConfig, point_index: int, value: float) -> list[SweepRecord]:
    tx, rx = config.dims
    params = CapacityParams.from_db(config.snr_db, tx)
    if config.mode == "fig1_eta_sweep":
        sweep_var, eta, k_factor = "eta", value, PURE_LOS
    else:
        sweep_var, eta, k_factor = "k_factor", config.eta, value
    spec = _channel_spec(config, eta, k_factor)
    stream = RandomStream(config.master_seed, point_index)

    def record(system: str, state: StateMatrix | None) -> SweepRecord:
        result = ergodic_capacity(spec, state, params, config.trials, stream)
        return SweepRecord(
            mode=config.mode,
            sweep_var=sweep_var,
            sweep_value=value,
            system=system,
            capacity_mean_bits=result.mean_bits,
            capacity_stderr_bits=result.stderr_bits,
            trials=result.trials,
            snr_db=config.snr_db,
            tx_count=tx,
            rx_count=rx,
            eta=eta,
            k_factor=k_factor,
            master_seed=config.master_seed,
        )

    records = [record(STATIC, None)]
    state = _point_state(config, spec, params)
    if state is not None:
        records.append(record(RECONFIGURABLE, state))
    return records


def run_sweep(config: ExperimentConfig, workers: int = 1) -> list[SweepRecord]:
    """Execute a sweep-mode config and return its records in grid order.

    ``workers`` only sets the thread count; the per-(point, trial) stream
    contract makes the output identical for any value.
    """
    if not isinstance(config, ExperimentConfig):
        raise ValidationError(f"config must be an ExperimentConfig, got {type(config).__name__}")
    if config.mode not in SWEEP_MODES:
        raise ConfigError(f"run_sweep requires one of {SWEEP_MODES}, got mode {config.mode!r}")
    if not isinstance(workers, (int, np.integer)) or isinstance(workers, bool) or workers < 1:
        raise ValidationError(f"workers must be an integer >= 1, got {workers!r}")
    points = list(enumerate(config.sweep_values))
    if workers == 1 or len(points) <= 1:
        per_point = [_sweep_point(config, index, value) for index, value in points]
    else:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            per_point = list(pool.map(lambda p: _sweep_point(config, *p), points))
    return [record for group in per_point for record in group]


def run_pattern(config: ExperimentConfig) -> np.ndarray:
    """Execute a ``pattern_dump`` config: the default antenna's composite cut
    for the configured beam directions, sampled at 0.1 degrees over [0, 180]."""
    if not isinstance(config, ExperimentConfig):
        raise ValidationError(f"config must be an ExperimentConfig, got {type(config).__name__}")
    if config.mode != "pattern_dump":
        raise ConfigError(f"run_pattern requires mode pattern_dump, got {config.mode!r}")
    model = default_model()
    selection, _ = select_feeds(model, config.beam_directions)
    return pattern_cut(model, selection)


def run_optimize(config: ExperimentConfig) -> SearchResult:
    """Execute an ``optimize`` config: exhaustive phase search against the
    configured LoS channel (``eta = inf`` means the all-ones matrix)."""
    if not isinstance(config, ExperimentConfig):
        raise ValidationError(f"config must be an ExperimentConfig, got {type(config).__name__}")
    if config.mode != "optimize":
        raise ConfigError(f"run_optimize requires mode optimize, got {config.mode!r}")
    if config.state_mode != "optimized":
        raise ConfigError("optimize mode requires state_mode = optimized(L)")
    tx, _ = config.dims
    params = CapacityParams.from_db(config.snr_db, tx)
    spec = _channel_spec(config, config.eta, PURE_LOS)
    alphabet = PhaseAlphabet(config.optimize_levels)  # type: ignore[arg-type]
    return exhaustive_state_search(spec.los_matrix(), alphabet, params)


def _fmt(value: float) -> str:
    """Render a float with 9 significant digits; infinities as literal inf."""
    return format(float(value), ".9g")


def format_state_csv(result: SearchResult) -> str:
    """Best state entries as ``i,j,re,im`` rows (1-based indices) plus a
    closing ``capacity_bits`` line."""
    lines = ["i,j,re,im"]
    matrix = result.best_state.matrix
    for i in range(matrix.shape[0]):
        for j in range(matrix.shape[1]):
            entry = matrix[i, j]
            lines.append(f"{i + 1},{j + 1},{_fmt(entry.real)},{_fmt(entry.imag)}")
    lines.append(f"capacity_bits,{_fmt(result.best_capacity)}")
    return "\n".join(lines) + "\n"


def write_records(records, path) -> None:
    """Write sweep records as CSV (see :data:`CSV_HEADER`); whole-file write,
    so a failed run leaves no partial output."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                (
                    r.mode,
                    r.sweep_var,
                    _fmt(r.sweep_value),
                    r.system,
                    _fmt(r.capacity_mean_bits),
                    _fmt(r.capacity_stderr_bits),
                    str(int(r.trials)),
                    _fmt(r.snr_db),
                    str(int(r.tx_count)),
                    str(int(r.rx_count)),
                    _fmt(r.eta),
                    _fmt(r.k_factor),
                    str(int(r.master_seed)),
                )
            )
        )
    payload = "\n".join(lines) + "\n"
    try:
        Path(path).write_text(payload, encoding="utf-8")
    except OSError as exc:
        raise RamimoError(f"cannot write records to {path}: {exc}") from exc


def read_records(path) -> list[SweepRecord]:
    """Read back a CSV produced by :func:`write_records`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RamimoError(f"cannot read records from {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise RamimoError(f"{path} does not carry the expected record header")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 13:
            raise RamimoError(f"{path}: malformed row {line!r}")
        records.append(
            SweepRecord(
                mode=parts[0],
                sweep_var=parts[1],
                sweep_value=float(parts[2]),
                system=parts[3],
                capacity_mean_bits=float(parts[4]),
                capacity_stderr_bits=float(parts[5]),
                trials=int(parts[6]),
                snr_db=float(parts[7]),
                tx_count=int(parts[8]),
                rx_count=int(parts[9]),
                eta=float(parts[10]),
                k_factor=float(parts[11]),
                master_seed=int(parts[12]),
            )
        )
    return records


def write_pattern(rows: np.ndarray, path) -> None:
    """Write an (azimuth_deg, gain_dbi) cut as CSV."""
    lines = [PATTERN_HEADER]
    for azimuth, gain in np.asarray(rows, dtype=np.float64):
        lines.append(f"{_fmt(azimuth)},{_fmt(gain)}")
    payload = "\n".join(lines) + "\n"
    try:
        Path(path).write_text(payload, encoding="utf-8")
    except OSError as exc:
        raise RamimoError(f"cannot write pattern to {path}: {exc}") from exc


def apply_overrides(
    config: ExperimentConfig,
    seed: int | None = None,
    trials: int | None = None,
    out: str | None = None,
) -> ExperimentConfig:
    """CLI-style overrides; revalidates through the config constructor."""
    updates: dict = {}
    if seed is not None:
        updates["master_seed"] = seed
    if trials is not None:
        updates["trials"] = trials
    if out is not None:
        updates["output_path"] = out
    return replace(config, **updates) if updates else config
