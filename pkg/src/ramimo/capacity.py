"""Log-det MIMO capacity, rank diagnostics, and Monte Carlo averaging.

Capacity of a channel H at transmit SNR rho with equal power over M antennas
is ``log2 det(I + (rho/M) H H^H)`` bits.  It is evaluated through the
Hermitian eigenvalues of the smaller-side Gram matrix — never an explicit
determinant — so near-rank-deficient channels lose precision gracefully
instead of going negative under the log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .channel import ChannelSpec, RandomStream, as_complex_matrix, nlos_sample
from .errors import ValidationError
from .reconfig import StateMatrix

__all__ = [
    "CapacityParams",
    "CapacityResult",
    "capacity",
    "effective_rank",
    "ergodic_capacity",
]

# Trials materialized per kernel call while averaging; bounds peak memory.
_TRIAL_CHUNK = 1 << 14


@dataclass(frozen=True)
class CapacityParams:
    """Linear transmit SNR and the equal-power splitting divisor (tx count)."""

    snr_rho: float
    tx_count: int

    def __post_init__(self) -> None:
        rho = self.snr_rho
        if isinstance(rho, bool) or not isinstance(rho, (int, float, np.integer, np.floating)):
            raise ValidationError(f"snr_rho must be a number, got {rho!r}")
        rho = float(rho)
        if not (math.isfinite(rho) and rho > 0.0):
            raise ValidationError(f"snr_rho must be a positive finite number, got {rho!r}")
        object.__setattr__(self, "snr_rho", rho)
        if not isinstance(self.tx_count, (int, np.integer)) or isinstance(self.tx_count, bool) or self.tx_count < 1:
            raise ValidationError(f"tx_count must be an integer >= 1, got {self.tx_count!r}")
        object.__setattr__(self, "tx_count", int(self.tx_count))

    @classmethod
    def from_db(cls, snr_db: float, tx_count: int) -> "CapacityParams":
        """Build from an SNR in dB."""
        return cls(snr_rho=10.0 ** (float(snr_db) / 10.0), tx_count=tx_count)

    @property
    def rho_over_m(self) -> float:
        return self.snr_rho / self.tx_count


@dataclass(frozen=True)
class CapacityResult:
    """Monte Carlo capacity estimate: sample mean, standard error, trial count."""

    mean_bits: float
    stderr_bits: float
    trials: int


def capacity(channel, params: CapacityParams) -> float:
    """Equal-power log-det capacity of one channel matrix, in bits.

    Computed as ``sum(log2(1 + (rho/M) * lambda_k))`` over the eigenvalues of
    the smaller of H H^H and H^H H; tiny negative eigenvalues from roundoff
    are clipped to zero.
    """
    h = as_complex_matrix(channel, "channel")
    if not isinstance(params, CapacityParams):
        raise ValidationError(f"params must be CapacityParams, got {type(params).__name__}")
    n, m = h.shape
    gram = h @ h.conj().T if n <= m else h.conj().T @ h
    eigenvalues = np.linalg.eigvalsh(gram)
    np.clip(eigenvalues, 0.0, None, out=eigenvalues)
    return float(np.log2(1.0 + params.rho_over_m * eigenvalues).sum())


def effective_rank(channel, rel_tol: float = 1e-6) -> int:
    """Number of singular values above ``rel_tol`` times the largest one.

    Returns 0 for an (all-finite) zero matrix.
    """
    h = as_complex_matrix(channel, "channel")
    if isinstance(rel_tol, bool) or not isinstance(rel_tol, (int, float, np.integer, np.floating)):
        raise ValidationError(f"rel_tol must be a number, got {rel_tol!r}")
    rel_tol = float(rel_tol)
    if not (0.0 < rel_tol < 1.0):
        raise ValidationError(f"rel_tol must lie strictly between 0 and 1, got {rel_tol!r}")
    singular_values = np.linalg.svd(h, compute_uv=False)
    top = float(singular_values[0])
    if top == 0.0:
        return 0
    return int(np.count_nonzero(singular_values > rel_tol * top))


def ergodic_capacity(
    channel_spec: ChannelSpec,
    state: StateMatrix | None,
    params: CapacityParams,
    trials: int,
    stream: RandomStream,
) -> CapacityResult:
    """Mean and standard error of capacity over independent scattering draws.

    Trial ``t`` draws its scattering matrix from ``stream.child(t)``, so the
    estimate is reproducible and independent of evaluation order or chunk
    size.  A pure-LoS spec makes every trial identical: the mean is the
    deterministic capacity and the standard error is exactly zero.
    """
    if not isinstance(channel_spec, ChannelSpec):
        raise ValidationError(f"channel_spec must be a ChannelSpec, got {type(channel_spec).__name__}")
    if not isinstance(params, CapacityParams):
        raise ValidationError(f"params must be CapacityParams, got {type(params).__name__}")
    if not isinstance(trials, (int, np.integer)) or isinstance(trials, bool) or trials < 1:
        raise ValidationError(f"trials must be an integer >= 1, got {trials!r}")
    if not isinstance(stream, RandomStream):
        raise ValidationError(f"stream must be a RandomStream, got {type(stream).__name__}")
    trials = int(trials)

    h_los = channel_spec.los_matrix()
    n, m = h_los.shape
    state_matrix: np.ndarray | None = None
    if state is not None:
        if not isinstance(state, StateMatrix):
            raise ValidationError(f"state must be a StateMatrix or None, got {type(state).__name__}")
        if state.shape != (n, m):
            raise ValidationError(f"state shape {state.shape} does not match channel shape {(n, m)}")
        state_matrix = state.matrix

    if channel_spec.rician.is_pure_los:
        h = h_los if state_matrix is None else h_los * state_matrix
        return CapacityResult(mean_bits=capacity(h, params), stderr_bits=0.0, trials=trials)

    w_los, w_nlos = channel_spec.rician.weights()
    capacities = np.empty(trials, dtype=np.float64)
    for start in range(0, trials, _TRIAL_CHUNK):
        stop = min(start + _TRIAL_CHUNK, trials)
        stack = np.empty((stop - start, n, m), dtype=np.complex128)
        for t in range(start, stop):
            stack[t - start] = w_los * h_los + w_nlos * nlos_sample(m, n, stream.child(t))
        if state_matrix is not None:
            stack *= state_matrix
        capacities[start:stop] = backend.capacity_batch(stack, params.rho_over_m)
    mean = float(capacities.mean())
    stderr = float(capacities.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return CapacityResult(mean_bits=mean, stderr_bits=stderr, trials=trials)
