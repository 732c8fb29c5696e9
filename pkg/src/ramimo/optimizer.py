"""Exhaustive capacity maximization over quantized phase states.

The search space is every state matrix whose entries come from a uniform
phase alphabet of L levels, with the (0, 0) entry pinned to 1: multiplying a
state by a global phase never changes capacity, so one entry can be fixed
without losing any achievable value.  Candidates are indexed by treating the
remaining N*M - 1 entries, in row-major order, as the base-L digits of an
integer (most significant digit first); ties keep the smallest index, which
makes results independent of how the enumeration is partitioned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .capacity import CapacityParams, capacity
from .channel import as_complex_matrix
from .errors import SearchSpaceError, ValidationError
from .reconfig import StateMatrix, apply_state

__all__ = [
    "MAX_CANDIDATES",
    "MAX_STATE_ENTRIES",
    "PhaseAlphabet",
    "SearchResult",
    "decode_candidate",
    "exhaustive_state_search",
    "optimal_separation_product",
]

#: Enumeration guards: refuse searches beyond this many candidates or state entries.
MAX_CANDIDATES = 1 << 24
MAX_STATE_ENTRIES = 16


@dataclass(frozen=True)
class PhaseAlphabet:
    """The L evenly spaced unit-modulus phases exp(2j*pi*k/L), k = 0..L-1."""

    levels: int

    def __post_init__(self) -> None:
        if not isinstance(self.levels, (int, np.integer)) or isinstance(self.levels, bool):
            raise ValidationError(f"levels must be an integer, got {self.levels!r}")
        if self.levels < 2:
            raise ValidationError(f"levels must be >= 2, got {self.levels}")
        object.__setattr__(self, "levels", int(self.levels))

    @property
    def phases(self) -> np.ndarray:
        """The alphabet as a complex array; index 0 is always 1."""
        return np.exp(2j * np.pi * np.arange(self.levels) / self.levels)


@dataclass(frozen=True, eq=False)
class SearchResult:
    """Outcome of an exhaustive search.

    ``best_capacity`` is ``capacity(apply_state(H, best_state), params)``;
    ``best_index`` identifies the winning candidate in enumeration order.
    """

    best_state: StateMatrix
    best_capacity: float
    candidates_evaluated: int
    best_index: int


def decode_candidate(index: int, rows: int, cols: int, alphabet: PhaseAlphabet) -> np.ndarray:
    """State matrix of candidate ``index`` under the enumeration convention.

    Entry (0, 0) is 1; the other entries, row-major, are the base-L digits of
    ``index`` with the most significant digit first.
    """
    if not isinstance(alphabet, PhaseAlphabet):
        raise ValidationError(f"alphabet must be a PhaseAlphabet, got {type(alphabet).__name__}")
    if rows < 1 or cols < 1:
        raise ValidationError(f"rows and cols must be >= 1, got ({rows}, {cols})")
    n_free = rows * cols - 1
    total = alphabet.levels**n_free
    if not isinstance(index, (int, np.integer)) or isinstance(index, bool):
        raise ValidationError(f"index must be an integer, got {index!r}")
    if not 0 <= index < total:
        raise ValidationError(f"index {index} out of range for {total} candidates")
    phases = alphabet.phases
    flat = np.empty(rows * cols, dtype=np.complex128)
    flat[0] = 1.0
    remainder = int(index)
    for k in range(n_free - 1, -1, -1):
        flat[k + 1] = phases[remainder % alphabet.levels]
        remainder //= alphabet.levels
    return flat.reshape(rows, cols)


def exhaustive_state_search(channel, alphabet: PhaseAlphabet, params: CapacityParams) -> SearchResult:
    """Maximize capacity over every quantized state matrix for ``channel``.

    Evaluates all ``L**(N*M - 1)`` candidates (entry (0, 0) pinned to 1) and
    returns the first argmax in enumeration order.  Raises
    :class:`SearchSpaceError` when the guards ``N*M <= 16`` and
    ``L**(N*M - 1) <= 2**24`` would be exceeded.
    """
    h = as_complex_matrix(channel, "channel")
    if not isinstance(alphabet, PhaseAlphabet):
        raise ValidationError(f"alphabet must be a PhaseAlphabet, got {type(alphabet).__name__}")
    if not isinstance(params, CapacityParams):
        raise ValidationError(f"params must be CapacityParams, got {type(params).__name__}")
    n, m = h.shape
    entries = n * m
    if entries > MAX_STATE_ENTRIES:
        raise SearchSpaceError(
            f"{n}x{m} has {entries} state entries; exhaustive search is guarded at "
            f"{MAX_STATE_ENTRIES} entries"
        )
    total = alphabet.levels ** (entries - 1)
    if total > MAX_CANDIDATES:
        raise SearchSpaceError(
            f"{alphabet.levels}**{entries - 1} = {total} candidates exceeds the "
            f"{MAX_CANDIDATES} guard; use a smaller alphabet or channel"
        )
    best_index, _ = backend.search_scan(
        np.ascontiguousarray(h), alphabet.phases, params.rho_over_m
    )
    best = StateMatrix(decode_candidate(int(best_index), n, m, alphabet))
    best_capacity = capacity(apply_state(h, best), params)
    return SearchResult(
        best_state=best,
        best_capacity=float(best_capacity),
        candidates_evaluated=int(total),
        best_index=int(best_index),
    )


def optimal_separation_product(wavelength: float, link_distance: float, n_max: int) -> float:
    """Separation product d_t*d_r at which LoS columns are orthogonal (eta = 1).

    Equals ``wavelength * link_distance / n_max`` where ``n_max`` is the
    larger of the two array sizes.
    """
    wavelength = float(wavelength)
    link_distance = float(link_distance)
    if not (math.isfinite(wavelength) and wavelength > 0.0):
        raise ValidationError(f"wavelength must be positive and finite, got {wavelength!r}")
    if not (math.isfinite(link_distance) and link_distance > 0.0):
        raise ValidationError(f"link_distance must be positive and finite, got {link_distance!r}")
    if not isinstance(n_max, (int, np.integer)) or isinstance(n_max, bool) or n_max < 1:
        raise ValidationError(f"n_max must be an integer >= 1, got {n_max!r}")
    return wavelength * link_distance / int(n_max)
