"""Per-element antenna states and the entrywise channel reshaping they induce.

A reconfigurable element on each side of link (i, j) multiplies that entry of
the channel by a complex state ``g_ij``, so the reconfigured channel is the
Hadamard (entrywise) product of the propagation matrix and a state matrix.
Purely parasitic reconfiguration cannot amplify, which the two constraint
modes encode: phase-only states on the unit circle, or amplitude bounded by
a limit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import as_complex_matrix
from .errors import ValidationError

__all__ = [
    "UNIT_MODULUS",
    "BOUNDED_AMPLITUDE",
    "StateMatrix",
    "StateValidation",
    "validate_state",
    "apply_state",
    "canonical_state_2x2",
]

UNIT_MODULUS = "unit_modulus"
BOUNDED_AMPLITUDE = "bounded_amplitude"

_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class StateValidation:
    """Outcome of a constraint check: overall flag plus offending indices."""

    valid: bool
    violations: tuple[tuple[int, int], ...]


def validate_state(matrix, mode: str = UNIT_MODULUS, amplitude_limit: float | None = None) -> StateValidation:
    """Check every entry of ``matrix`` against a constraint mode.

    ``unit_modulus`` requires ``||g| - 1| < 1e-9`` per entry;
    ``bounded_amplitude`` requires ``|g| <= amplitude_limit``.  Violations are
    reported (row, col) in row-major order, not raised.
    """
    arr = as_complex_matrix(matrix, "state matrix")
    magnitude = np.abs(arr)
    if mode == UNIT_MODULUS:
        if amplitude_limit is not None:
            raise ValidationError("amplitude_limit is only meaningful in bounded_amplitude mode")
        bad = np.abs(magnitude - 1.0) >= _UNIT_TOL
    elif mode == BOUNDED_AMPLITUDE:
        if amplitude_limit is None:
            raise ValidationError("bounded_amplitude mode requires an amplitude_limit")
        limit = float(amplitude_limit)
        if not (np.isfinite(limit) and limit > 0.0):
            raise ValidationError(f"amplitude_limit must be a positive finite number, got {amplitude_limit!r}")
        bad = magnitude > limit
    else:
        raise ValidationError(f"unknown constraint mode {mode!r}")
    indices = np.argwhere(bad)
    return StateValidation(valid=indices.size == 0, violations=tuple(map(tuple, indices.tolist())))


@dataclass(frozen=True, eq=False)
class StateMatrix:
    """A constraint-checked matrix of per-link antenna states.

    Construction validates against the given mode and raises
    :class:`ValidationError` listing offending entries, so any instance that
    exists is feasible.
    """

    matrix: np.ndarray
    mode: str = UNIT_MODULUS
    amplitude_limit: float | None = None

    def __post_init__(self) -> None:
        arr = as_complex_matrix(self.matrix, "state matrix")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)
        report = validate_state(arr, self.mode, self.amplitude_limit)
        if not report.valid:
            shown = ", ".join(str(ij) for ij in report.violations[:8])
            more = "" if len(report.violations) <= 8 else f" and {len(report.violations) - 8} more"
            raise ValidationError(f"state entries violate {self.mode} at {shown}{more}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def apply_state(channel, state) -> np.ndarray:
    """Entrywise product of a channel matrix and a state matrix.

    ``state`` may be a :class:`StateMatrix` or a plain array of matching
    shape; the result is a new array, inputs are untouched.
    """
    h = as_complex_matrix(channel, "channel")
    if isinstance(state, StateMatrix):
        g = state.matrix
    else:
        g = as_complex_matrix(state, "state")
    if h.shape != g.shape:
        raise ValidationError(f"shape mismatch: channel {h.shape} vs state {g.shape}")
    return h * g


def canonical_state_2x2() -> StateMatrix:
    """The 2x2 phase-flip state [[1, 1], [1, -1]].

    Applied to a rank-one all-ones channel it restores orthogonal rows, which
    is the smallest example of reconfiguration recovering multiplexing gain.
    """
    return StateMatrix(np.array([[1.0 + 0.0j, 1.0 + 0.0j], [1.0 + 0.0j, -1.0 + 0.0j]]))
