"""Pure-numpy implementations of the hot kernels.

Vectorized over candidates/trials with batched Hermitian eigensolves; used
when numba is unavailable or when ``RAMIMO_BACKEND=numpy`` forces it.  Must
stay numerically interchangeable with the numba twins in
``_kernels_numba`` (same Gram-eigenvalue formulation, same tie-breaking).
"""

from __future__ import annotations

import numpy as np

# Cap on candidates/trials materialized at once: keeps peak memory at a few
# tens of MB for the matrix sizes the guards allow.
_CHUNK = 1 << 16


def _gram_capacities(h_stack: np.ndarray, rho_over_m: float) -> np.ndarray:
    t, n, m = h_stack.shape
    if n <= m:
        gram = h_stack @ h_stack.conj().transpose(0, 2, 1)
    else:
        gram = h_stack.conj().transpose(0, 2, 1) @ h_stack
    eigenvalues = np.linalg.eigvalsh(gram)
    np.clip(eigenvalues, 0.0, None, out=eigenvalues)
    return np.log2(1.0 + rho_over_m * eigenvalues).sum(axis=1)


def capacity_batch(h_stack: np.ndarray, rho_over_m: float) -> np.ndarray:
    """Log-det capacities (bits) for a (T, N, M) stack of channel matrices."""
    h_stack = np.ascontiguousarray(h_stack, dtype=np.complex128)
    t = h_stack.shape[0]
    out = np.empty(t, dtype=np.float64)
    for start in range(0, t, _CHUNK):
        stop = min(start + _CHUNK, t)
        out[start:stop] = _gram_capacities(h_stack[start:stop], rho_over_m)
    return out


def search_scan(h: np.ndarray, phases: np.ndarray, rho_over_m: float) -> tuple[int, float]:
    """Scan every phase assignment for ``h`` and return (best_index, best_capacity).

    Entry (0, 0) of the state is pinned to 1; the remaining N*M - 1 entries in
    row-major order are the base-L digits of the candidate index, most
    significant digit first.  Ties keep the smallest index.  The caller is
    responsible for bounding L**(N*M - 1).
    """
    h = np.ascontiguousarray(h, dtype=np.complex128)
    phases = np.asarray(phases, dtype=np.complex128)
    n, m = h.shape
    levels = len(phases)
    n_free = n * m - 1
    total = levels**n_free
    weights = levels ** np.arange(n_free - 1, -1, -1, dtype=np.int64)
    best_index = 0
    best_capacity = -np.inf
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (idx[:, None] // weights[None, :]) % levels
        states = np.empty((idx.size, n * m), dtype=np.complex128)
        states[:, 0] = 1.0
        states[:, 1:] = phases[digits]
        caps = _gram_capacities(h[None, :, :] * states.reshape(-1, n, m), rho_over_m)
        k = int(np.argmax(caps))
        if caps[k] > best_capacity:
            best_capacity = float(caps[k])
            best_index = int(idx[k])
    return best_index, best_capacity
