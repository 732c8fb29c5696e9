"""Numba-compiled hot kernels: per-matrix loops instead of batched gufuncs.

Importing this module requires numba; :mod:`ramimo.backend` falls back to
the pure-numpy twins when it is missing.  Keep the math in lockstep with
``_kernels_numpy`` — same smaller-side Gram reduction, same eigenvalue
clipping, same first-wins tie-breaking in the search.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _capacity_one(h, rho_over_m):
    n, m = h.shape
    k = n if n <= m else m
    gram = np.empty((k, k), dtype=np.complex128)
    if n <= m:
        for i in range(n):
            for j in range(n):
                acc = 0.0 + 0.0j
                for t in range(m):
                    acc += h[i, t] * np.conj(h[j, t])
                gram[i, j] = acc
    else:
        for i in range(m):
            for j in range(m):
                acc = 0.0 + 0.0j
                for t in range(n):
                    acc += np.conj(h[t, i]) * h[t, j]
                gram[i, j] = acc
    eigenvalues = np.linalg.eigvalsh(gram)
    capacity = 0.0
    for value in eigenvalues:
        positive = value if value > 0.0 else 0.0
        capacity += np.log2(1.0 + rho_over_m * positive)
    return capacity


@njit(cache=True)
def capacity_batch(h_stack, rho_over_m):
    """Log-det capacities (bits) for a (T, N, M) stack of channel matrices."""
    trials = h_stack.shape[0]
    out = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        out[t] = _capacity_one(h_stack[t], rho_over_m)
    return out


@njit(cache=True)
def search_scan(h, phases, rho_over_m):
    """Scan every phase assignment for ``h``; see the numpy twin for the
    candidate-index convention (entry (0, 0) pinned, row-major base-L digits,
    most significant first, ties keep the smallest index)."""
    n, m = h.shape
    levels = phases.shape[0]
    n_free = n * m - 1
    total = 1
    for _ in range(n_free):
        total *= levels
    candidate = np.empty((n, m), dtype=np.complex128)
    candidate[0, 0] = h[0, 0]
    best_index = 0
    best_capacity = -np.inf
    for index in range(total):
        remainder = index
        for k in range(n_free - 1, -1, -1):
            flat = k + 1
            candidate[flat // m, flat % m] = h[flat // m, flat % m] * phases[remainder % levels]
            remainder //= levels
        cap = _capacity_one(candidate, rho_over_m)
        if cap > best_capacity:
            best_capacity = cap
            best_index = index
    return best_index, best_capacity
