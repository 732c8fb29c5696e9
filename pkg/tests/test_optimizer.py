import itertools
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ramimo import (
    CapacityParams,
    PhaseAlphabet,
    SearchSpaceError,
    ValidationError,
    apply_state,
    canonical_state_2x2,
    capacity,
    effective_rank,
    exhaustive_state_search,
    los_channel,
    make_los_geometry,
    optimal_separation_product,
    spacing_for_eta,
)
from ramimo.optimizer import decode_candidate

PARAMS = CapacityParams(10.0, 2)
ALL_ONES = np.ones((2, 2), dtype=complex)


def complex_gaussian(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def naive_best_capacity(h, levels, params):
    """Unreduced oracle: try every state without pinning any entry, using the
    plain determinant formula."""
    n, m = h.shape
    phases = [np.exp(2j * np.pi * k / levels) for k in range(levels)]
    rho_over_m = params.snr_rho / params.tx_count
    best = -np.inf
    for assignment in itertools.product(phases, repeat=n * m):
        hg = h * np.asarray(assignment).reshape(n, m)
        gram = np.eye(n) + rho_over_m * (hg @ hg.conj().T)
        sign, logdet = np.linalg.slogdet(gram)
        assert sign.real > 0
        best = max(best, logdet / math.log(2.0))
    return best


def test_alphabet_phases():
    two = PhaseAlphabet(2)
    assert_allclose(two.phases, [1.0, -1.0], atol=1e-15)
    four = PhaseAlphabet(4)
    assert four.phases[0] == 1.0 + 0.0j
    assert_allclose(np.abs(four.phases), 1.0, atol=1e-15)
    assert len(set(np.round(four.phases, 12))) == 4


@pytest.mark.parametrize("levels", [1, 0, -2, 2.5])
def test_alphabet_rejects_bad_levels(levels):
    with pytest.raises(ValidationError):
        PhaseAlphabet(levels)


def test_decode_candidate_convention():
    alphabet = PhaseAlphabet(3)
    phases = alphabet.phases
    # Free entries (0,1), (1,0), (1,1) are the base-3 digits of the index,
    # most significant first: 5 = 0*9 + 1*3 + 2.
    state = decode_candidate(5, 2, 2, alphabet)
    expected = np.array([[1.0, phases[0]], [phases[1], phases[2]]])
    assert_allclose(state, expected, atol=1e-15)
    with pytest.raises(ValidationError):
        decode_candidate(27, 2, 2, alphabet)


def test_all_ones_search_finds_phase_flip():
    result = exhaustive_state_search(ALL_ONES, PhaseAlphabet(2), PARAMS)
    assert result.candidates_evaluated == 8
    assert result.best_capacity == pytest.approx(2.0 * math.log2(11.0), abs=1e-9)
    canonical = canonical_state_2x2()
    attained = capacity(apply_state(ALL_ONES, canonical), PARAMS)
    assert attained == pytest.approx(result.best_capacity, abs=1e-9)
    assert_allclose(result.best_state.matrix, canonical.matrix, atol=1e-12)


def test_orthogonal_channel_is_already_optimal():
    h = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex)
    result = exhaustive_state_search(h, PhaseAlphabet(2), PARAMS)
    assert result.best_capacity == pytest.approx(2.0 * math.log2(11.0), abs=1e-9)
    # The identity state attains the same maximum: reshaping an orthogonal
    # channel cannot help.
    assert capacity(h, PARAMS) == pytest.approx(result.best_capacity, abs=1e-9)


def test_exact_ties_keep_the_smallest_candidate_index():
    # For a diagonal channel every phase assignment gives bitwise-identical
    # capacity, so the scan must return candidate 0.
    result = exhaustive_state_search(np.eye(2, dtype=complex), PhaseAlphabet(2), PARAMS)
    assert result.best_index == 0
    assert_allclose(result.best_state.matrix, np.ones((2, 2)), atol=1e-15)


def test_candidate_counting():
    assert exhaustive_state_search(ALL_ONES, PhaseAlphabet(2), PARAMS).candidates_evaluated == 8
    rng = np.random.default_rng(0)
    h = complex_gaussian(rng, 2, 3)
    result = exhaustive_state_search(h, PhaseAlphabet(3), CapacityParams(10.0, 3))
    assert result.candidates_evaluated == 3**5


def test_search_space_guards():
    with pytest.raises(SearchSpaceError):
        exhaustive_state_search(np.ones((5, 4)), PhaseAlphabet(2), CapacityParams(10.0, 4))
    with pytest.raises(SearchSpaceError, match="smaller alphabet"):
        exhaustive_state_search(np.ones((4, 4)), PhaseAlphabet(4), CapacityParams(10.0, 4))


def test_search_matches_unreduced_oracle():
    """Pinning g[0,0] = 1 must lose nothing against the full enumeration."""
    rng = np.random.default_rng(1234)
    alphabet = PhaseAlphabet(4)
    for _ in range(20):
        h = complex_gaussian(rng, 2, 2)
        reduced = exhaustive_state_search(h, alphabet, PARAMS).best_capacity
        assert reduced == pytest.approx(naive_best_capacity(h, 4, PARAMS), abs=1e-9)


def test_search_never_loses_to_identity():
    rng = np.random.default_rng(42)
    for _ in range(10):
        h = complex_gaussian(rng, 2, 2)
        result = exhaustive_state_search(h, PhaseAlphabet(3), PARAMS)
        # 1e-12 slack: the winning candidate is re-scored through the public
        # capacity path, which can differ from the scan by float noise.
        assert result.best_capacity >= capacity(h, PARAMS) - 1e-12


def test_best_capacity_is_consistent_with_best_state():
    rng = np.random.default_rng(8)
    h = complex_gaussian(rng, 2, 2)
    result = exhaustive_state_search(h, PhaseAlphabet(4), PARAMS)
    assert result.best_capacity == capacity(apply_state(h, result.best_state), PARAMS)


@pytest.mark.parametrize("n,levels", [(2, 4), (3, 4), (4, 2)])
def test_search_restores_full_rank_of_all_ones_channels(n, levels):
    # 4x4 with a 4-level alphabet would blow the candidate guard, so the
    # largest case uses the binary alphabet (which already reaches full rank).
    h = np.ones((n, n), dtype=complex)
    result = exhaustive_state_search(h, PhaseAlphabet(levels), CapacityParams(10.0, n))
    assert effective_rank(h, rel_tol=1e-6) == 1
    assert effective_rank(apply_state(h, result.best_state), rel_tol=1e-6) == n


def test_global_phase_leaves_best_capacity_unchanged():
    rng = np.random.default_rng(77)
    h = complex_gaussian(rng, 2, 2)
    rotated = np.exp(0.7j) * h
    a = exhaustive_state_search(h, PhaseAlphabet(3), PARAMS).best_capacity
    b = exhaustive_state_search(rotated, PhaseAlphabet(3), PARAMS).best_capacity
    assert a == pytest.approx(b, abs=1e-9)


def test_optimal_separation_product_values():
    assert optimal_separation_product(0.005, 10.0, 4) == pytest.approx(0.0125, rel=1e-12)
    assert optimal_separation_product(0.005, 10.0, 2) == pytest.approx(0.025, rel=1e-12)
    d_t, d_r = spacing_for_eta(0.005, 10.0, 4, 1.0)
    assert d_t * d_r == pytest.approx(optimal_separation_product(0.005, 10.0, 4), rel=1e-12)


def test_optimal_separation_product_maximizes_min_singular_value():
    """Grid-search oracle: the analytic product is the argmax of sigma_min."""
    wavelength, distance, n = 0.005, 10.0, 4
    analytic = optimal_separation_product(wavelength, distance, n)
    products = analytic * np.linspace(0.5, 1.5, 101)
    sigma_min = []
    for product in products:
        d = math.sqrt(product)
        geo = make_los_geometry(wavelength, distance, n, n, d, d)
        sigma_min.append(np.linalg.svd(los_channel(geo), compute_uv=False)[-1])
    best = products[int(np.argmax(sigma_min))]
    assert best == pytest.approx(analytic, rel=1e-9)


def test_optimal_separation_product_validation():
    with pytest.raises(ValidationError):
        optimal_separation_product(0.0, 10.0, 2)
    with pytest.raises(ValidationError):
        optimal_separation_product(0.005, 10.0, 0)
