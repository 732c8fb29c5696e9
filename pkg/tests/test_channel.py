import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ramimo import (
    PURE_LOS,
    ChannelSpec,
    ModelValidityError,
    RandomStream,
    RicianSpec,
    ValidationError,
    los_channel,
    make_los_geometry,
    nlos_sample,
    rician_compose,
    spacing_for_eta,
)

WAVELENGTH = 0.005
DISTANCE = 10.0


def square_geometry(n: int, eta: float):
    d_t, d_r = spacing_for_eta(WAVELENGTH, DISTANCE, n, eta)
    return make_los_geometry(WAVELENGTH, DISTANCE, n, n, d_t, d_r)


def test_geometry_eta_hand_value():
    geo = make_los_geometry(WAVELENGTH, DISTANCE, 2, 2, 0.15811, 0.15811)
    assert abs(geo.eta - 1.0) < 1e-3


def test_geometry_eta_exact_arithmetic():
    geo = make_los_geometry(WAVELENGTH, DISTANCE, 2, 2, 0.01, 0.01)
    assert geo.eta == pytest.approx(250.0, rel=1e-12)
    assert geo.separation_product == pytest.approx(1e-4, rel=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(wavelength=0.0),
        dict(wavelength=-0.005),
        dict(link_distance=0.0),
        dict(tx_count=0),
        dict(rx_count=-1),
        dict(tx_spacing=0.0),
        dict(rx_spacing=float("nan")),
        dict(tx_count=2.5),
    ],
)
def test_geometry_rejects_bad_arguments(kwargs):
    good = dict(
        wavelength=WAVELENGTH,
        link_distance=DISTANCE,
        tx_count=2,
        rx_count=2,
        tx_spacing=0.1,
        rx_spacing=0.1,
    )
    good.update(kwargs)
    with pytest.raises(ValidationError):
        make_los_geometry(**good)


def test_geometry_near_field_guard():
    # 0.1 m link at 5 mm wavelength is only 20 wavelengths out.
    with pytest.raises(ModelValidityError):
        make_los_geometry(WAVELENGTH, 0.1, 2, 2, 0.1, 0.1)


def test_spacing_for_eta_hand_values():
    d_t, d_r = spacing_for_eta(WAVELENGTH, DISTANCE, 2, 1.0)
    assert d_t == d_r
    assert d_t == pytest.approx(0.158114, abs=1e-6)
    d_t, d_r = spacing_for_eta(WAVELENGTH, DISTANCE, 4, 1.0)
    assert d_t == pytest.approx(0.111803, abs=1e-6)
    assert d_t * d_r == pytest.approx(0.0125, rel=1e-12)


@pytest.mark.parametrize("eta", [0.25, 1.0, 16.0, 1e6])
@pytest.mark.parametrize("n_max", [2, 4])
def test_spacing_roundtrips_through_geometry(eta, n_max):
    d_t, d_r = spacing_for_eta(WAVELENGTH, DISTANCE, n_max, eta)
    geo = make_los_geometry(WAVELENGTH, DISTANCE, n_max, n_max, d_t, d_r)
    assert geo.eta == pytest.approx(eta, rel=1e-12)


@pytest.mark.parametrize("eta", [0.0, -1.0, float("inf"), float("nan")])
def test_spacing_rejects_bad_eta(eta):
    with pytest.raises(ValidationError):
        spacing_for_eta(WAVELENGTH, DISTANCE, 2, eta)


def test_los_first_entry_and_unit_modulus():
    geo = make_los_geometry(WAVELENGTH, DISTANCE, 3, 2, 0.07, 0.11)
    h = los_channel(geo)
    assert h.shape == (2, 3)
    assert h[0, 0] == 1.0 + 0.0j
    assert np.max(np.abs(np.abs(h) - 1.0)) < 1e-12


@pytest.mark.parametrize("n", [2, 4, 8])
def test_los_columns_orthogonal_at_optimal_spacing(n):
    h = los_channel(square_geometry(n, 1.0))
    gram = h.conj().T @ h
    off_diagonal = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off_diagonal)) < 1e-9
    assert_allclose(np.diag(gram).real, n, atol=1e-9)


def test_los_two_by_two_gram_is_2i():
    h = los_channel(square_geometry(2, 1.0))
    assert_allclose(h.conj().T @ h, 2.0 * np.eye(2), atol=1e-9)


def test_los_compact_arrays_collapse_to_all_ones():
    geo = make_los_geometry(WAVELENGTH, DISTANCE, 4, 4, 1e-6, 1e-6)
    h = los_channel(geo)
    assert np.max(np.abs(h - 1.0)) < 1e-6


def test_los_smallest_singular_value_degrades_with_eta():
    sigma_min = [
        np.linalg.svd(los_channel(square_geometry(4, eta)), compute_uv=False)[-1]
        for eta in (1.0, 2.0, 4.0, 8.0, 16.0)
    ]
    assert all(b <= a + 1e-12 for a, b in zip(sigma_min, sigma_min[1:]))


def test_stream_repeatability_and_separation():
    a = nlos_sample(3, 2, RandomStream(42, 7))
    b = nlos_sample(3, 2, RandomStream(42, 7))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, nlos_sample(3, 2, RandomStream(42, 8)))
    assert not np.array_equal(a, nlos_sample(3, 2, RandomStream(43, 7)))


def test_stream_children_are_distinct_and_stable():
    root = RandomStream(123, 5)
    assert root.child(0) == RandomStream(123, 5).child(0)
    assert root.child(0) != root.child(1)
    draws0 = nlos_sample(2, 2, root.child(0))
    draws1 = nlos_sample(2, 2, root.child(1))
    assert not np.array_equal(draws0, draws1)


def test_stream_hierarchy_is_two_levels():
    child = RandomStream(1, 2).child(3)
    with pytest.raises(ValidationError):
        child.child(0)


@pytest.mark.parametrize("seed,index", [(-1, 0), (1 << 64, 0), (0, -1), (0, 1 << 128)])
def test_stream_rejects_out_of_range(seed, index):
    with pytest.raises(ValidationError):
        RandomStream(seed, index)


def test_nlos_shape_follows_counts():
    assert nlos_sample(3, 2, RandomStream(0, 0)).shape == (2, 3)


def test_nlos_sample_moments():
    """Mean ~ 0 and E|h|^2 ~ 1 over 1e5 entries (3-sigma bounds)."""
    h = nlos_sample(500, 200, RandomStream(2024, 0))
    assert h.size == 100_000
    assert abs(h.mean()) < 0.02
    assert abs(np.mean(np.abs(h) ** 2) - 1.0) < 0.02


def test_rician_weights_sum_to_one():
    for k in (0.0, 0.5, 1.0, 10.0, PURE_LOS):
        w_los, w_nlos = RicianSpec(k).weights()
        assert w_los**2 + w_nlos**2 == pytest.approx(1.0, abs=1e-15)
    assert RicianSpec(PURE_LOS).weights() == (1.0, 0.0)


@pytest.mark.parametrize("k", [-0.1, float("nan")])
def test_rician_spec_rejects_bad_factor(k):
    with pytest.raises(ValidationError):
        RicianSpec(k)


def test_rician_compose_limits_are_exact():
    rng = np.random.default_rng(7)
    los = np.exp(1j * rng.uniform(0, 2 * np.pi, (3, 3)))
    nlos = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))) / np.sqrt(2)
    assert np.array_equal(rician_compose(RicianSpec(0.0), los, nlos), nlos)
    assert np.array_equal(rician_compose(RicianSpec(PURE_LOS), los, nlos), los)


def test_rician_compose_equal_split():
    los = np.ones((2, 2), dtype=complex)
    nlos = np.full((2, 2), 0.5 - 0.25j)
    got = rician_compose(RicianSpec(1.0), los, nlos)
    assert_allclose(got, (los + nlos) / math.sqrt(2.0), atol=1e-12)


def test_rician_compose_rejects_mismatched_shapes():
    with pytest.raises(ValidationError):
        rician_compose(RicianSpec(1.0), np.ones((2, 2)), np.ones((2, 3)))


@pytest.mark.parametrize("k", [0.0, 1.0, 10.0])
def test_rician_power_normalization(k):
    """Per-entry E|h|^2 stays 1 for any mixing factor (3 standard errors)."""
    spec = RicianSpec(k)
    los = np.ones((2, 2), dtype=complex)
    root = RandomStream(99, 0)
    powers = np.empty((10_000, 2, 2))
    for t in range(10_000):
        h = rician_compose(spec, los, nlos_sample(2, 2, root.child(t)))
        powers[t] = np.abs(h) ** 2
    flat = powers.reshape(-1)
    stderr = flat.std(ddof=1) / math.sqrt(flat.size)
    assert abs(flat.mean() - 1.0) <= 3.0 * stderr


def test_channel_spec_requires_exactly_one_source():
    rician = RicianSpec(1.0)
    geo = square_geometry(2, 1.0)
    with pytest.raises(ValidationError):
        ChannelSpec(rician)
    with pytest.raises(ValidationError):
        ChannelSpec(rician, geometry=geo, los=np.ones((2, 2)))


def test_channel_spec_shape_and_los_matrix():
    geo = make_los_geometry(WAVELENGTH, DISTANCE, 3, 2, 0.05, 0.05)
    by_geometry = ChannelSpec(RicianSpec(1.0), geometry=geo)
    assert by_geometry.shape == (2, 3)
    assert np.array_equal(by_geometry.los_matrix(), los_channel(geo))
    explicit = ChannelSpec(RicianSpec(1.0), los=np.ones((2, 3)))
    assert explicit.shape == (2, 3)
    assert np.array_equal(explicit.los_matrix(), np.ones((2, 3), dtype=complex))
