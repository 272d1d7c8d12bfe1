import math

import numpy as np
import pytest

from exit_spectra.core import (
    exit_moment,
    model_spectrum,
    raw_moment,
    solve_hierarchy,
    torsional_rigidity,
    verify_divergence_identity,
    verify_ode_residual,
)
from exit_spectra.enums import Provenance
from exit_spectra.exceptions import DomainError, UsageError
from exit_spectra.geometry import ModelSpace, isoperimetric_quotient, space_form_warping


def model(b: float, m: int = 2) -> ModelSpace:
    return ModelSpace(m, space_form_warping(b))


def test_zeroth_profile_is_one(hyperbolic_plane):
    profiles = solve_hierarchy(hyperbolic_plane, 1.0, 2)
    np.testing.assert_allclose(profiles.value(0, np.linspace(0, 1, 11)), 1.0)


def test_euclidean_first_profile(euclidean_plane):
    profiles = solve_hierarchy(euclidean_plane, 1.0, 2)
    r = np.linspace(0.0, 1.0, 21)
    np.testing.assert_allclose(profiles.value(1, r), (1 - r**2) / 4, atol=1e-10)
    assert float(profiles.value(1, 0.0)) == pytest.approx(0.25, rel=1e-10)


def test_euclidean_second_profile(euclidean_plane):
    profiles = solve_hierarchy(euclidean_plane, 1.0, 2)
    r = np.linspace(0.0, 1.0, 21)
    np.testing.assert_allclose(profiles.value(2, r), (3 - 4 * r**2 + r**4) / 32, atol=1e-10)


@pytest.mark.parametrize("R", [0.5, 1.0, 1.5])
def test_hyperbolic_first_profile_at_center(R):
    profiles = solve_hierarchy(model(-1.0), R, 1)
    assert float(profiles.value(1, 0.0)) == pytest.approx(2 * math.log(math.cosh(R / 2)), rel=1e-8)


def test_hyperbolic_value_from_closed_form():
    assert float(solve_hierarchy(model(-1.0), 1.0, 1).value(1, 0.0)) == pytest.approx(0.240229, abs=1e-6)


def test_boundary_and_center_conditions(hyperbolic_plane):
    profiles = solve_hierarchy(hyperbolic_plane, 1.2, 4)
    for k in range(1, 5):
        assert abs(float(profiles.value(k, 1.2))) < 1e-12
        assert abs(float(profiles.exact_derivative(k, 0.0))) < 1e-14
        values = profiles.value(k, np.linspace(0.0, 1.2, 200))
        assert np.all(np.diff(values) < 0)
        assert np.all(values[:-1] > 0)


@pytest.mark.parametrize("m", [2, 3, 5])
@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
def test_euclidean_zeroth_moment(m, R):
    profiles = solve_hierarchy(model(0.0, m), R, 1)
    assert exit_moment(profiles, 0) == pytest.approx(R / m, rel=1e-10)


def test_euclidean_first_moment(euclidean_plane):
    assert exit_moment(solve_hierarchy(euclidean_plane, 1.0, 2), 1) == pytest.approx(1 / 16, rel=1e-8)


def test_hyperbolic_zeroth_moment(hyperbolic_plane):
    value = exit_moment(solve_hierarchy(hyperbolic_plane, 1.0, 1), 0)
    assert value == pytest.approx(math.tanh(0.5), rel=1e-10)
    assert value == pytest.approx(0.46212, abs=1e-5)


def test_exit_moment_needs_next_profile(euclidean_plane):
    profiles = solve_hierarchy(euclidean_plane, 1.0, 2)
    with pytest.raises(UsageError):
        exit_moment(profiles, 2)
    with pytest.raises(UsageError):
        exit_moment(profiles, -1)


@pytest.mark.parametrize("b", [0.0, -1.0, -4.0])
@pytest.mark.parametrize("m", [2, 3])
def test_zeroth_moment_is_isoperimetric_quotient(b, m):
    ms = model(b, m)
    spectrum = model_spectrum(ms, 0.8, 0)
    assert spectrum.values[0] == pytest.approx(float(isoperimetric_quotient(ms, 0.8)), rel=1e-10)


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_euclidean_scaling_law(lam):
    base = model_spectrum(model(0.0, 3), 1.0, 4)
    scaled = model_spectrum(model(0.0, 3), lam, 4)
    for k, (a, b) in enumerate(zip(base.values, scaled.values)):
        assert b == pytest.approx(lam ** (2 * k + 1) * a, rel=1e-8)


@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
def test_curvature_ordering_of_spectra(R):
    k_max = 5
    q0 = model_spectrum(model(0.0), R, k_max).values
    q1 = model_spectrum(model(-1.0), R, k_max).values
    q4 = model_spectrum(model(-4.0), R, k_max).values
    for k in range(k_max + 1):
        assert q1[k] <= q0[k]
        assert q4[k] <= q1[k]


def test_domain_monotonicity(hyperbolic_plane):
    small = solve_hierarchy(hyperbolic_plane, 0.8, 3)
    large = solve_hierarchy(hyperbolic_plane, 1.0, 3)
    r = np.linspace(0.0, 0.8, 9)[:-1]
    for k in range(1, 4):
        assert np.all(large.value(k, r) > small.value(k, r))


@pytest.mark.parametrize("b", [0.0, -1.0, -4.0])
@pytest.mark.parametrize("m", [2, 3])
def test_divergence_identity(b, m):
    profiles = solve_hierarchy(model(b, m), 0.8, 6)
    for k in range(6):
        check = verify_divergence_identity(profiles, k)
        assert check.passed, (k, check.residual)
        assert check.volume_side == pytest.approx(exit_moment(profiles, k), rel=1e-8)


def test_divergence_identity_euclidean_values(euclidean_plane):
    profiles = solve_hierarchy(euclidean_plane, 1.0, 2)
    first = verify_divergence_identity(profiles, 0)
    second = verify_divergence_identity(profiles, 1)
    assert first.volume_side == pytest.approx(0.5, rel=1e-10)
    assert first.residual < 1e-9
    assert second.boundary_side == pytest.approx(0.0625, rel=1e-8)


@pytest.mark.parametrize("b", [0.0, -1.0])
def test_ode_residual(b):
    profiles = solve_hierarchy(model(b), 1.0, 3)
    for k in (1, 2, 3):
        assert verify_ode_residual(profiles, k) < 1e-6


def test_ode_residual_grid_must_be_interior(euclidean_plane):
    profiles = solve_hierarchy(euclidean_plane, 1.0, 1)
    with pytest.raises(DomainError):
        verify_ode_residual(profiles, 1, grid=[0.0, 0.5])


def test_raw_moments_and_torsional_rigidity(euclidean_plane):
    # Saint-Venant: the torsional rigidity of the unit disk is pi / 8.
    assert torsional_rigidity(euclidean_plane, 1.0) == pytest.approx(math.pi / 8, rel=1e-9)
    profiles = solve_hierarchy(euclidean_plane, 1.0, 1)
    assert raw_moment(profiles, 0) == pytest.approx(math.pi, rel=1e-10)


def test_model_spectrum_fields(hyperbolic_plane):
    spectrum = model_spectrum(hyperbolic_plane, 1.0, 5)
    assert spectrum.max_order == 5
    assert spectrum.provenance is Provenance.QUADRATURE
    assert all(v > 0 for v in spectrum.values)
    area = 2 * math.pi * math.sinh(1.0)
    for value, raw in zip(spectrum.values, spectrum.raw_values):
        assert raw == pytest.approx(value * area, rel=1e-12)
    assert len(spectrum.error_estimates) == 6


def test_model_spectrum_reuses_profiles(euclidean_plane):
    profiles = solve_hierarchy(euclidean_plane, 1.0, 4)
    reused = model_spectrum(euclidean_plane, 1.0, 3, profiles=profiles)
    fresh = model_spectrum(euclidean_plane, 1.0, 3)
    np.testing.assert_allclose(reused.values, fresh.values, rtol=1e-12)


@pytest.mark.parametrize(
    "R, K, tol",
    [(0.0, 2, 1e-10), (-1.0, 2, 1e-10), (1.0, -1, 1e-10), (1.0, 2, 0.0)],
)
def test_invalid_requests(euclidean_plane, R, K, tol):
    with pytest.raises(DomainError):
        solve_hierarchy(euclidean_plane, R, K, tol)


def test_radius_beyond_spherical_domain():
    sphere = model(1.0)
    with pytest.raises(DomainError):
        solve_hierarchy(sphere, 4.0, 1)


def test_profiles_reject_radii_outside_ball(euclidean_plane):
    profiles = solve_hierarchy(euclidean_plane, 1.0, 1)
    with pytest.raises(DomainError):
        profiles.value(1, 1.5)
    with pytest.raises(UsageError):
        profiles.value(3, 0.5)
