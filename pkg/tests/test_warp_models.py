import math

import numpy as np
import pytest

from exit_spectra.enums import WarpingKind
from exit_spectra.exceptions import DomainError, ValidationError
from exit_spectra.geometry import (
    ModelSpace,
    ball_volume,
    eta,
    isoperimetric_quotient,
    make_custom_warping,
    radial_curvature,
    space_form_warping,
    sphere_volume,
    unit_sphere_area,
)


@pytest.mark.parametrize(
    "b, r, w, dw",
    [
        (0.0, 2.0, 2.0, 1.0),
        (-1.0, 1.0, math.sinh(1.0), math.cosh(1.0)),
        (1.0, math.pi / 2, 1.0, 0.0),
    ],
)
def test_space_form_values(b, r, w, dw):
    q = space_form_warping(b)
    assert float(q.eval(r)) == pytest.approx(w, abs=1e-15)
    assert float(q.deriv1(r)) == pytest.approx(dw, abs=1e-15)
    assert q.kind is WarpingKind.SPACE_FORM
    assert q.curvature == b


def test_hyperbolic_warping_matches_closed_form():
    q = space_form_warping(-1.0)
    assert float(q.eval(1.0)) == pytest.approx(1.17520, abs=1e-5)
    assert float(q.deriv1(1.0)) == pytest.approx(1.54308, abs=1e-5)


def test_spherical_domain_is_capped_below_conjugate_radius():
    q = space_form_warping(4.0)
    assert q.domain_max < math.pi / 2
    with pytest.raises(DomainError):
        space_form_warping(1.0, domain_max=math.pi)


@pytest.mark.parametrize("b", [0.0, -1.0, -4.0, 0.25, 4.0])
def test_radial_curvature_is_constant_on_space_forms(b):
    model = ModelSpace(2, space_form_warping(b))
    grid = np.linspace(0.05, 0.9 * min(model.domain_max, 3.0), 50)
    np.testing.assert_allclose(radial_curvature(model, grid), b, atol=1e-9)


def test_radial_curvature_rejects_the_origin(euclidean_plane):
    with pytest.raises(DomainError):
        radial_curvature(euclidean_plane, 0.0)


@pytest.mark.parametrize(
    "b, r, expected",
    [(0.0, 2.0, 0.5), (-1.0, 1.0, 1.0 / math.tanh(1.0)), (-4.0, 1.0, 2.0 / math.tanh(2.0))],
)
def test_eta(b, r, expected):
    model = ModelSpace(2, space_form_warping(b))
    assert float(eta(model, r)) == pytest.approx(expected, rel=1e-12)


def test_euclidean_volumes():
    disk = ModelSpace(2, space_form_warping(0.0))
    assert float(ball_volume(disk, 1.0)) == pytest.approx(math.pi, rel=1e-10)
    assert float(sphere_volume(disk, 1.0)) == pytest.approx(2 * math.pi, rel=1e-12)
    ball = ModelSpace(3, space_form_warping(0.0))
    assert float(ball_volume(ball, 2.0)) == pytest.approx(32 * math.pi / 3, rel=1e-10)


def test_hyperbolic_disk_area(hyperbolic_plane):
    expected = 2 * math.pi * (math.cosh(1.0) - 1.0)
    assert float(ball_volume(hyperbolic_plane, 1.0)) == pytest.approx(expected, rel=1e-10)
    assert expected == pytest.approx(3.4323, abs=1e-4)


@pytest.mark.parametrize("n, area", [(1, 2 * math.pi), (2, 4 * math.pi), (3, 2 * math.pi**2)])
def test_unit_sphere_area(n, area):
    assert unit_sphere_area(n) == pytest.approx(area, rel=1e-14)


@pytest.mark.parametrize(
    "b, expected",
    [(-1.0, math.tanh(0.5)), (-4.0, math.tanh(1.0) / 2)],
)
def test_isoperimetric_quotient_closed_forms(b, expected):
    model = ModelSpace(2, space_form_warping(b))
    assert float(isoperimetric_quotient(model, 1.0)) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("m", [2, 3, 5])
def test_euclidean_isoperimetric_quotient(m):
    model = ModelSpace(m, space_form_warping(0.0))
    grid = np.array([0.1, 0.5, 1.0, 2.0])
    np.testing.assert_allclose(isoperimetric_quotient(model, grid), grid / m, rtol=1e-12)


@pytest.mark.parametrize("b", [0.0, -1.0, 1.0])
def test_volume_quotient_identity(b):
    model = ModelSpace(3, space_form_warping(b))
    grid = np.linspace(0.1, 1.2, 12)
    np.testing.assert_allclose(
        sphere_volume(model, grid) * isoperimetric_quotient(model, grid),
        ball_volume(model, grid),
        rtol=1e-9,
    )


@pytest.mark.parametrize("b", [0.0, -0.25, -1.0, -4.0])
def test_isoperimetric_quotient_increases_on_nonpositive_space_forms(b):
    model = ModelSpace(2, space_form_warping(b))
    values = isoperimetric_quotient(model, np.linspace(0.01, 2.0, 100))
    assert np.all(np.diff(values) > 0)


def test_custom_warping_accepts_consistent_triple():
    w = make_custom_warping(
        np.sinh, np.cosh, np.sinh, domain_max=3.0, label="sinh"
    )
    assert w.kind is WarpingKind.CUSTOM
    assert w.derivative_consistency() < 1e-6


def test_custom_warping_rejects_wrong_derivative():
    with pytest.raises(ValidationError, match="finite differences"):
        make_custom_warping(np.sinh, np.cosh, np.cosh, domain_max=3.0, label="bad")


@pytest.mark.parametrize(
    "w, dw, match",
    [
        (lambda r: np.asarray(r) + 1.0, lambda r: np.ones(np.shape(r)), "w\\(0\\)"),
        (lambda r: 2.0 * np.asarray(r), lambda r: 2.0 * np.ones(np.shape(r)), "w'\\(0\\)"),
        (np.sin, np.cos, "not positive"),
    ],
)
def test_custom_warping_rejects_invalid_profiles(w, dw, match):
    with pytest.raises(ValidationError, match=match):
        make_custom_warping(w, dw, lambda r: np.zeros(np.shape(r)), domain_max=4.0)


def test_model_dimension_must_be_at_least_two():
    with pytest.raises(DomainError):
        ModelSpace(1, space_form_warping(0.0))
