import numpy as np
import pytest

from exit_spectra.enums import SurfaceTypes
from exit_spectra.exceptions import DomainError
from exit_spectra.factories import SurfaceGeneratorFactory


def generate(surface_type: SurfaceTypes, edge_length: float = 0.1, extent: float = 1.0, **params):
    return SurfaceGeneratorFactory.get_generator(surface_type).generate(edge_length, extent, **params)


def test_all_surfaces_are_registered():
    assert set(SurfaceGeneratorFactory.available()) == set(SurfaceTypes)


@pytest.mark.parametrize(
    "surface_type, parameter",
    [
        (SurfaceTypes.DISK, None),
        (SurfaceTypes.SPHERE_CAP, "sphere_radius"),
        (SurfaceTypes.CATENOID, "neck_radius"),
        (SurfaceTypes.HELICOID, "pitch"),
    ],
)
def test_shape_parameters(surface_type, parameter):
    assert SurfaceGeneratorFactory.get_generator(surface_type).shape_parameter == parameter


@pytest.mark.parametrize("surface_type", list(SurfaceTypes))
def test_surfaces_cover_the_requested_ball(surface_type):
    mesh = generate(surface_type, 0.1, 1.0)
    distances = np.linalg.norm(mesh.vertices - mesh.pole, axis=1)
    assert distances.max() >= 1.0 - 1e-9
    assert mesh.name == surface_type.value
    assert 0.05 < mesh.edge_length < 0.2


def test_disk():
    mesh = generate(SurfaceTypes.DISK, 0.1, 1.25)
    np.testing.assert_array_equal(mesh.pole, [0.0, 0.0, 0.0])
    np.testing.assert_allclose(mesh.vertices[:, 2], 0.0)
    assert np.max(np.linalg.norm(mesh.vertices, axis=1)) == pytest.approx(1.25)


def test_sphere_cap_lies_on_its_sphere():
    mesh = generate(SurfaceTypes.SPHERE_CAP, 0.05, 1.0, sphere_radius=2.0)
    np.testing.assert_allclose(mesh.pole, 0.0, atol=1e-15)
    center = np.array([0.0, 0.0, -2.0])
    np.testing.assert_allclose(np.linalg.norm(mesh.vertices - center, axis=1), 2.0, rtol=1e-12)


def test_sphere_cap_must_fit_on_the_sphere():
    with pytest.raises(DomainError):
        generate(SurfaceTypes.SPHERE_CAP, 0.1, 2.0, sphere_radius=1.0)


def test_catenoid_lies_on_its_surface():
    mesh = generate(SurfaceTypes.CATENOID, 0.1, 1.0, neck_radius=0.8)
    np.testing.assert_allclose(mesh.pole, [0.8, 0.0, 0.0], atol=1e-15)
    x, y, z = mesh.vertices.T
    np.testing.assert_allclose(np.hypot(x, y), 0.8 * np.cosh(z / 0.8), rtol=1e-12)


def test_helicoid_lies_on_its_surface():
    mesh = generate(SurfaceTypes.HELICOID, 0.1, 1.0, pitch=0.5)
    np.testing.assert_allclose(mesh.pole, 0.0, atol=1e-15)
    x, y, z = mesh.vertices.T
    np.testing.assert_allclose(x * np.sin(z / 0.5) - y * np.cos(z / 0.5), 0.0, atol=1e-12)


@pytest.mark.parametrize("surface_type", list(SurfaceTypes))
def test_resolution_limits(surface_type):
    with pytest.raises(DomainError):
        generate(surface_type, 1e-4, 1.0)
    with pytest.raises(DomainError):
        generate(surface_type, 0.0, 1.0)
    with pytest.raises(DomainError):
        generate(surface_type, 0.1, -1.0)


def test_unknown_surface_type():
    with pytest.raises(ValueError):
        SurfaceGeneratorFactory.get_generator("torus")
