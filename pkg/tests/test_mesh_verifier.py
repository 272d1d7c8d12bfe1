import math

import numpy as np
import pytest

from exit_spectra.core import (
    MomentSpectrum,
    SpectrumBound,
    build_constellation,
    make_bounding_functions,
    model_spectrum,
)
from exit_spectra.enums import BoundSide, ComparisonDirection, Provenance, SurfaceTypes
from exit_spectra.exceptions import DomainError, UsageError
from exit_spectra.factories import SurfaceGeneratorFactory
from exit_spectra.geometry import space_form_warping
from exit_spectra.mesh import (
    calibrate_mesh_tolerance,
    compare_with_bound,
    discrete_divergence_residual,
    estimate_hypothesis_fields,
    extract_extrinsic_ball,
    mesh_spectrum,
    solve_discrete_hierarchy,
    suggest_bounds,
    transplant_check,
    verify_extrinsic_ball,
)


def flat_constellation(R: float, side: BoundSide = BoundSide.ABOVE):
    bounds = make_bounding_functions(None, None, side, R)
    return build_constellation(3, 2, space_form_warping(0.0), bounds, R)


@pytest.fixture(scope="module")
def disk_hierarchy(coarse_disk):
    return solve_discrete_hierarchy(extract_extrinsic_ball(coarse_disk, 1.0), 3)


def test_small_ball_is_a_disk(coarse_disk):
    ball = extract_extrinsic_ball(coarse_disk, 0.5)
    assert ball.euler_characteristic == 1
    assert len(ball.boundary_loops) == 1
    assert ball.boundary_length == pytest.approx(math.pi, rel=0.02)
    np.testing.assert_allclose(ball.distances[ball.boundary_mask], 0.5, rtol=1e-9)
    np.testing.assert_array_equal(ball.center, [0.0, 0.0, 0.0])


def test_flat_disk_spectrum(disk_hierarchy):
    spectrum = mesh_spectrum(disk_hierarchy)
    assert spectrum.provenance is Provenance.MESH
    assert spectrum.values[0] == pytest.approx(0.5, rel=0.02)
    assert spectrum.values[1] == pytest.approx(1 / 16, rel=0.05)


def test_flat_disk_profiles_at_the_pole(disk_hierarchy):
    assert disk_hierarchy.at_pole(0) == 1.0
    assert disk_hierarchy.at_pole(1) == pytest.approx(0.25, rel=0.05)
    assert disk_hierarchy.at_pole(2) == pytest.approx(3 / 32, rel=0.05)
    interior = disk_hierarchy.ball.interior_vertices
    assert np.all(disk_hierarchy.values[1:, interior] > 0)


def test_discrete_divergence_identity(disk_hierarchy):
    for k in (1, 2):
        check = discrete_divergence_residual(disk_hierarchy, k)
        assert check.passed
        assert check.residual < 1e-8
    assert discrete_divergence_residual(disk_hierarchy, 0).volume_side == pytest.approx(
        math.pi, rel=0.02
    )
    with pytest.raises(UsageError):
        discrete_divergence_residual(disk_hierarchy, 3)


def test_spectrum_is_invariant_under_rigid_motions(coarse_disk, rotation):
    moved = coarse_disk.transformed(rotation, [0.3, -2.0, 5.0])
    original = mesh_spectrum(solve_discrete_hierarchy(extract_extrinsic_ball(coarse_disk, 0.8), 2))
    image = mesh_spectrum(solve_discrete_hierarchy(extract_extrinsic_ball(moved, 0.8), 2))
    np.testing.assert_allclose(image.values, original.values, rtol=1e-9)


def test_flat_disk_hypothesis_fields(disk_hierarchy):
    fields = estimate_hypothesis_fields(disk_hierarchy.ball)
    assert fields.max_abs_C < 1e-8
    assert fields.min_T == pytest.approx(1.0, abs=1e-9)
    assert not fields.valid[disk_hierarchy.ball.pole]
    suggestion = suggest_bounds(fields, 1.0, bins=4)
    assert abs(suggestion.h_lower) < 1e-8 and abs(suggestion.h_upper) < 1e-8
    assert len(suggestion.bin_edges) == 5
    np.testing.assert_allclose(suggestion.tangency_envelope, 1.0, atol=1e-9)


def test_sphere_cap_hypothesis_fields():
    rho = 2.0
    cap = SurfaceGeneratorFactory.get_generator(SurfaceTypes.SPHERE_CAP).generate(
        0.05, 1.0, sphere_radius=rho
    )
    fields = estimate_hypothesis_fields(extract_extrinsic_ball(cap, 1.0))
    r = fields.r[fields.valid]
    assert r.size > 100
    # nodes next to the sphere |x - p| = R are estimated as well as interior ones
    assert r.max() > 0.9
    np.testing.assert_allclose(fields.C[fields.valid], r / (2.0 * rho**2), atol=2e-3)
    np.testing.assert_allclose(
        fields.T[fields.valid], np.sqrt(1.0 - r**2 / (4.0 * rho**2)), atol=1e-2
    )


@pytest.mark.parametrize("surface", [SurfaceTypes.CATENOID, SurfaceTypes.HELICOID])
def test_minimal_surface_curvature_shrinks_under_refinement(surface):
    generator = SurfaceGeneratorFactory.get_generator(surface)
    max_abs_c = [
        estimate_hypothesis_fields(
            extract_extrinsic_ball(generator.generate(edge, 1.25), 1.0)
        ).max_abs_C
        for edge in (0.1, 0.05)
    ]
    assert max_abs_c[1] < max_abs_c[0]
    assert max_abs_c[1] < 1e-2


def disk_errors(edge_length: float) -> float:
    disk = SurfaceGeneratorFactory.get_generator(SurfaceTypes.DISK).generate(edge_length, 1.0)
    spectrum = mesh_spectrum(solve_discrete_hierarchy(extract_extrinsic_ball(disk, 1.0), 2))
    a0, a1 = spectrum.values[0], spectrum.values[1]
    return max(abs(a0 - 0.5) / 0.5, abs(a1 - 1 / 16) * 16)


def test_disk_spectrum_converges_at_second_order():
    coarse, fine = disk_errors(1 / 14), disk_errors(1 / 28)
    assert fine <= 0.02
    assert math.log2(coarse / fine) >= 1.7


def test_transplanted_profiles_match_on_the_disk(disk_hierarchy):
    results = transplant_check(disk_hierarchy, flat_constellation(1.0), 2)
    assert [r.k for r in results] == [1, 2]
    assert all(r.holds for r in results)
    with pytest.raises(UsageError):
        transplant_check(disk_hierarchy, flat_constellation(0.9), 2)


@pytest.mark.parametrize("R", [1.3, 0.005, -1.0])
def test_ball_radius_limits(coarse_disk, R):
    with pytest.raises(DomainError):
        extract_extrinsic_ball(coarse_disk, R)


def test_discrete_hierarchy_needs_an_order(coarse_disk):
    with pytest.raises(DomainError):
        solve_discrete_hierarchy(extract_extrinsic_ball(coarse_disk, 0.5), 0)


def test_compare_with_bound_directions():
    euclidean = model_spectrum(flat_constellation(1.0).comparison.as_model, 1.0, 1)
    upper = SpectrumBound(euclidean, BoundSide.ABOVE, ComparisonDirection.LE, 1.0)
    lower = SpectrumBound(euclidean, BoundSide.BELOW, ComparisonDirection.GE, 1.0)
    slightly_high = MomentSpectrum(
        radius=1.0,
        values=tuple(1.01 * v for v in euclidean.values),
        raw_values=euclidean.raw_values,
        provenance=Provenance.MESH,
    )
    assert all(v.holds and v.near_equality for v in compare_with_bound(slightly_high, upper, 0.02))
    assert not any(v.holds for v in compare_with_bound(slightly_high, upper, 0.005))
    assert all(v.holds for v in compare_with_bound(slightly_high, lower, 0.0))


def test_calibrated_tolerance_tracks_resolution():
    coarse = calibrate_mesh_tolerance(0.1, 1.0, K=2)
    assert 1e-3 <= coarse < 0.2
    assert calibrate_mesh_tolerance(0.1, 1.0, K=2, floor=0.5) == 0.5


def test_flat_disk_meets_the_euclidean_bound(coarse_disk, warning_manager):
    R = 1.0
    mesh_tol = calibrate_mesh_tolerance(coarse_disk.edge_length, R, K=2)
    result = verify_extrinsic_ball(
        coarse_disk, flat_constellation(R), 2, mesh_tol, warning_manager=warning_manager
    )
    assert result.passed
    assert all(v.near_equality for v in result.verdicts)
    assert len(result.spectrum.values) == 3
    assert result.bound.direction is ComparisonDirection.LE


@pytest.mark.slow
def test_catenoid_ball_below_the_euclidean_bound(warning_manager):
    catenoid = SurfaceGeneratorFactory.get_generator(SurfaceTypes.CATENOID).generate(
        0.04, 1.0, neck_radius=1.0
    )
    R = 0.8
    mesh_tol = calibrate_mesh_tolerance(catenoid.edge_length, R, K=2)
    result = verify_extrinsic_ball(
        catenoid, flat_constellation(R), 2, mesh_tol, warning_manager=warning_manager
    )
    assert result.ball.euler_characteristic == 1
    assert result.passed
    assert result.spectrum.values[1] <= result.bound.spectrum.values[1] * (1 + mesh_tol)
    # Minimal surface: the mean curvature estimate is small.
    assert result.fields.max_abs_C < 0.1
