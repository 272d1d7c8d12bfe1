import math

import numpy as np
import pytest

from exit_spectra.core import solve_hierarchy
from exit_spectra.exceptions import DomainError, SimulationTimeoutError, UsageError
from exit_spectra.geometry import ModelSpace, space_form_warping
from exit_spectra.stochastic import (
    DiffusionConfig,
    MomentEstimate,
    compare_to_quadrature,
    sample_exit_moments,
    simulate_exit_times,
    time_step_refinement,
)
from exit_spectra.utils import CustomWarning


@pytest.fixture
def small_run(euclidean_plane) -> DiffusionConfig:
    return DiffusionConfig(euclidean_plane, R=0.5, dt=2e-4, paths=300, seed=7, block_size=64)


def test_results_do_not_depend_on_worker_count(small_run):
    single = simulate_exit_times(small_run, workers=1)
    pooled = simulate_exit_times(small_run, workers=4)
    assert single.shape == (300,)
    np.testing.assert_array_equal(single, pooled)


def test_seed_changes_the_sample(euclidean_plane, small_run):
    other = DiffusionConfig(euclidean_plane, R=0.5, dt=2e-4, paths=300, seed=8, block_size=64)
    assert not np.array_equal(simulate_exit_times(small_run), simulate_exit_times(other))


def test_exit_times_are_positive(small_run):
    times = simulate_exit_times(small_run, workers=2)
    assert np.all(times > 0)
    assert np.all(np.isfinite(times))


def test_step_budget_is_enforced(euclidean_plane):
    cfg = DiffusionConfig(euclidean_plane, R=0.5, dt=1e-4, paths=16, max_steps=3)
    with pytest.raises(SimulationTimeoutError):
        simulate_exit_times(cfg, workers=1)


def test_coupled_refinement_is_reproducible(small_run):
    single = time_step_refinement(small_run, workers=1)
    pooled = time_step_refinement(small_run, workers=3)
    assert single == pooled
    assert single.dt == 2e-4
    assert single.coarse.paths_used == single.fine.paths_used == 300
    assert single.gap == pytest.approx(single.fine.mean - single.coarse.mean)
    assert single.combined_std_error == pytest.approx(
        math.hypot(single.coarse.std_error, single.fine.std_error)
    )
    # shared increments keep the two resolutions far closer than independent samples
    assert abs(single.gap) < 0.5 * single.combined_std_error


def test_coupled_refinement_honours_step_budget(euclidean_plane):
    cfg = DiffusionConfig(euclidean_plane, R=0.5, dt=1e-4, paths=16, max_steps=3)
    with pytest.raises(SimulationTimeoutError):
        time_step_refinement(cfg, workers=1)


def test_default_step_budget(euclidean_plane):
    cfg = DiffusionConfig(euclidean_plane, R=1.0, dt=1e-3, paths=10)
    assert cfg.step_budget == 10_000_000
    assert DiffusionConfig(euclidean_plane, R=1.0, max_steps=50).step_budget == 50


def test_coarse_step_is_reported(euclidean_plane, warning_manager):
    cfg = DiffusionConfig(euclidean_plane, R=0.5, dt=1e-3, paths=50)
    with pytest.warns(CustomWarning):
        estimates = sample_exit_moments(cfg, workers=1, warning_manager=warning_manager)
    assert warning_manager.by_category() == {"time_step": 1}
    assert [e.k for e in estimates] == [1, 2]
    assert all(e.paths_used == 50 for e in estimates)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"dt": 0.0},
        {"paths": 0},
        {"r0": 0.5},
        {"r0": -0.1},
        {"max_order": 0},
        {"R": 0.0},
        {"block_size": 0},
    ],
)
def test_invalid_configurations(euclidean_plane, kwargs):
    params = {"R": 0.5} | kwargs
    with pytest.raises(DomainError):
        DiffusionConfig(euclidean_plane, **params)


def test_zeroth_order_is_skipped(euclidean_plane):
    cfg = DiffusionConfig(euclidean_plane, R=1.0, max_order=1)
    profiles = solve_hierarchy(euclidean_plane, 1.0, 1)
    scores = compare_to_quadrature(
        cfg, profiles, estimates=[MomentEstimate(k=1, mean=0.26, std_error=0.01, paths_used=100)]
    )
    assert scores[0].k == 0 and scores[0].skipped
    assert scores[1].quad_value == pytest.approx(0.25)
    assert scores[1].z == pytest.approx(1.0)


def test_mismatched_profiles_need_permission(euclidean_plane, hyperbolic_plane):
    cfg = DiffusionConfig(euclidean_plane, R=1.0, max_order=1)
    estimates = [MomentEstimate(k=1, mean=0.25, std_error=0.01, paths_used=100)]
    with pytest.raises(UsageError):
        compare_to_quadrature(cfg, solve_hierarchy(hyperbolic_plane, 1.0, 1), estimates)
    with pytest.raises(UsageError):
        compare_to_quadrature(cfg, solve_hierarchy(euclidean_plane, 0.8, 1), estimates)
    scores = compare_to_quadrature(
        cfg, solve_hierarchy(euclidean_plane, 0.8, 1), estimates, allow_mismatch=True
    )
    assert scores[1].quad_value == pytest.approx(0.16)


def test_profiles_must_cover_the_simulated_orders(euclidean_plane):
    cfg = DiffusionConfig(euclidean_plane, R=1.0, max_order=3)
    with pytest.raises(UsageError):
        compare_to_quadrature(cfg, solve_hierarchy(euclidean_plane, 1.0, 2), estimates=[])


@pytest.mark.slow
@pytest.mark.parametrize("b", [0.0, -1.0])
def test_monte_carlo_agrees_with_quadrature(b):
    model = ModelSpace(2, space_form_warping(b))
    cfg = DiffusionConfig(model, R=0.5, dt=5e-5, paths=20_000, seed=2024)
    scores = compare_to_quadrature(cfg, solve_hierarchy(model, 0.5, 2), workers=2)
    for score in scores[1:]:
        assert abs(score.z) < 5, score
    if b == 0.0:
        # E[tau] = R^2 / (2m) for Brownian motion with generator Delta.
        assert scores[1].mc_mean == pytest.approx(0.0625, rel=0.03)


@pytest.mark.slow
def test_negative_control_is_detected(euclidean_plane):
    cfg = DiffusionConfig(euclidean_plane, R=0.5, dt=5e-5, paths=5_000, seed=99)
    estimates = sample_exit_moments(cfg, workers=2)
    wrong = compare_to_quadrature(
        cfg, solve_hierarchy(euclidean_plane, 0.4, 2), estimates, allow_mismatch=True
    )
    assert abs(wrong[1].z) > 10
    right = compare_to_quadrature(cfg, solve_hierarchy(euclidean_plane, 0.5, 2), estimates)
    assert abs(right[1].z) < 5
    assert math.isfinite(right[2].z)


@pytest.mark.slow
def test_halving_the_time_step_stays_within_noise(euclidean_plane):
    cfg = DiffusionConfig(euclidean_plane, R=1.0, dt=1e-4, paths=100_000, seed=11)
    check = time_step_refinement(cfg, workers=4)
    assert check.passed, check
    assert check.fine.mean == pytest.approx(0.25, abs=5 * check.fine.std_error)
