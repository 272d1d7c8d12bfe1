"""Monte-Carlo oracle for exit-time moments of Brownian motion from model balls.

The radial part of Brownian motion with generator Delta on a w-model is

    dr = sqrt(2) dB + (m - 1) eta_w(r) dt,

so u_k(r0) = E[tau^k] for the exit time tau of [0, R). Paths are advanced by
Euler-Maruyama away from the origin and by exact Bessel increments of the
Euclidean tangent process below r_min = 10 sqrt(dt). Exits between steps are
caught with the Brownian-bridge crossing probability, and exits at a step are
dated by linear interpolation of the overshoot.

Paths are split into fixed-size blocks; block b draws from
``Philox(SeedSequence([seed, b]))``, so results depend only on the seed and
the block size, never on the number of worker threads. A coupled variant runs
the same paths at dt and dt/2 to check that the time step is resolved.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, List, Tuple

import numpy as np

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.constants import DEFAULT_SEED
from exit_spectra.core.spectrum import RadialProfileSet
from exit_spectra.exceptions import DomainError, SimulationTimeoutError, UsageError
from exit_spectra.geometry.warp_models import ModelSpace
from exit_spectra.utils.utilities import resolve_worker_count
from exit_spectra.utils.warning_manager import WarningManager

logger = configure_logging(__name__, "diffusion_oracle", DEBUG)

DEFAULT_BLOCK_SIZE = 1 << 14

# Steps whose distance to R exceeds this many step deviations skip the bridge test.
_BRIDGE_WINDOW = 6.0


@dataclass(frozen=True)
class DiffusionConfig:
    """Parameters of one Monte-Carlo run.

    Attributes:
        model (ModelSpace): Model space.
        R (float): Exit radius.
        r0 (float): Start radius in [0, R).
        dt (float): Time step.
        paths (int): Number of simulated paths.
        seed (int): Root seed.
        max_order (int): Highest moment K.
        max_steps (int | None): Per-path step budget; default
            max(1e8 / paths, 200 R^2 / dt).
        block_size (int): Paths per RNG block.
    """

    model: ModelSpace
    R: float
    r0: float = 0.0
    dt: float = 1e-4
    paths: int = 100_000
    seed: int = DEFAULT_SEED
    max_order: int = 2
    max_steps: int | None = None
    block_size: int = DEFAULT_BLOCK_SIZE

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        if int(self.paths) != self.paths or self.paths < 1:
            raise DomainError(f"paths must be a positive integer, got {self.paths}")
        if not 0 < self.R <= self.model.domain_max:
            raise DomainError(f"R = {self.R:g} outside (0, {self.model.domain_max:g}]")
        if not 0 <= self.r0 < self.R:
            raise DomainError(f"start radius {self.r0:g} outside [0, {self.R:g})")
        if int(self.max_order) != self.max_order or self.max_order < 1:
            raise DomainError(f"max order must be an integer >= 1, got {self.max_order}")
        if self.block_size < 1:
            raise DomainError(f"block size must be positive, got {self.block_size}")

    @property
    def step_budget(self) -> int:
        if self.max_steps is not None:
            return int(self.max_steps)
        return int(max(1e8 / self.paths, 200.0 * self.R**2 / self.dt))


@dataclass(frozen=True)
class MomentEstimate:
    """Sample estimate of E[tau^k].

    Attributes:
        k (int): Order.
        mean (float): Sample mean of tau^k.
        std_error (float): Standard error of the mean.
        paths_used (int): Sample size.
    """

    k: int
    mean: float
    std_error: float
    paths_used: int

    @property
    def relative_error(self) -> float:
        return self.std_error / abs(self.mean) if self.mean else math.inf


@dataclass(frozen=True)
class ZScore:
    """Standardised gap between a Monte-Carlo estimate and the quadrature profile.

    ``z`` is None when the order is skipped (k = 0 is exact).
    """

    k: int
    mc_mean: float
    std_error: float
    quad_value: float
    z: float | None

    @property
    def skipped(self) -> bool:
        return self.z is None


def _advance(
    cfg: DiffusionConfig, r: np.ndarray, z: np.ndarray, transverse: np.ndarray
) -> np.ndarray:
    """One step from ``r``; ``transverse`` holds chi-square(m - 1) draws, read below r_min."""
    m, dt = cfg.model.dim, float(cfg.dt)
    w = cfg.model.warping
    sigma = math.sqrt(2.0 * dt)
    near = r < 10.0 * math.sqrt(dt)
    new = np.empty_like(r)
    far = ~near
    if np.any(far):
        rf = r[far]
        drift = (m - 1) * np.asarray(w.deriv1(rf)) / np.asarray(w.eval(rf))
        new[far] = np.abs(rf + drift * dt + sigma * z[far])
    if np.any(near):
        # Exact Bessel(m) increment: one radial and m-1 transverse Gaussians.
        new[near] = np.sqrt((r[near] + sigma * z[near]) ** 2 + sigma**2 * transverse[near])
    return new


def _exit_times(
    cfg: DiffusionConfig,
    step: int,
    r: np.ndarray,
    new: np.ndarray,
    uniform: Callable[[int], np.ndarray],
) -> np.ndarray:
    """Exit times within the step from ``r`` to ``new``; NaN where the path stays."""
    R, dt = float(cfg.R), float(cfg.dt)
    window = _BRIDGE_WINDOW * math.sqrt(2.0 * dt)
    crossed = new >= R
    exit_time = np.full(r.size, np.nan)
    if np.any(crossed):
        frac = (R - r[crossed]) / (new[crossed] - r[crossed])
        exit_time[crossed] = (step + frac) * dt
    close = (~crossed) & (R - new < window) & (R - r < window)
    if np.any(close):
        p = np.exp(-(R - r[close]) * (R - new[close]) / dt)
        u = uniform(int(np.count_nonzero(close)))
        exit_time[np.flatnonzero(close)[u < p]] = (step + 0.5) * dt
    return exit_time


def _simulate_block(cfg: DiffusionConfig, block: int, count: int) -> np.ndarray:
    """Exit times of ``count`` paths drawn from the stream of ``block``."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([cfg.seed, block])))
    m = cfg.model.dim
    r_min = 10.0 * math.sqrt(cfg.dt)
    budget = cfg.step_budget

    times = np.empty(count)
    alive = np.arange(count)
    r = np.full(count, float(cfg.r0))
    step = 0
    while alive.size:
        if step >= budget:
            raise SimulationTimeoutError(
                f"{alive.size} paths of block {block} did not exit within {budget} steps"
            )
        z = rng.standard_normal(alive.size)
        near = r < r_min
        transverse = np.zeros(r.size)
        if np.any(near):
            transverse[near] = rng.chisquare(m - 1, size=int(np.count_nonzero(near)))
        new = _advance(cfg, r, z, transverse)
        exit_time = _exit_times(cfg, step, r, new, rng.random)
        done = ~np.isnan(exit_time)
        if np.any(done):
            times[alive[done]] = exit_time[done]
            keep = ~done
            alive = alive[keep]
            r = new[keep]
        else:
            r = new
        step += 1
    return times


class _CoupledPaths:
    """Path state at one time step, fed with externally drawn Gaussians."""

    def __init__(self, cfg: DiffusionConfig, count: int) -> None:
        self.cfg = cfg
        self.r = np.full(count, float(cfg.r0))
        self.alive = np.ones(count, dtype=bool)
        self.times = np.full(count, np.nan)

    def advance(
        self, step: int, active: np.ndarray, normals: np.ndarray, rng: np.random.Generator
    ) -> None:
        """Move the live paths among ``active``; row i of ``normals`` belongs to active[i]."""
        mine = self.alive[active]
        if not np.any(mine):
            return
        idx = active[mine]
        r = self.r[idx]
        z = normals[mine]
        new = _advance(self.cfg, r, z[:, 0], np.sum(z[:, 1:] ** 2, axis=1))
        exit_time = _exit_times(self.cfg, step, r, new, rng.random)
        done = ~np.isnan(exit_time)
        self.times[idx[done]] = exit_time[done]
        self.alive[idx[done]] = False
        self.r[idx] = new


def _simulate_coupled_block(
    cfg: DiffusionConfig, block: int, count: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Exit times at dt and dt/2 for the same ``count`` Brownian paths.

    Each coarse step consumes the sum of the two fine increments it covers,
    so the gap between the two resolutions is mostly discretisation error.
    """
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([cfg.seed, block, 2])))
    m = cfg.model.dim
    coarse = _CoupledPaths(cfg, count)
    fine = _CoupledPaths(replace(cfg, dt=0.5 * cfg.dt), count)
    budget = cfg.step_budget
    step = 0
    while True:
        active = np.flatnonzero(coarse.alive | fine.alive)
        if not active.size:
            break
        if step >= budget:
            raise SimulationTimeoutError(
                f"{active.size} coupled paths of block {block} did not exit within {budget} steps"
            )
        z1 = rng.standard_normal((active.size, m))
        z2 = rng.standard_normal((active.size, m))
        fine.advance(2 * step, active, z1, rng)
        fine.advance(2 * step + 1, active, z2, rng)
        coarse.advance(step, active, (z1 + z2) / math.sqrt(2.0), rng)
        step += 1
    return coarse.times, fine.times


def _block_layout(cfg: DiffusionConfig) -> List[Tuple[int, int]]:
    full, rest = divmod(int(cfg.paths), int(cfg.block_size))
    layout = [(b, int(cfg.block_size)) for b in range(full)]
    if rest:
        layout.append((full, rest))
    return layout


def simulate_exit_times(cfg: DiffusionConfig, workers: int | None = None) -> np.ndarray:
    """Exit times of all paths, in path order."""
    layout = _block_layout(cfg)
    workers = resolve_worker_count(workers)
    logger.debug(
        f"Simulating {cfg.paths} paths on {cfg.model.label}, R={cfg.R:g}, dt={cfg.dt:g} "
        f"in {len(layout)} blocks with {workers} workers"
    )
    with ThreadPoolExecutor(max_workers=workers) as pool:
        blocks = list(pool.map(lambda item: _simulate_block(cfg, *item), layout))
    return np.concatenate(blocks)


def sample_exit_moments(
    cfg: DiffusionConfig,
    workers: int | None = None,
    warning_manager: WarningManager | None = None,
) -> List[MomentEstimate]:
    """Sample moments E[tau^k], k = 1..K, with standard errors.

    Raises:
        SimulationTimeoutError: If a path exhausts the step budget.
    """
    if cfg.dt > 1e-3 * cfg.R**2:
        message = (
            f"dt = {cfg.dt:g} is coarse against R^2 = {cfg.R**2:g}; "
            "discretisation bias may exceed the statistical error"
        )
        if warning_manager is not None:
            warning_manager.log_warning("time_step", message)
        else:
            logger.warning(message)
    return _moments(simulate_exit_times(cfg, workers), int(cfg.max_order))


def _moments(times: np.ndarray, max_order: int) -> List[MomentEstimate]:
    estimates = []
    n = times.size
    for k in range(1, max_order + 1):
        samples = times**k
        std = float(np.std(samples, ddof=1)) if n > 1 else 0.0
        estimates.append(
            MomentEstimate(k=k, mean=float(np.mean(samples)), std_error=std / math.sqrt(n), paths_used=n)
        )
    return estimates


@dataclass(frozen=True)
class RefinementCheck:
    """E[tau] at dt and dt/2 from shared Brownian increments.

    ``gap`` is fine minus coarse; the step is resolved when it stays below
    the combined standard error of the two estimates.
    """

    dt: float
    coarse: MomentEstimate
    fine: MomentEstimate

    @property
    def gap(self) -> float:
        return self.fine.mean - self.coarse.mean

    @property
    def combined_std_error(self) -> float:
        return math.hypot(self.coarse.std_error, self.fine.std_error)

    @property
    def passed(self) -> bool:
        return abs(self.gap) < self.combined_std_error


def time_step_refinement(cfg: DiffusionConfig, workers: int | None = None) -> RefinementCheck:
    """Halve ``cfg.dt`` on the same paths and compare the mean exit times.

    Raises:
        SimulationTimeoutError: If a path exhausts the step budget.
    """
    layout = _block_layout(cfg)
    workers = resolve_worker_count(workers)
    logger.debug(
        f"Refining dt={cfg.dt:g} on {cfg.paths} coupled paths, {cfg.model.label}, R={cfg.R:g}"
    )
    with ThreadPoolExecutor(max_workers=workers) as pool:
        blocks = list(pool.map(lambda item: _simulate_coupled_block(cfg, *item), layout))
    coarse = _moments(np.concatenate([c for c, _ in blocks]), 1)[0]
    fine = _moments(np.concatenate([f for _, f in blocks]), 1)[0]
    check = RefinementCheck(dt=float(cfg.dt), coarse=coarse, fine=fine)
    logger.info(
        f"E[tau] at dt={cfg.dt:g}: {coarse.mean:.6g}, at dt/2: {fine.mean:.6g} "
        f"(gap {check.gap:.3g}, combined std error {check.combined_std_error:.3g})"
    )
    return check


def compare_to_quadrature(
    cfg: DiffusionConfig,
    profiles: RadialProfileSet,
    estimates: List[MomentEstimate] | None = None,
    allow_mismatch: bool = False,
    workers: int | None = None,
) -> List[ZScore]:
    """z_k = (MC mean - u_k(r0)) / std_error for k = 0..K.

    Args:
        cfg: Monte-Carlo configuration.
        profiles: Quadrature profiles, solved to order >= cfg.max_order.
        estimates: Reuse these estimates instead of simulating.
        allow_mismatch: Accept profiles of another model or radius, e.g. as a
            negative control; u_k(r0) is then clipped to the profile's domain.
        workers: Worker threads for the simulation.

    Raises:
        UsageError: If model or radius differ and ``allow_mismatch`` is False,
            or the profiles are solved to a lower order.
    """
    matched = cfg.model.same_as(profiles.model) and math.isclose(
        cfg.R, profiles.radius, rel_tol=1e-12
    )
    if not matched and not allow_mismatch:
        raise UsageError(
            f"profiles on {profiles.model.label}, R={profiles.radius:g} do not match "
            f"simulation on {cfg.model.label}, R={cfg.R:g}"
        )
    if profiles.max_order < cfg.max_order:
        raise UsageError(
            f"profiles solved to order {profiles.max_order} < simulated order {cfg.max_order}"
        )
    if estimates is None:
        estimates = sample_exit_moments(cfg, workers)
    r0 = min(cfg.r0, profiles.radius)
    scores = [ZScore(k=0, mc_mean=1.0, std_error=0.0, quad_value=1.0, z=None)]
    for est in estimates:
        quad = float(profiles.value(est.k, r0))
        z = (est.mean - quad) / est.std_error if est.std_error > 0 else math.inf
        scores.append(
            ZScore(k=est.k, mc_mean=est.mean, std_error=est.std_error, quad_value=quad, z=z)
        )
    return scores
