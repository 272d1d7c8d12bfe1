"""Exit-moment hierarchy on geodesic balls of w-model spaces.

On a model ball B^w_R the moments u_k depend on the radius only. The
hierarchy Delta u_k + k u_{k-1} = 0, u_k(R) = 0 reduces to

    u_k'(r) = -k * int_0^r w^(m-1) u_{k-1} dt / w(r)^(m-1),
    u_k(r)  = -int_r^R u_k'(t) dt,

starting from u_0 = 1. Each u_k' is resolved as a Chebyshev interpolant of
the exact integral representation and u_k is its antiderivative anchored at R.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.typing import ArrayLike

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.constants import DEFAULT_MAX_ORDER, QUAD_ABS_FLOOR, QUAD_REL_TOL
from exit_spectra.enums import Provenance
from exit_spectra.exceptions import DomainError, NumericalError, UsageError
from exit_spectra.geometry.warp_models import (
    ModelSpace,
    eta,
    normalized_volume_integral,
    sphere_volume,
)
from exit_spectra.utils.quadrature import adaptive_quad, resolve_chebyshev

logger = configure_logging(__name__, "spectrum", DEBUG)


@dataclass(frozen=True)
class RadialProfileSet:
    """Solved hierarchy u_0..u_K on [0, R].

    Attributes:
        model (ModelSpace): The model space.
        radius (float): Ball radius R.
        max_order (int): K.
        profiles (Tuple[Chebyshev, ...]): Interpolants of u_0..u_K.
        derivatives (Tuple[Chebyshev, ...]): Interpolants of u_0'..u_K'.
        tolerance (float): Relative tolerance the profiles were resolved to.
        error_estimates (Tuple[float, ...]): Estimated absolute error per order.
    """

    model: ModelSpace
    radius: float
    max_order: int
    profiles: Tuple[Chebyshev, ...]
    derivatives: Tuple[Chebyshev, ...]
    tolerance: float
    error_estimates: Tuple[float, ...]

    def _order(self, k: int) -> int:
        if not 0 <= k <= self.max_order:
            raise UsageError(f"order {k} outside 0..{self.max_order}")
        return k

    def value(self, k: int, r: ArrayLike) -> np.ndarray:
        """Evaluate u_k at radii in [0, R]."""
        radius = self._radii(r)
        return np.asarray(self.profiles[self._order(k)](radius))

    def derivative(self, k: int, r: ArrayLike) -> np.ndarray:
        """Evaluate u_k' at radii in [0, R]."""
        radius = self._radii(r)
        return np.asarray(self.derivatives[self._order(k)](radius))

    def exact_derivative(self, k: int, r: ArrayLike) -> np.ndarray:
        """u_k' from its integral representation rather than the interpolant."""
        radius = self._radii(r)
        k = self._order(k)
        if k == 0:
            return np.zeros_like(radius)
        return -k * normalized_volume_integral(
            self.model,
            radius,
            f=self.profiles[k - 1],
            radius_scale=self.radius,
            rel_tol=self.tolerance,
        )

    def _radii(self, r: ArrayLike) -> np.ndarray:
        radius = np.asarray(r, dtype=float)
        if np.any(radius < 0) or np.any(radius > self.radius * (1.0 + 1e-12)):
            raise DomainError(f"radius outside [0, {self.radius:g}]")
        return radius


@dataclass(frozen=True)
class MomentSpectrum:
    """Isoperimetric exit-moment spectrum A_hat_0..A_hat_K of a domain.

    Attributes:
        radius (float): Radius of the generating ball.
        values (Tuple[float, ...]): A_hat_k = int u_k / Vol(boundary).
        raw_values (Tuple[float, ...]): A_{1,k} = int u_k.
        provenance (Provenance): How the values were obtained.
        error_estimates (Tuple[float, ...]): Estimated error of each value.
        source (str): Label of the model or mesh.
    """

    radius: float
    values: Tuple[float, ...]
    raw_values: Tuple[float, ...]
    provenance: Provenance
    error_estimates: Tuple[float, ...] = field(default=())
    source: str = ""

    @property
    def max_order(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class DivergenceCheck:
    volume_side: float
    boundary_side: float
    residual: float
    passed: bool


def _validate_request(model: ModelSpace, R: float, K: int, tol: float) -> None:
    if not 0 < R <= model.domain_max:
        raise DomainError(f"R = {R:g} outside (0, {model.domain_max:g}] for {model.label}")
    if int(K) != K or K < 0:
        raise DomainError(f"max order must be a non-negative integer, got {K}")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")


def solve_hierarchy(
    model: ModelSpace,
    R: float,
    K: int = DEFAULT_MAX_ORDER,
    tol: float = QUAD_REL_TOL,
) -> RadialProfileSet:
    """Solve the radial exit-moment hierarchy on B^w_R up to order K.

    Args:
        model (ModelSpace): Model space.
        R (float): Ball radius, 0 < R <= R_max.
        K (int): Highest order.
        tol (float): Relative tolerance for the profiles.

    Returns:
        RadialProfileSet: Profiles with u_0 = 1 and u_k(R) = 0 for k >= 1.

    Raises:
        DomainError: If R, K or tol are out of range.
        QuadratureError: If a profile cannot be resolved.
        NumericalError: If a computed profile fails to stay positive.
    """
    _validate_request(model, R, K, tol)
    R = float(R)
    domain = [0.0, R]
    profiles: List[Chebyshev] = [Chebyshev([1.0], domain=domain)]
    derivatives: List[Chebyshev] = [Chebyshev([0.0], domain=domain)]
    errors: List[float] = [0.0]
    check_grid = np.linspace(0.0, R, 257)[:-1]

    for k in range(1, int(K) + 1):
        previous = profiles[-1]

        def derivative_values(r: np.ndarray, k: int = k, previous: Chebyshev = previous) -> np.ndarray:
            return -k * normalized_volume_integral(
                model, r, f=previous, radius_scale=R, rel_tol=tol
            )

        series, tail = resolve_chebyshev(derivative_values, (0.0, R), tol)
        profile = series.integ(lbnd=R)
        values = profile(check_grid)
        if np.any(values <= 0):
            bad = check_grid[np.flatnonzero(values <= 0)[0]]
            raise NumericalError(
                f"profile u_{k} lost positivity at r = {bad:.6g} on {model.label}, R = {R:g}"
            )
        derivatives.append(series)
        profiles.append(profile)
        errors.append(tail * R + QUAD_ABS_FLOOR)
        logger.debug(
            f"Resolved u_{k} on {model.label}, R={R:g} with degree {series.degree()}"
        )

    return RadialProfileSet(
        model=model,
        radius=R,
        max_order=int(K),
        profiles=tuple(profiles),
        derivatives=tuple(derivatives),
        tolerance=float(tol),
        error_estimates=tuple(errors),
    )


def exit_moment(profiles: RadialProfileSet, k: int) -> float:
    """A_hat_k(B^w_R) = -u_{k+1}'(R)/(k+1).

    The boundary derivative is taken from the integral representation at R,
    which equals int_0^R w^(m-1) u_k dt / w(R)^(m-1).

    Raises:
        UsageError: If ``k`` is not in 0..max_order-1.
    """
    if int(k) != k or not 0 <= k <= profiles.max_order - 1:
        raise UsageError(
            f"exit moment of order {k} needs u_{k + 1}; profiles solved to {profiles.max_order}"
        )
    value = normalized_volume_integral(
        profiles.model,
        np.array([profiles.radius]),
        f=profiles.profiles[int(k)],
        rel_tol=profiles.tolerance,
    )
    return float(value[0])


def raw_moment(profiles: RadialProfileSet, k: int) -> float:
    """A_{1,k} = int_B u_k dV = A_hat_k * Vol(S^w_R)."""
    return exit_moment(profiles, k) * float(sphere_volume(profiles.model, profiles.radius))


def torsional_rigidity(model: ModelSpace, R: float, tol: float = QUAD_REL_TOL) -> float:
    """Torsional rigidity A_{1,1} of the model ball B^w_R."""
    return raw_moment(solve_hierarchy(model, R, 2, tol), 1)


def model_spectrum(
    model: ModelSpace,
    R: float,
    K: int = DEFAULT_MAX_ORDER,
    tol: float = QUAD_REL_TOL,
    profiles: RadialProfileSet | None = None,
) -> MomentSpectrum:
    """Spectrum A_hat_0..A_hat_K of B^w_R in one call.

    A profile set solved to order >= K+1 on the same ball may be passed in.
    """
    if profiles is None or profiles.max_order < K + 1:
        profiles = solve_hierarchy(model, R, K + 1, tol)
    area = float(sphere_volume(model, profiles.radius))
    values = tuple(exit_moment(profiles, k) for k in range(int(K) + 1))
    return MomentSpectrum(
        radius=profiles.radius,
        values=values,
        raw_values=tuple(v * area for v in values),
        provenance=Provenance.QUADRATURE,
        error_estimates=tuple(
            max(profiles.error_estimates[k + 1], tol * abs(v)) for k, v in enumerate(values)
        ),
        source=model.label,
    )


def verify_divergence_identity(
    profiles: RadialProfileSet, k: int, tol: float = 1e-8
) -> DivergenceCheck:
    """Compare the volume and boundary-flux routes to A_hat_k.

    The volume side integrates u_k w^(m-1) / w(R)^(m-1) with adaptive
    Gauss-Kronrod quadrature; the boundary side is -u_{k+1}'(R)/(k+1) from the
    stored derivative interpolant.
    """
    if int(k) != k or not 0 <= k <= profiles.max_order - 1:
        raise UsageError(f"divergence identity of order {k} needs u_{k + 1}")
    k = int(k)
    model, R = profiles.model, profiles.radius
    w = model.warping
    power = model.dim - 1
    w_R = float(w.eval(np.array(R)))
    profile = profiles.profiles[k]

    def integrand(t: float) -> float:
        return float(profile(t)) * (float(w.eval(np.array(t))) / w_R) ** power

    volume = adaptive_quad(
        integrand, 0.0, R, rel_tol=min(profiles.tolerance, tol), points=(1e-2 * R, 1e-1 * R)
    )
    boundary = -float(profiles.derivatives[k + 1](R)) / (k + 1)
    residual = abs(volume - boundary) / max(abs(volume), QUAD_ABS_FLOOR)
    return DivergenceCheck(
        volume_side=volume,
        boundary_side=boundary,
        residual=residual,
        passed=residual <= tol,
    )


def verify_ode_residual(
    profiles: RadialProfileSet, k: int, grid: ArrayLike | None = None
) -> float:
    """Max residual of u_k'' + (m-1)(w'/w) u_k' + k u_{k-1} on a grid in (0, R).

    Derivatives are five-point finite differences of the u_k interpolant with
    step 1e-3 R; the residual is normalised by k max|u_{k-1}|.
    """
    if int(k) != k or not 1 <= k <= profiles.max_order:
        raise UsageError(f"ODE residual needs 1 <= k <= {profiles.max_order}, got {k}")
    k = int(k)
    R = profiles.radius
    if grid is None:
        grid = np.linspace(0.05 * R, 0.95 * R, 64)
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0) or np.any(grid >= R):
        raise DomainError("ODE residual grid must lie in (0, R)")
    u = profiles.profiles[k]
    h = 1e-3 * R
    d1 = (u(grid - 2 * h) - 8 * u(grid - h) + 8 * u(grid + h) - u(grid + 2 * h)) / (12 * h)
    d2 = (
        -u(grid - 2 * h) + 16 * u(grid - h) - 30 * u(grid) + 16 * u(grid + h) - u(grid + 2 * h)
    ) / (12 * h * h)
    previous = profiles.profiles[k - 1]
    residual = d2 + (profiles.model.dim - 1) * eta(profiles.model, grid) * d1 + k * previous(grid)
    scale = k * max(float(np.max(np.abs(previous(np.linspace(0.0, R, 129))))), QUAD_ABS_FLOOR)
    return float(np.max(np.abs(residual)) / scale)
