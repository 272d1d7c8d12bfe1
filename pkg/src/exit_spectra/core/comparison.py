"""Isoperimetric comparison spaces and the comparison theorems they feed.

A comparison space is built from a curvature bound w, a tangency bound g and
a mean-convexity bound h. With the stretching s(r) = int_0^r dt/g(t), the
auxiliary function Lambda solves

    d/dr (Lambda w g) = m Lambda (w' - h w) / g,    Lambda(r) / r^(m-1) -> 1,

and W(s) = Lambda(r(s))^(1/(m-1)) is the warping of the comparison model.
We integrate the regularised logarithmic derivative

    phi(t) = m (w' - h w) / (w g^2) - m / t,

which is finite at 0, so that Lambda = r^(m-1) exp(psi) with
psi = ln(r / w) + int_0^r phi - ln g.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from numpy.polynomial import Chebyshev
from numpy.typing import ArrayLike
from scipy.optimize import brentq

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.constants import (
    BALANCE_GRID_POINTS,
    NEAR_ORIGIN_FRACTION,
    QUAD_REL_TOL,
)
from exit_spectra.core.spectrum import MomentSpectrum, model_spectrum, solve_hierarchy
from exit_spectra.enums import BoundSide, ComparisonDirection, WarpingKind
from exit_spectra.exceptions import (
    DomainError,
    HypothesisViolationError,
    NumericalError,
    UsageError,
    ValidationError,
)
from exit_spectra.geometry.radial_functions import RadialFunction, constant_function
from exit_spectra.geometry.warp_models import (
    ModelSpace,
    WarpingFunction,
    isoperimetric_quotient,
    radial_curvature,
)
from exit_spectra.utils.quadrature import resolve_chebyshev, unit_gauss_integral
from exit_spectra.utils.warning_manager import WarningManager

logger = configure_logging(__name__, "comparison", DEBUG)

# Balance margins within this band of zero count as zero.
BALANCE_MARGIN_TOL = 1e-12

# |h(eps) * eps| above this means h blows up like c / r at the origin.
_H_BLOWUP_LIMIT = 1e-3


@dataclass(frozen=True)
class BoundingFunctions:
    """Tangency bound g and mean-convexity bound h of a constellation.

    Attributes:
        g (RadialFunction): Tangency bound, g(0) = 1 and 0 < g <= 1.
        h (RadialFunction): Mean-convexity bound (h_1 below, h_2 above).
        side (BoundSide): Which comparison theorem the bounds feed.
    """

    g: RadialFunction
    h: RadialFunction
    side: BoundSide

    def validate(self, R: float) -> None:
        """Check g(0) = 1 and g in (0, 1] on [0, R].

        Raises:
            ValidationError: Naming the first offending radius.
        """
        grid = np.linspace(0.0, R, 1025)
        values = np.asarray(self.g.eval(grid), dtype=float)
        if abs(values[0] - 1.0) > 1e-9:
            raise ValidationError(f"g(0) = {values[0]:.6g}, expected 1")
        bad = np.flatnonzero(~(values > 0))
        if bad.size:
            raise ValidationError(f"g is not positive at r = {grid[bad[0]]:.6g}")
        bad = np.flatnonzero(values > 1.0 + 1e-12)
        if bad.size:
            raise ValidationError(f"g exceeds 1 at r = {grid[bad[0]]:.6g}")
        if self.side is BoundSide.ABOVE and not self.g.is_constant(1.0, R):
            raise ValidationError("bounds from above require g identically 1")


def make_bounding_functions(
    g: RadialFunction | None,
    h: RadialFunction | None,
    side: BoundSide,
    R: float,
    warning_manager: WarningManager | None = None,
) -> BoundingFunctions:
    """Validated bounds; on the ``above`` side g is replaced by 1 with a warning."""
    g = g if g is not None else constant_function(1.0, "1")
    h = h if h is not None else constant_function(0.0, "0")
    if side is BoundSide.ABOVE and not g.is_constant(1.0, R):
        message = f"tangency bound {g.label!r} ignored: bounds from above use g = 1"
        if warning_manager is not None:
            warning_manager.log_warning("bounds", message)
        else:
            logger.warning(message)
        g = constant_function(1.0, "1")
    bounds = BoundingFunctions(g=g, h=h, side=side)
    bounds.validate(R)
    return bounds


@dataclass(frozen=True)
class StretchingMap:
    """The stretching s(r) = int_0^r dt / g(t) on [0, R] and its inverse.

    Attributes:
        g (RadialFunction): Tangency bound.
        radius (float): R.
        s_max (float): s(R) >= R.
        identity (bool): True when g is 1 on the grid; both maps are then exact.
        forward_series (Chebyshev | None): Interpolant of s on [0, R].
        inverse_series (Chebyshev | None): Interpolant of r(s) on [0, s(R)].
    """

    g: RadialFunction
    radius: float
    s_max: float
    identity: bool
    forward_series: Chebyshev | None = None
    inverse_series: Chebyshev | None = None

    def forward(self, r: ArrayLike) -> np.ndarray:
        """s(r) by Gauss quadrature of 1/g."""
        radius = np.asarray(r, dtype=float)
        if self.identity:
            return radius.copy()
        g = self.g

        def integrand(x: np.ndarray) -> np.ndarray:
            return 1.0 / np.asarray(g.eval(radius[..., None] * x))

        return radius * unit_gauss_integral(integrand)

    def inverse(self, s: ArrayLike) -> np.ndarray:
        """r(s): interpolant polished by two Newton steps, since s' = 1/g."""
        values = np.asarray(s, dtype=float)
        if self.identity:
            return values.copy()
        r = np.clip(self.inverse_series(values), 0.0, self.radius)
        for _ in range(2):
            r = r - (self.forward_series(r) - values) * np.asarray(self.g.eval(r))
            r = np.clip(r, 0.0, self.radius)
        return np.where(values == 0.0, 0.0, r)


def build_stretching(g: RadialFunction, R: float, tol: float = QUAD_REL_TOL) -> StretchingMap:
    """Stretching map of the tangency bound g on [0, R].

    Raises:
        ValidationError: If g <= 0 or g > 1 somewhere on the grid.
        NumericalError: If forward and inverse fail to agree to 1e-10.
    """
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    grid = np.linspace(0.0, R, 1025)
    values = np.asarray(g.eval(grid), dtype=float)
    bad = np.flatnonzero(~(values > 0))
    if bad.size:
        raise ValidationError(f"g is not positive at r = {grid[bad[0]]:.6g}")
    bad = np.flatnonzero(values > 1.0 + 1e-12)
    if bad.size:
        raise ValidationError(f"g exceeds 1 at r = {grid[bad[0]]:.6g}")
    if np.all(np.abs(values - 1.0) <= 1e-15):
        return StretchingMap(g=g, radius=float(R), s_max=float(R), identity=True)

    partial = StretchingMap(g=g, radius=float(R), s_max=float("nan"), identity=False)
    forward_series, _ = resolve_chebyshev(partial.forward, (0.0, R), 1e-2 * tol)
    s_max = float(partial.forward(np.array(R)))

    def inverse_values(s: np.ndarray) -> np.ndarray:
        return np.array(
            [
                brentq(lambda r, target=target: forward_series(r) - target, 0.0, R, xtol=1e-15 * R)
                for target in np.ravel(s)
            ]
        ).reshape(np.shape(s))

    inverse_series, _ = resolve_chebyshev(inverse_values, (0.0, s_max), tol)
    stretch = StretchingMap(
        g=g,
        radius=float(R),
        s_max=s_max,
        identity=False,
        forward_series=forward_series,
        inverse_series=inverse_series,
    )
    check = np.linspace(0.0, s_max, 257)
    mismatch = float(np.max(np.abs(stretch.forward(stretch.inverse(check)) - check)))
    if mismatch > 1e-10 * max(s_max, 1.0):
        raise NumericalError(f"stretching inverse mismatch {mismatch:.3g} exceeds 1e-10")
    logger.debug(f"Stretching of g={g.label!r} on [0, {R:g}]: s(R) = {s_max:.12g}")
    return stretch


@dataclass(frozen=True)
class ComparisonSpace:
    """The W-model built from (w, g, h) in dimension m.

    Attributes:
        warping (WarpingFunction): Curvature bound w.
        bounds (BoundingFunctions): Tangency and mean-convexity bounds.
        dim (int): m.
        radius (float): R, the extrinsic radius.
        stretch (StretchingMap): s on [0, R].
        psi_series (Chebyshev): Interpolant of psi = ln(Lambda / r^(m-1)).
        tolerance (float): Quadrature tolerance used throughout.
        as_model (ModelSpace | None): The W-model on [0, s(R)].
    """

    warping: WarpingFunction
    bounds: BoundingFunctions
    dim: int
    radius: float
    stretch: StretchingMap
    psi_series: Chebyshev
    tolerance: float
    as_model: ModelSpace = field(default=None, repr=False)  # type: ignore[assignment]

    @property
    def s_max(self) -> float:
        return self.stretch.s_max

    @property
    def label(self) -> str:
        return (
            f"C[w={self.warping.label},g={self.bounds.g.label},"
            f"h={self.bounds.h.label},m={self.dim}]"
        )

    def phi(self, t: ArrayLike) -> np.ndarray:
        """Regularised log-derivative m(w' - h w)/(w g^2) - m/t, extrapolated near 0."""
        t = np.asarray(t, dtype=float)
        eps = NEAR_ORIGIN_FRACTION * self.radius
        raw = self._phi_raw(np.maximum(t, eps))
        near = t < eps
        if np.any(near):
            p1, p2 = self._phi_raw(np.array([eps, 2.0 * eps]))
            raw = np.where(near, p1 + (p2 - p1) * (t - eps) / eps, raw)
        return raw

    def _phi_raw(self, t: np.ndarray) -> np.ndarray:
        w, g, h, m = self.warping, self.bounds.g, self.bounds.h, self.dim
        wt = np.asarray(w.eval(t))
        gt = np.asarray(g.eval(t))
        return m * (np.asarray(w.deriv1(t)) - np.asarray(h.eval(t)) * wt) / (wt * gt**2) - m / t

    def log_ratio(self, r: ArrayLike) -> np.ndarray:
        """psi(r) = ln(Lambda(r) / r^(m-1)) from the Gauss integral of phi."""
        radius = np.asarray(r, dtype=float)
        positive = radius > 0
        safe = np.where(positive, radius, 1.0)

        def integrand(x: np.ndarray) -> np.ndarray:
            return self.phi(safe[..., None] * x)

        with np.errstate(divide="ignore", invalid="ignore"):
            integral = safe * unit_gauss_integral(integrand, rel_tol=self.tolerance)
            psi = (
                np.log(safe / np.asarray(self.warping.eval(safe)))
                + integral
                - np.log(np.asarray(self.bounds.g.eval(safe)))
            )
        return np.where(positive, psi, 0.0)

    def lam(self, r: ArrayLike, exact: bool = False) -> np.ndarray:
        """Lambda(r) = r^(m-1) exp(psi(r))."""
        radius = np.asarray(r, dtype=float)
        psi = self.log_ratio(radius) if exact else self.psi_series(radius)
        return radius ** (self.dim - 1) * np.exp(psi)

    def W(self, s: ArrayLike) -> np.ndarray:
        """Comparison warping W(s) = r(s) exp(psi(r(s)) / (m-1))."""
        r = self.stretch.inverse(s)
        return r * np.exp(self.psi_series(r) / (self.dim - 1))

    def W_prime(self, s: ArrayLike) -> np.ndarray:
        """dW/ds = g(r) exp(psi/(m-1)) (1 + r psi'(r)/(m-1)), with W'(0) = 1."""
        r = np.asarray(self.stretch.inverse(s), dtype=float)
        w, g, m = self.warping, self.bounds.g, self.dim
        positive = r > 0
        safe = np.where(positive, r, 1.0)
        g_r = np.asarray(g.eval(safe))
        r_psi_prime = (
            1.0
            - safe * np.asarray(w.deriv1(safe)) / np.asarray(w.eval(safe))
            + safe * self.phi(safe)
            - safe * np.asarray(g.deriv1(safe)) / g_r
        )
        value = g_r * np.exp(self.psi_series(safe) / (m - 1)) * (1.0 + r_psi_prime / (m - 1))
        return np.where(positive, value, 1.0)

    def W_second(self, s: ArrayLike) -> np.ndarray:
        """Finite-difference second derivative of W, one-sided at the ends."""
        s = np.asarray(s, dtype=float)
        delta = 1e-5 * self.s_max
        lo = np.clip(s - delta, 0.0, self.s_max)
        hi = np.clip(s + delta, 0.0, self.s_max)
        return (self.W_prime(hi) - self.W_prime(lo)) / (hi - lo)

    def lambda_ode_residual(self, grid: ArrayLike | None = None) -> float:
        """Relative residual of d/dr(Lambda w g) = m Lambda (w' - h w)/g.

        Uses the quadrature form of Lambda and a fourth-order central difference.
        """
        R = self.radius
        if grid is None:
            grid = np.linspace(0.02 * R, 0.98 * R, 97)
        grid = np.asarray(grid, dtype=float)
        w, g, h, m = self.warping, self.bounds.g, self.bounds.h, self.dim
        step = 1e-4 * R

        def product(r: np.ndarray) -> np.ndarray:
            return self.lam(r, exact=True) * np.asarray(w.eval(r)) * np.asarray(g.eval(r))

        derivative = (
            product(grid - 2 * step)
            - 8 * product(grid - step)
            + 8 * product(grid + step)
            - product(grid + 2 * step)
        ) / (12 * step)
        rhs = (
            m
            * self.lam(grid, exact=True)
            * (np.asarray(w.deriv1(grid)) - np.asarray(h.eval(grid)) * np.asarray(w.eval(grid)))
            / np.asarray(g.eval(grid))
        )
        scale = max(float(np.max(np.abs(rhs))), 1e-300)
        return float(np.max(np.abs(derivative - rhs)) / scale)


def build_comparison_space(
    w: WarpingFunction,
    bounds: BoundingFunctions,
    m: int,
    R: float,
    tol: float = QUAD_REL_TOL,
) -> ComparisonSpace:
    """Construct C^m_{w,g,h} on the extrinsic radius R.

    Args:
        w (WarpingFunction): Curvature bound.
        bounds (BoundingFunctions): g and h with their side.
        m (int): Submanifold dimension.
        R (float): Extrinsic radius, 0 < R <= R_max of w.
        tol (float): Quadrature and interpolation tolerance.

    Returns:
        ComparisonSpace: With ``as_model`` the W-model on [0, s(R)].

    Raises:
        DomainError: If R is outside the domain of w or m < 2.
        ValidationError: If g is inadmissible or h blows up at the origin.
        NumericalError: If Lambda is not positive or not finite.
    """
    if int(m) != m or m < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {m}")
    if not 0 < R <= w.domain_max:
        raise DomainError(f"R = {R:g} outside (0, {w.domain_max:g}] for {w.label}")
    bounds.validate(R)
    eps = NEAR_ORIGIN_FRACTION * R
    h_eps = float(np.asarray(bounds.h.eval(np.array(eps))))
    if not np.isfinite(h_eps) or abs(h_eps) * eps > _H_BLOWUP_LIMIT:
        raise ValidationError(
            f"mean-convexity bound {bounds.h.label!r} is not integrable at r = 0"
        )

    stretch = build_stretching(bounds.g, R, tol)
    partial = ComparisonSpace(
        warping=w,
        bounds=bounds,
        dim=int(m),
        radius=float(R),
        stretch=stretch,
        psi_series=Chebyshev([0.0], domain=[0.0, R]),
        tolerance=tol,
    )
    grid = np.linspace(0.0, R, 257)
    phi = partial.phi(grid)
    if not np.all(np.isfinite(phi)):
        bad = grid[np.flatnonzero(~np.isfinite(phi))[0]]
        raise ValidationError(f"comparison integrand is not finite at r = {bad:.6g}")
    psi_grid = partial.log_ratio(grid)
    if not np.all(np.isfinite(psi_grid)):
        bad = grid[np.flatnonzero(~np.isfinite(psi_grid))[0]]
        raise NumericalError(f"Lambda is not positive at r = {bad:.6g}")
    psi_series, _ = resolve_chebyshev(partial.log_ratio, (0.0, R), tol)

    space = ComparisonSpace(
        warping=w,
        bounds=bounds,
        dim=int(m),
        radius=float(R),
        stretch=stretch,
        psi_series=psi_series,
        tolerance=tol,
    )
    warping = WarpingFunction(
        eval=space.W,
        deriv1=space.W_prime,
        deriv2=space.W_second,
        domain_max=stretch.s_max,
        kind=WarpingKind.COMPARISON,
        label=space.label,
    )
    warping.validate()
    object.__setattr__(space, "as_model", ModelSpace(dim=int(m), warping=warping))
    logger.debug(f"Built {space.label} on [0, {R:g}], s(R) = {stretch.s_max:.12g}")
    return space


@dataclass(frozen=True)
class Constellation:
    """Hypothesis package for an extrinsic comparison theorem.

    Attributes:
        ambient_dim (int): n.
        submanifold_dim (int): m <= n.
        warping (WarpingFunction): Ambient curvature bound w.
        bounds (BoundingFunctions): Tangency and mean-convexity bounds.
        radius (float): Extrinsic radius R.
        comparison (ComparisonSpace): C^m_{w,g,h}.
    """

    ambient_dim: int
    submanifold_dim: int
    warping: WarpingFunction
    bounds: BoundingFunctions
    radius: float
    comparison: ComparisonSpace

    def __post_init__(self) -> None:
        if not self.ambient_dim >= self.submanifold_dim >= 2:
            raise DomainError(
                f"need n >= m >= 2, got n = {self.ambient_dim}, m = {self.submanifold_dim}"
            )
        if self.comparison.dim != self.submanifold_dim or self.comparison.bounds is not self.bounds:
            raise UsageError("comparison space was not built from this constellation")

    @property
    def side(self) -> BoundSide:
        return self.bounds.side


def build_constellation(
    n: int,
    m: int,
    w: WarpingFunction,
    bounds: BoundingFunctions,
    R: float,
    tol: float = QUAD_REL_TOL,
) -> Constellation:
    return Constellation(
        ambient_dim=int(n),
        submanifold_dim=int(m),
        warping=w,
        bounds=bounds,
        radius=float(R),
        comparison=build_comparison_space(w, bounds, m, R, tol),
    )


@dataclass(frozen=True)
class BalanceReport:
    """Sampled balance condition q_W (eta_w - h) >= g/m.

    Attributes:
        balanced (bool): min margin >= 0 (within BALANCE_MARGIN_TOL).
        strictly_balanced (bool): min margin > 0.
        strict (bool): Whether strict balance was requested.
        passed (bool): ``strictly_balanced`` if strict else ``balanced``.
        min_margin (float): Minimum over the grid.
        argmin (float): s where the minimum is attained.
        min_eta_minus_h (float): Minimum of eta_w - h over the grid.
        grid (np.ndarray): The s grid.
        margins (np.ndarray): Margin per grid point.
    """

    balanced: bool
    strictly_balanced: bool
    strict: bool
    passed: bool
    min_margin: float
    argmin: float
    min_eta_minus_h: float
    grid: np.ndarray = field(repr=False)
    margins: np.ndarray = field(repr=False)

    @property
    def mean_convex(self) -> bool:
        return self.min_eta_minus_h > 0


def _default_grid(upper: float, points: int) -> np.ndarray:
    return np.geomspace(1e-4 * upper, upper, points)


def balance_check(
    cs: ComparisonSpace,
    strict: bool = False,
    grid: ArrayLike | None = None,
    points: int = BALANCE_GRID_POINTS,
) -> BalanceReport:
    """Sample the (strict) w-balance condition on a log grid of (0, s(R)]."""
    s = _default_grid(cs.s_max, points) if grid is None else np.asarray(grid, dtype=float)
    if np.any(s <= 0) or np.any(s > cs.s_max * (1 + 1e-12)):
        raise DomainError(f"balance grid must lie in (0, {cs.s_max:g}]")
    q = isoperimetric_quotient(cs.as_model, s)
    r = cs.stretch.inverse(s)
    w = cs.warping
    eta_minus_h = np.asarray(w.deriv1(r)) / np.asarray(w.eval(r)) - np.asarray(
        cs.bounds.h.eval(r)
    )
    margins = q * eta_minus_h - np.asarray(cs.bounds.g.eval(r)) / cs.dim
    i = int(np.argmin(margins))
    min_margin = float(margins[i])
    balanced = min_margin >= -BALANCE_MARGIN_TOL
    strictly = min_margin > BALANCE_MARGIN_TOL
    return BalanceReport(
        balanced=balanced,
        strictly_balanced=strictly,
        strict=strict,
        passed=strictly if strict else balanced,
        min_margin=min_margin,
        argmin=float(s[i]),
        min_eta_minus_h=float(np.min(eta_minus_h)),
        grid=s,
        margins=margins,
    )


@dataclass(frozen=True)
class LemmaReport:
    """Minimum of the bracket g^2 (f_k'' - f_k' eta_w) / g^2 per order.

    Attributes:
        min_value (float): Minimum over k = 1..K and the grid.
        per_order (Tuple[float, ...]): Minimum per k.
        argmin (float): Radius of the overall minimum.
    """

    min_value: float
    per_order: Tuple[float, ...]
    argmin: float


def lemma_paren_check(
    cs: ComparisonSpace,
    K: int,
    grid: ArrayLike | None = None,
) -> LemmaReport:
    """Evaluate f_k'' - f_k' eta_w through the first-order identity.

    With f_k = u^W_k o s the bracket equals (-k f_{k-1} - m (eta_w - h) f_k') / g^2,
    where f_k' = u^W_k'(s) / g comes from the integral representation.

    Raises:
        HypothesisViolationError: If the comparison space is not balanced.
    """
    if K < 1:
        raise UsageError(f"lemma check needs K >= 1, got {K}")
    report = balance_check(cs)
    if not report.balanced:
        raise HypothesisViolationError(
            f"{cs.label} is not balanced (min margin {report.min_margin:.3g} at s = {report.argmin:.6g})"
        )
    R = cs.radius
    r = _default_grid(R, 256) if grid is None else np.asarray(grid, dtype=float)
    if np.any(r <= 0) or np.any(r > R * (1 + 1e-12)):
        raise DomainError(f"lemma grid must lie in (0, {R:g}]")
    profiles = solve_hierarchy(cs.as_model, cs.s_max, K, cs.tolerance)
    s = np.minimum(cs.stretch.forward(r), cs.s_max)
    w, g_fn, h_fn, m = cs.warping, cs.bounds.g, cs.bounds.h, cs.dim
    g = np.asarray(g_fn.eval(r))
    eta_minus_h = np.asarray(w.deriv1(r)) / np.asarray(w.eval(r)) - np.asarray(h_fn.eval(r))
    per_order = []
    best, where = np.inf, float(r[0])
    for k in range(1, int(K) + 1):
        f_prev = profiles.value(k - 1, s)
        f_prime = profiles.exact_derivative(k, s) / g
        bracket = (-k * f_prev - m * eta_minus_h * f_prime) / g**2
        i = int(np.argmin(bracket))
        per_order.append(float(bracket[i]))
        if bracket[i] < best:
            best, where = float(bracket[i]), float(r[i])
    return LemmaReport(min_value=best, per_order=tuple(per_order), argmin=where)


@dataclass(frozen=True)
class SpectrumBound:
    """Bound side of an extrinsic comparison theorem.

    Attributes:
        spectrum (MomentSpectrum): Spectrum of B^W at ``ball_radius``.
        side (BoundSide): Constellation side.
        direction (ComparisonDirection): GE when the bound is a lower bound.
        ball_radius (float): s(R) below, R above.
    """

    spectrum: MomentSpectrum
    side: BoundSide
    direction: ComparisonDirection
    ball_radius: float


def spectrum_bound(con: Constellation, K: int, tol: float | None = None) -> SpectrumBound:
    """Spectrum of the comparison ball bounding A_hat_k(D_R).

    Raises:
        HypothesisViolationError: If the comparison space is not balanced.
    """
    cs = con.comparison
    report = balance_check(cs)
    if not report.balanced:
        raise HypothesisViolationError(
            f"{cs.label} is not balanced (min margin {report.min_margin:.3g}); bound not asserted"
        )
    if con.side is BoundSide.BELOW:
        radius, direction = cs.s_max, ComparisonDirection.GE
    else:
        radius, direction = con.radius, ComparisonDirection.LE
    spectrum = model_spectrum(cs.as_model, radius, K, tol if tol is not None else cs.tolerance)
    return SpectrumBound(spectrum=spectrum, side=con.side, direction=direction, ball_radius=radius)


@dataclass(frozen=True)
class IntrinsicVerdict:
    k: int
    value: float
    bound: float
    margin: float
    holds: bool
    near_equality: bool


@dataclass(frozen=True)
class IntrinsicComparison:
    """Per-order verdicts of an intrinsic comparison.

    Attributes:
        direction (ComparisonDirection): Asserted inequality.
        verdicts (Tuple[IntrinsicVerdict, ...]): One per k = 0..K.
        curvature_margin (float): Minimum curvature gap in the asserted direction.
    """

    direction: ComparisonDirection
    verdicts: Tuple[IntrinsicVerdict, ...]
    curvature_margin: float

    @property
    def passed(self) -> bool:
        return all(v.holds for v in self.verdicts)


def compare_intrinsic(
    N_model: ModelSpace,
    bound_model: ModelSpace,
    R: float,
    K: int,
    direction: ComparisonDirection,
    tol: float = QUAD_REL_TOL,
    equality_tol: float = 1e-9,
) -> IntrinsicComparison:
    """Check A_hat_k(B^N_R) >= (GE) or <= (LE) A_hat_k(B^bound_R) for k = 0..K.

    Radial curvatures must be ordered like the asserted direction: GE needs
    K_N >= K_bound, LE needs K_N <= K_bound on the grid.

    Raises:
        UsageError: If the dimensions differ.
        HypothesisViolationError: If the curvature grid check contradicts ``direction``.
    """
    if N_model.dim != bound_model.dim:
        raise UsageError(f"dimensions differ: {N_model.dim} vs {bound_model.dim}")
    grid = np.linspace(0.0, R, 257)[1:]
    gap = radial_curvature(N_model, grid) - radial_curvature(bound_model, grid)
    if direction is ComparisonDirection.LE:
        gap = -gap
    curvature_margin = float(np.min(gap))
    if curvature_margin < -1e-9:
        i = int(np.argmin(gap))
        raise HypothesisViolationError(
            f"radial curvature of {N_model.label} is not bounded "
            f"{'below' if direction is ComparisonDirection.GE else 'above'} by "
            f"{bound_model.label} at r = {grid[i]:.6g}"
        )
    ours = model_spectrum(N_model, R, K, tol)
    theirs = model_spectrum(bound_model, R, K, tol)
    verdicts = []
    for k, (value, bound) in enumerate(zip(ours.values, theirs.values)):
        margin = value - bound if direction is ComparisonDirection.GE else bound - value
        band = equality_tol * max(abs(bound), abs(value))
        verdicts.append(
            IntrinsicVerdict(
                k=k,
                value=value,
                bound=bound,
                margin=margin,
                holds=margin >= -band,
                near_equality=abs(margin) <= band,
            )
        )
    return IntrinsicComparison(
        direction=direction, verdicts=tuple(verdicts), curvature_margin=curvature_margin
    )
