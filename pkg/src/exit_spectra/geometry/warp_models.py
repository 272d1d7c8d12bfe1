"""Warping functions and the radial geometry of rotationally symmetric models.

A w-model of dimension m is the warped product of a radial interval with the
unit (m-1)-sphere scaled by w(r). Everything here is a pure function of an
immutable :class:`ModelSpace`, so evaluation is safe from any thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import gamma

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.constants import NEAR_ORIGIN_FRACTION, QUAD_REL_TOL
from exit_spectra.enums import WarpingKind
from exit_spectra.exceptions import DomainError, ValidationError
from exit_spectra.geometry.radial_functions import RadialCallable
from exit_spectra.utils.quadrature import adaptive_quad, unit_gauss_integral

logger = configure_logging(__name__, "warp_models", DEBUG)

# Grids for invariant checks stop here when the domain is unbounded.
_UNBOUNDED_CHECK_RADIUS = 10.0


@dataclass(frozen=True)
class WarpingFunction:
    """Radial profile w of a w-model space with analytic derivatives.

    Attributes:
        eval (RadialCallable): r -> w(r).
        deriv1 (RadialCallable): r -> w'(r).
        deriv2 (RadialCallable): r -> w''(r).
        domain_max (float): Largest admissible radius R_max (may be ``inf``).
        kind (WarpingKind): Space form, custom triple or comparison warping.
        curvature (float | None): The constant b for space forms, else None.
        label (str): Identifier written to reports, e.g. ``"Q_-1"``.
    """

    eval: RadialCallable
    deriv1: RadialCallable
    deriv2: RadialCallable
    domain_max: float
    kind: WarpingKind = WarpingKind.CUSTOM
    curvature: float | None = None
    label: str = field(default="")

    def __post_init__(self) -> None:
        if not self.domain_max > 0:
            raise DomainError(f"domain_max must be positive, got {self.domain_max}")

    def __call__(self, r: ArrayLike) -> np.ndarray:
        return self.eval(r)

    @property
    def check_radius(self) -> float:
        """Upper end of the grids used by invariant checks."""
        return min(self.domain_max, _UNBOUNDED_CHECK_RADIUS)

    def validate(self, atol: float = 1e-9) -> None:
        """Check w(0) = 0, w'(0) = 1 and w > 0 on a grid of (0, R_max].

        Raises:
            ValidationError: Naming the first violated condition.
        """
        w0 = float(self.eval(np.array(0.0)))
        dw0 = float(self.deriv1(np.array(0.0)))
        if abs(w0) > atol:
            raise ValidationError(f"warping {self.label!r}: w(0) = {w0:.6g}, expected 0")
        if abs(dw0 - 1.0) > atol:
            raise ValidationError(f"warping {self.label!r}: w'(0) = {dw0:.6g}, expected 1")
        grid = np.linspace(0.0, self.check_radius, 513)[1:]
        values = np.asarray(self.eval(grid))
        bad = np.flatnonzero(~(values > 0))
        if bad.size:
            raise ValidationError(
                f"warping {self.label!r} is not positive at r = {grid[bad[0]]:.6g}"
            )

    def derivative_consistency(self, grid: ArrayLike | None = None) -> float:
        """Largest relative mismatch between the supplied and finite-difference derivatives.

        Centered differences of ``eval`` are compared with ``deriv1`` and
        centered differences of ``deriv1`` with ``deriv2``. Each mismatch is
        scaled by the largest magnitude of the derivative on the grid.
        """
        upper = self.check_radius
        if grid is None:
            grid = np.linspace(0.05 * upper, 0.95 * upper, 64)
        grid = np.asarray(grid, dtype=float)
        step = 1e-5 * max(upper, 1e-3)
        fd1 = (self.eval(grid + step) - self.eval(grid - step)) / (2.0 * step)
        fd2 = (self.deriv1(grid + step) - self.deriv1(grid - step)) / (2.0 * step)
        d1 = np.asarray(self.deriv1(grid))
        d2 = np.asarray(self.deriv2(grid))
        err1 = np.max(np.abs(fd1 - d1)) / max(float(np.max(np.abs(d1))), 1.0)
        err2 = np.max(np.abs(fd2 - d2)) / max(float(np.max(np.abs(d2))), 1.0)
        return float(max(err1, err2))


@dataclass(frozen=True)
class ModelSpace:
    """A w-model M^m_w: dimension plus warping function.

    Attributes:
        dim (int): Dimension m >= 2.
        warping (WarpingFunction): Radial profile of the metric.
    """

    dim: int
    warping: WarpingFunction

    def __post_init__(self) -> None:
        if int(self.dim) != self.dim or self.dim < 2:
            raise DomainError(f"model dimension must be an integer >= 2, got {self.dim}")

    @property
    def label(self) -> str:
        return f"{self.warping.label}[m={self.dim}]"

    @property
    def domain_max(self) -> float:
        return self.warping.domain_max

    def same_as(self, other: ModelSpace) -> bool:
        """Models agree when dimension and warping identifier coincide."""
        return self.dim == other.dim and (
            self.warping is other.warping or self.warping.label == other.warping.label
        )


def space_form_warping(b: float, domain_max: float | None = None) -> WarpingFunction:
    """Warping function Q_b of the space form of constant curvature b.

    Args:
        b (float): Curvature constant.
        domain_max (float | None): Requested R_max. Defaults to infinity for
            b <= 0 and to 0.999 * pi / sqrt(b) for b > 0.

    Returns:
        WarpingFunction: ``sin(sqrt(b) r)/sqrt(b)``, ``r`` or
        ``sinh(sqrt(-b) r)/sqrt(-b)`` with exact derivatives.

    Raises:
        DomainError: If b > 0 and ``domain_max >= pi / sqrt(b)``.
    """
    b = float(b)
    label = f"Q_{b:g}"
    if b > 0:
        k = math.sqrt(b)
        limit = math.pi / k
        if domain_max is None:
            domain_max = 0.999 * limit
        elif domain_max >= limit:
            raise DomainError(
                f"R_max = {domain_max:g} reaches the conjugate radius pi/sqrt(b) = {limit:g}"
            )
        return WarpingFunction(
            eval=lambda r: np.sin(k * np.asarray(r, dtype=float)) / k,
            deriv1=lambda r: np.cos(k * np.asarray(r, dtype=float)),
            deriv2=lambda r: -k * np.sin(k * np.asarray(r, dtype=float)),
            domain_max=float(domain_max),
            kind=WarpingKind.SPACE_FORM,
            curvature=b,
            label=label,
        )
    if domain_max is None:
        domain_max = math.inf
    if b == 0:
        return WarpingFunction(
            eval=lambda r: np.asarray(r, dtype=float) * 1.0,
            deriv1=lambda r: np.ones(np.shape(r)),
            deriv2=lambda r: np.zeros(np.shape(r)),
            domain_max=float(domain_max),
            kind=WarpingKind.SPACE_FORM,
            curvature=0.0,
            label=label,
        )
    k = math.sqrt(-b)
    return WarpingFunction(
        eval=lambda r: np.sinh(k * np.asarray(r, dtype=float)) / k,
        deriv1=lambda r: np.cosh(k * np.asarray(r, dtype=float)),
        deriv2=lambda r: k * np.sinh(k * np.asarray(r, dtype=float)),
        domain_max=float(domain_max),
        kind=WarpingKind.SPACE_FORM,
        curvature=b,
        label=label,
    )


def make_custom_warping(
    w: RadialCallable,
    dw: RadialCallable,
    d2w: RadialCallable,
    domain_max: float,
    label: str = "custom",
    rel_tol: float = 1e-6,
) -> WarpingFunction:
    """Build and validate a user supplied warping triple (w, w', w'').

    Raises:
        ValidationError: If w(0) != 0, w'(0) != 1, w is not positive on
            (0, R_max], or the derivatives disagree with finite differences of
            ``w`` beyond ``rel_tol``.
    """
    warping = WarpingFunction(
        eval=w,
        deriv1=dw,
        deriv2=d2w,
        domain_max=float(domain_max),
        kind=WarpingKind.CUSTOM,
        label=label,
    )
    warping.validate()
    mismatch = warping.derivative_consistency()
    if mismatch > rel_tol:
        raise ValidationError(
            f"derivatives of warping {label!r} disagree with finite differences "
            f"(relative mismatch {mismatch:.3g} > {rel_tol:g})"
        )
    logger.debug(f"Validated custom warping {label!r} on [0, {domain_max:g}]")
    return warping


def _check_radius(ms: ModelSpace, r: ArrayLike, allow_zero: bool) -> np.ndarray:
    radius = np.asarray(r, dtype=float)
    upper = ms.domain_max * (1.0 + 1e-12)
    low_bad = radius < 0 if allow_zero else radius <= 0
    bad = low_bad | (radius > upper) | ~np.isfinite(radius)
    if np.any(bad):
        offender = float(np.ravel(radius)[np.flatnonzero(np.ravel(bad))[0]])
        bound = "[0" if allow_zero else "(0"
        raise DomainError(
            f"radius {offender:g} outside {bound}, {ms.domain_max:g}] for model {ms.label}"
        )
    return radius


def radial_curvature(ms: ModelSpace, r: ArrayLike) -> np.ndarray:
    """Radial sectional curvature K_w(r) = -w''(r)/w(r) for 0 < r <= R_max."""
    radius = _check_radius(ms, r, allow_zero=False)
    w = ms.warping
    return -np.asarray(w.deriv2(radius)) / np.asarray(w.eval(radius))


def eta(ms: ModelSpace, r: ArrayLike) -> np.ndarray:
    """Mean curvature w'(r)/w(r) of the distance sphere of radius r."""
    radius = _check_radius(ms, r, allow_zero=False)
    w = ms.warping
    return np.asarray(w.deriv1(radius)) / np.asarray(w.eval(radius))


def unit_sphere_area(n: int) -> float:
    """Area of the unit n-sphere, 2 pi^((n+1)/2) / Gamma((n+1)/2)."""
    return float(2.0 * math.pi ** ((n + 1) / 2.0) / gamma((n + 1) / 2.0))


def sphere_volume(ms: ModelSpace, r: ArrayLike) -> np.ndarray:
    """Volume of the distance sphere, omega_{m-1} w(r)^(m-1)."""
    radius = _check_radius(ms, r, allow_zero=True)
    return unit_sphere_area(ms.dim - 1) * np.asarray(ms.warping.eval(radius)) ** (
        ms.dim - 1
    )


def ball_volume(ms: ModelSpace, r: ArrayLike, rel_tol: float = QUAD_REL_TOL) -> np.ndarray:
    """Volume of the geodesic ball, omega_{m-1} int_0^r w(t)^(m-1) dt.

    Uses adaptive Gauss-Kronrod quadrature with break points near 0, where
    the integrand vanishes to order m-1.
    """
    radius = _check_radius(ms, r, allow_zero=True)
    w = ms.warping
    power = ms.dim - 1

    def integrand(t: float) -> float:
        return float(w.eval(np.array(t))) ** power

    def one(upper: float) -> float:
        if upper == 0.0:
            return 0.0
        return adaptive_quad(
            integrand, 0.0, upper, rel_tol=rel_tol, points=(1e-2 * upper, 1e-1 * upper)
        )

    values = np.vectorize(one, otypes=[float])(radius)
    return unit_sphere_area(power) * values


def normalized_volume_integral(
    ms: ModelSpace,
    r: ArrayLike,
    f: Callable[[np.ndarray], np.ndarray] | None = None,
    radius_scale: float | None = None,
    rel_tol: float = QUAD_REL_TOL,
) -> np.ndarray:
    """Evaluate int_0^r w(t)^(m-1) f(t) dt / w(r)^(m-1) for an array of radii.

    The integral is rewritten as ``r * int_0^1 (w(r x)/w(r))^(m-1) f(r x) dx``
    so it stays relatively accurate as r -> 0. Below
    ``NEAR_ORIGIN_FRACTION * radius_scale`` the series limit ``r f(0) / m`` is
    returned.

    Args:
        ms: Model space supplying w and m.
        r: Radii, any shape.
        f: Vectorised weight; defaults to 1.
        radius_scale: Length setting the near-origin threshold (defaults to max r).
        rel_tol: Agreement required between the two Gauss rules.

    Returns:
        np.ndarray: Values with the shape of ``r``.
    """
    radius = np.asarray(r, dtype=float)
    flat = radius.ravel()
    scale = float(np.max(flat)) if radius_scale is None and flat.size else radius_scale
    threshold = NEAR_ORIGIN_FRACTION * (scale or 0.0)
    power = ms.dim - 1
    w = ms.warping
    small = flat <= threshold
    out = np.empty_like(flat)
    if np.any(small):
        f0 = 1.0 if f is None else float(np.asarray(f(np.array(0.0))))
        out[small] = flat[small] * f0 / ms.dim
    big = flat[~small]
    if big.size:
        w_r = np.asarray(w.eval(big))[:, None]

        def integrand(x: np.ndarray) -> np.ndarray:
            t = big[:, None] * x[None, :]
            ratio = (np.asarray(w.eval(t)) / w_r) ** power
            if f is not None:
                ratio = ratio * np.asarray(f(t))
            return ratio

        out[~small] = big * unit_gauss_integral(integrand, rel_tol=rel_tol)
    return out.reshape(radius.shape)


def isoperimetric_quotient(ms: ModelSpace, r: ArrayLike) -> np.ndarray:
    """Isoperimetric quotient q_w(r) = ball_volume / sphere_volume for 0 < r <= R_max."""
    radius = _check_radius(ms, r, allow_zero=False)
    return normalized_volume_integral(ms, radius)
