"""Quadrature and Chebyshev helpers shared by the radial solvers.

Two rules are used throughout:

* :func:`adaptive_quad` wraps QUADPACK's adaptive Gauss-Kronrod rule and turns
  non-convergence into a :class:`~exit_spectra.exceptions.QuadratureError`
  carrying the worst subinterval.
* :func:`unit_gauss_integral` integrates a vectorised integrand over [0, 1]
  with a fixed Gauss-Legendre rule, checked against a rule of twice the order.
  Radial integrals are written as ``r * int_0^1 F(r x) dx`` so they stay
  relatively accurate as ``r -> 0``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence, Tuple

import numpy as np
from numpy.polynomial import Chebyshev
from scipy import integrate

from exit_spectra.constants import (
    CHEBYSHEV_DEGREES,
    GAUSS_POINTS,
    QUAD_ABS_FLOOR,
    QUAD_REL_TOL,
)
from exit_spectra.exceptions import QuadratureError


@lru_cache(maxsize=None)
def unit_gauss_rule(n: int = GAUSS_POINTS) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def unit_gauss_integral(
    integrand: Callable[[np.ndarray], np.ndarray],
    rel_tol: float = QUAD_REL_TOL,
    n: int = GAUSS_POINTS,
) -> np.ndarray:
    """Integrate ``integrand`` over x in [0, 1] for a batch of problems.

    The integrand receives the nodes with shape ``(n,)`` and must return an
    array of shape ``(..., n)``; the last axis is reduced.

    Args:
        integrand: Vectorised integrand.
        rel_tol: Agreement required between the n- and 2n-point rules.
        n: Base number of Gauss points.

    Returns:
        np.ndarray: Integral values with the leading shape of the integrand.

    Raises:
        QuadratureError: If the two rules disagree beyond ``rel_tol``.
    """
    x, w = unit_gauss_rule(n)
    coarse = np.asarray(integrand(x)) @ w
    x2, w2 = unit_gauss_rule(2 * n)
    fine = np.asarray(integrand(x2)) @ w2
    err = np.abs(fine - coarse)
    scale = np.maximum(np.abs(fine), QUAD_ABS_FLOOR)
    if np.any(err > 10.0 * rel_tol * scale + QUAD_ABS_FLOOR):
        worst = float(np.max(err))
        raise QuadratureError(
            f"Gauss-Legendre rules of order {n} and {2 * n} disagree",
            worst_interval=(0.0, 1.0),
            error_estimate=worst,
        )
    return fine


def adaptive_quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = QUAD_REL_TOL,
    abs_tol: float = QUAD_ABS_FLOOR,
    points: Sequence[float] | None = None,
    limit: int = 200,
) -> float:
    """Adaptive Gauss-Kronrod quadrature of a scalar function on [a, b].

    Args:
        func: Scalar integrand.
        a: Lower limit.
        b: Upper limit.
        rel_tol: Relative target.
        abs_tol: Absolute floor.
        points: Optional break points, e.g. a subdivision near a vanishing end.
        limit: Maximum number of subintervals.

    Returns:
        float: The integral.

    Raises:
        QuadratureError: If QUADPACK reports non-convergence.
    """
    if a == b:
        return 0.0
    value, abserr, infodict, *rest = integrate.quad(
        func,
        a,
        b,
        epsabs=abs_tol,
        epsrel=rel_tol,
        limit=limit,
        points=points,
        full_output=1,
    )
    # A fourth element (message) is only returned on failure.
    if rest:
        last = infodict.get("last", 0)
        if last:
            elist = np.asarray(infodict["elist"][:last])
            i = int(np.argmax(elist))
            worst = (float(infodict["alist"][i]), float(infodict["blist"][i]))
            err = float(elist[i])
        else:
            worst, err = (a, b), float(abserr)
        tolerance = max(abs_tol, rel_tol * abs(value))
        if abserr > 10.0 * tolerance:
            raise QuadratureError(str(rest[0]).splitlines()[0], worst, err)
    return float(value)


def resolve_chebyshev(
    func: Callable[[np.ndarray], np.ndarray],
    domain: Tuple[float, float],
    rel_tol: float,
    degrees: Sequence[int] = CHEBYSHEV_DEGREES,
) -> Tuple[Chebyshev, float]:
    """Interpolate ``func`` on ``domain`` with the smallest adequate Chebyshev degree.

    A degree is accepted when the last four coefficients are below
    ``rel_tol`` times the largest one.

    Args:
        func: Vectorised function on the domain.
        domain: Interval ``(a, b)``.
        rel_tol: Relative size of the coefficient tail to accept.
        degrees: Degrees to try in increasing order.

    Returns:
        Tuple[Chebyshev, float]: The interpolant and its tail estimate.

    Raises:
        QuadratureError: If no degree resolves the function. The worst
            interval is the region where the two largest interpolants differ most.
    """
    previous = None
    for degree in degrees:
        series = Chebyshev.interpolate(func, degree, domain=list(domain))
        coef = np.abs(series.coef)
        scale = max(float(np.max(coef)), QUAD_ABS_FLOOR)
        tail = float(np.max(coef[-4:]))
        if tail <= rel_tol * scale or tail <= QUAD_ABS_FLOOR:
            return series, tail
        previous, last = series, previous
    grid = np.linspace(domain[0], domain[1], 257)
    diff = np.abs(previous(grid) - last(grid)) if last is not None else np.zeros_like(grid)
    i = int(np.argmax(diff))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    raise QuadratureError(
        f"Chebyshev interpolation did not resolve the profile up to degree {degrees[-1]}",
        worst_interval=(float(lo), float(hi)),
        error_estimate=tail,
    )
