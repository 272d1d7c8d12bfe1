from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike

RadialCallable = Callable[[ArrayLike], np.ndarray]


@dataclass(frozen=True)
class RadialFunction:
    """A smooth function of the radial variable with its first two derivatives.

    All three callables must accept numpy arrays and broadcast elementwise.

    Attributes:
        eval (RadialCallable): r -> f(r).
        deriv1 (RadialCallable): r -> f'(r).
        deriv2 (RadialCallable): r -> f''(r).
        label (str): Identifier used in reports, e.g. the source expression.
    """

    eval: RadialCallable
    deriv1: RadialCallable
    deriv2: RadialCallable
    label: str = ""

    def __call__(self, r: ArrayLike) -> np.ndarray:
        return self.eval(r)

    def is_constant(self, value: float, upper: float, atol: float = 1e-14) -> bool:
        """Check on a grid of [0, upper] whether the function equals ``value``."""
        grid = np.linspace(0.0, upper, 257)
        return bool(np.all(np.abs(np.asarray(self.eval(grid)) - value) <= atol))


def constant_function(value: float, label: str | None = None) -> RadialFunction:
    """Return the constant radial function r -> value."""

    def _value(r: ArrayLike) -> np.ndarray:
        return np.full(np.shape(r), float(value))

    def _zero(r: ArrayLike) -> np.ndarray:
        return np.zeros(np.shape(r))

    return RadialFunction(
        eval=_value,
        deriv1=_zero,
        deriv2=_zero,
        label=label if label is not None else repr(float(value)),
    )
