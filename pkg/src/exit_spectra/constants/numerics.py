"""Numerical defaults shared by the solvers and the command line."""

# Quadrature targets for the adaptive Gauss-Kronrod rules.
QUAD_REL_TOL: float = 1e-10
QUAD_ABS_FLOOR: float = 1e-14

# Fixed Gauss-Legendre order for the scaled [0, 1] radial integrals.
GAUSS_POINTS: int = 64

# Chebyshev degrees tried, in order, when resolving a radial profile.
CHEBYSHEV_DEGREES: tuple = (16, 32, 64, 128, 256, 512)

# Below NEAR_ORIGIN_FRACTION * R removable 0/0 quotients use their series limit.
NEAR_ORIGIN_FRACTION: float = 1e-6

DEFAULT_MAX_ORDER: int = 10
BALANCE_GRID_POINTS: int = 512
DEFAULT_SEED: int = 12345

REPORT_SCHEMA_VERSION: str = "1"
THREADS_ENV_VAR: str = "EXITSPEC_THREADS"
