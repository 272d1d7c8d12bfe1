from .dir_paths import (
    LOG_DIR_PATH,
    OUTPUT_FILES_DIR_PATH,
    RELEASE_MODE,
    get_package_data_dir,
)
from .numerics import (
    BALANCE_GRID_POINTS,
    CHEBYSHEV_DEGREES,
    DEFAULT_MAX_ORDER,
    DEFAULT_SEED,
    GAUSS_POINTS,
    NEAR_ORIGIN_FRACTION,
    QUAD_ABS_FLOOR,
    QUAD_REL_TOL,
    REPORT_SCHEMA_VERSION,
    THREADS_ENV_VAR,
)
