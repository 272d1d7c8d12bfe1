from .quadrature import adaptive_quad, resolve_chebyshev, unit_gauss_integral, unit_gauss_rule
from .utilities import CSV_FLOAT_FORMAT, Utilities, resolve_worker_count, rows_to_records
from .warning_manager import CustomWarning, WarningManager
