from . import (
    constants,
    core,
    enums,
    geometry,
    mesh,
    orchestrators,
    parsing,
    stochastic,
    strategies,
    utils,
)
from .core import (
    balance_check,
    build_comparison_space,
    build_constellation,
    compare_intrinsic,
    exit_moment,
    lemma_paren_check,
    model_spectrum,
    solve_hierarchy,
    spectrum_bound,
)
from .exceptions import (
    ExitSpectraError,
    HypothesisViolationError,
    NumericalError,
    ValidationError,
)
from .factories import ReportFactory, SurfaceGeneratorFactory
from .geometry import ModelSpace, make_custom_warping, space_form_warping

# Expose commonly used classes at the package level
from .utils import Utilities, WarningManager
