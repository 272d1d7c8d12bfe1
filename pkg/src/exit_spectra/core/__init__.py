from .spectrum import (
    DivergenceCheck,
    MomentSpectrum,
    RadialProfileSet,
    exit_moment,
    model_spectrum,
    raw_moment,
    solve_hierarchy,
    torsional_rigidity,
    verify_divergence_identity,
    verify_ode_residual,
)
from .comparison import (
    BalanceReport,
    BoundingFunctions,
    ComparisonSpace,
    Constellation,
    IntrinsicComparison,
    IntrinsicVerdict,
    LemmaReport,
    SpectrumBound,
    StretchingMap,
    balance_check,
    build_comparison_space,
    build_constellation,
    build_stretching,
    compare_intrinsic,
    lemma_paren_check,
    make_bounding_functions,
    spectrum_bound,
)
