from .diffusion_oracle import (
    DiffusionConfig,
    MomentEstimate,
    RefinementCheck,
    ZScore,
    compare_to_quadrature,
    sample_exit_moments,
    simulate_exit_times,
    time_step_refinement,
)
