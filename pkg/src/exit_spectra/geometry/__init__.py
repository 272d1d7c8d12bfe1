from .radial_functions import RadialFunction, constant_function
from .warp_models import (
    ModelSpace,
    WarpingFunction,
    ball_volume,
    eta,
    isoperimetric_quotient,
    make_custom_warping,
    normalized_volume_integral,
    radial_curvature,
    space_form_warping,
    sphere_volume,
    unit_sphere_area,
)
