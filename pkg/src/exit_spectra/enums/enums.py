from enum import Enum


class WarpingKind(Enum):
    """Origin of a warping function.

    Attributes:
        SPACE_FORM (str): Constant curvature profile Q_b.
        CUSTOM (str): User supplied analytic triple (w, w', w'').
        COMPARISON (str): Warping W(s) of an isoperimetric comparison space.
    """

    SPACE_FORM = "space_form"
    CUSTOM = "custom"
    COMPARISON = "comparison"


class Provenance(Enum):
    """How a moment spectrum was obtained.

    Attributes:
        QUADRATURE (str): Volume integral of the radial profiles.
        BOUNDARY_DERIVATIVE (str): Boundary flux of the next profile.
        MESH (str): Finite element hierarchy on a triangulated extrinsic ball.
        MONTE_CARLO (str): Sample moments of simulated exit times.
    """

    QUADRATURE = "quadrature"
    BOUNDARY_DERIVATIVE = "boundary_derivative"
    MESH = "mesh"
    MONTE_CARLO = "monte_carlo"


class BoundSide(Enum):
    """Side of a comparison constellation.

    Attributes:
        BELOW (str): Lower bound on the spectrum, general tangency bound g.
        ABOVE (str): Upper bound on the spectrum, g forced to 1.
    """

    BELOW = "below"
    ABOVE = "above"


class ComparisonDirection(Enum):
    """Asserted inequality between a spectrum and its bound.

    Attributes:
        GE (str): Spectrum bounded from below by the model (curvature bounded below).
        LE (str): Spectrum bounded from above by the model (curvature bounded above).
    """

    GE = "ge"
    LE = "le"


class MeshFormat(Enum):
    """Supported mesh file formats."""

    OFF = "off"
    OBJ = "obj"


class Command(Enum):
    """Sub-commands of the command line front end."""

    SPECTRUM = "spectrum"
    COMPARE_SPACE = "compare-space"
    BALANCE = "balance"
    INTRINSIC = "intrinsic"
    SIMULATE = "simulate"
    MESH_VERIFY = "mesh-verify"
    SUITE = "suite"
