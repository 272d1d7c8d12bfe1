from enum import Enum


class ReportTypes(Enum):
    """Enum for the report record dataclasses.

    Attributes:
        SPECTRUM_ROW (str): One row of a spectrum CSV table.
        DIFFUSION_ROW (str): One row of a Monte-Carlo CSV table.
        COMPARISON_REPORT (str): JSON report of a comparison space run.
        INTRINSIC_REPORT (str): JSON report of an intrinsic comparison.
        MESH_REPORT (str): JSON report of a mesh verification.
        SUITE_REPORT (str): JSON report of the acceptance suite.
    """

    SPECTRUM_ROW = "spectrum_row"
    DIFFUSION_ROW = "diffusion_row"
    COMPARISON_REPORT = "comparison_report"
    INTRINSIC_REPORT = "intrinsic_report"
    MESH_REPORT = "mesh_report"
    SUITE_REPORT = "suite_report"


class SurfaceTypes(Enum):
    """Enum for the built-in parametric surface generators.

    Attributes:
        DISK (str): Flat disk in the z = 0 plane.
        SPHERE_CAP (str): Cap of a round sphere, pole at its centre.
        CATENOID (str): Catenoid, pole on the neck circle.
        HELICOID (str): Helicoid, pole on the axis.
    """

    DISK = "disk"
    SPHERE_CAP = "sphere_cap"
    CATENOID = "catenoid"
    HELICOID = "helicoid"
