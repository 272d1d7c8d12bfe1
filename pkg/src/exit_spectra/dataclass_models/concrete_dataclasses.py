from dataclasses import dataclass, field
from typing import Any, Dict, List

from exit_spectra.constants import REPORT_SCHEMA_VERSION
from exit_spectra.enums import ReportTypes
from exit_spectra.factories import ReportFactory

from .abstract_base_dataclass import AbstractBaseDataClass

SPECTRUM_COLUMNS = [
    "model_id",
    "b_or_custom",
    "m",
    "R",
    "k",
    "A_hat_k",
    "A_raw_k",
    "tol",
    "provenance",
]

DIFFUSION_COLUMNS = ["model_id", "m", "R", "r0", "k", "mc_mean", "std_err", "quad_value", "z"]


@dataclass
@ReportFactory.register_report(ReportTypes.SPECTRUM_ROW)
class SpectrumRow(AbstractBaseDataClass):
    """One row of a spectrum table.

    Attributes:
        model_id (str): Model label.
        b_or_custom (str): Curvature constant, or the custom expression.
        m (int): Dimension.
        R (float): Ball radius.
        k (int): Order.
        A_hat_k (float): Boundary-normalised moment.
        A_raw_k (float): Integrated moment A_{1,k}.
        tol (float): Solver tolerance.
        provenance (str): How the value was obtained.
    """

    model_id: str = ""
    b_or_custom: str = ""
    m: int = 2
    R: float = 0.0
    k: int = 0
    A_hat_k: float = 0.0
    A_raw_k: float = 0.0
    tol: float = 0.0
    provenance: str = ""


@dataclass
@ReportFactory.register_report(ReportTypes.DIFFUSION_ROW)
class DiffusionRow(AbstractBaseDataClass):
    """One row of a Monte-Carlo table; ``z`` is None for skipped orders."""

    model_id: str = ""
    m: int = 2
    R: float = 0.0
    r0: float = 0.0
    k: int = 0
    mc_mean: float = 0.0
    std_err: float = 0.0
    quad_value: float = 0.0
    z: float | None = None


@dataclass
@ReportFactory.register_report(ReportTypes.COMPARISON_REPORT)
class ComparisonReport(AbstractBaseDataClass):
    """JSON report of ``compare-space`` and ``balance`` runs.

    Attributes:
        schema_version (str): Report schema version.
        command (str): Sub-command that produced the report.
        inputs (Dict[str, Any]): w, g, h identifiers, m, R, side.
        s_R (float): Stretched radius.
        balance (Dict[str, Any]): Minimum margin, its location and flags.
        lemma_min (float | None): Minimum of the lemma bracket, if computed.
        lemma_per_order (List[float]): Minimum per order.
        bound_spectra (List[Dict[str, Any]]): Bound spectrum rows.
        verdicts (Dict[str, Any]): Outcome summary.
        warnings (List[str]): Recorded warnings.
    """

    schema_version: str = REPORT_SCHEMA_VERSION
    command: str = ""
    inputs: Dict[str, Any] = field(default_factory=dict)
    s_R: float = 0.0
    balance: Dict[str, Any] = field(default_factory=dict)
    lemma_min: float | None = None
    lemma_per_order: List[float] = field(default_factory=list)
    bound_spectra: List[Dict[str, Any]] = field(default_factory=list)
    verdicts: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)


@dataclass
@ReportFactory.register_report(ReportTypes.INTRINSIC_REPORT)
class IntrinsicReport(AbstractBaseDataClass):
    """JSON report of an intrinsic comparison."""

    schema_version: str = REPORT_SCHEMA_VERSION
    inputs: Dict[str, Any] = field(default_factory=dict)
    direction: str = ""
    curvature_margin: float = 0.0
    verdicts: List[Dict[str, Any]] = field(default_factory=list)
    passed: bool = False


@dataclass
@ReportFactory.register_report(ReportTypes.MESH_REPORT)
class MeshReport(AbstractBaseDataClass):
    """JSON report of a mesh verification, one entry in ``results`` per radius.

    Attributes:
        schema_version (str): Report schema version.
        inputs (Dict[str, Any]): Mesh source, pole, K, bounds.
        mesh_quality (Dict[str, Any]): Vertex and face counts, edge lengths.
        mesh_tol (float): Relative tolerance of the verdicts.
        results (List[Dict[str, Any]]): Spectra, bounds, verdicts, diagnostics.
        passed (bool): Whether every verdict holds.
        warnings (List[str]): Recorded warnings.
    """

    schema_version: str = REPORT_SCHEMA_VERSION
    inputs: Dict[str, Any] = field(default_factory=dict)
    mesh_quality: Dict[str, Any] = field(default_factory=dict)
    mesh_tol: float = 0.0
    results: List[Dict[str, Any]] = field(default_factory=list)
    passed: bool = False
    warnings: List[str] = field(default_factory=list)


@dataclass
@ReportFactory.register_report(ReportTypes.SUITE_REPORT)
class SuiteReport(AbstractBaseDataClass):
    """JSON report of the acceptance suite."""

    schema_version: str = REPORT_SCHEMA_VERSION
    quick: bool = False
    criteria: List[Dict[str, Any]] = field(default_factory=list)
    passed: bool = False
