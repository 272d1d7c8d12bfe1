from __future__ import annotations

from typing import TYPE_CHECKING, Any, Dict, List, Sequence

import numpy as np

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.core.comparison import BoundingFunctions, build_constellation
from exit_spectra.enums import ReportTypes
from exit_spectra.mesh.mesh_verifier import (
    MeshBallResult,
    calibrate_mesh_tolerance,
    verify_extrinsic_ball,
)

if TYPE_CHECKING:
    from exit_spectra.dataclass_models import MeshReport
    from exit_spectra.factories import ReportFactory
    from exit_spectra.geometry import WarpingFunction
    from exit_spectra.mesh import SurfaceMesh
    from exit_spectra.utils import WarningManager


class MeshVerificationOrchestrator:
    """Runs the extrinsic comparison on one surface mesh for a list of radii.

    For every radius a constellation is built from the ambient bound ``w`` and
    ``bounds``; the mesh spectrum of D_R is compared with the bound spectrum
    and the hypothesis diagnostics are collected into a :class:`MeshReport`.

    Attributes:
        mesh (SurfaceMesh): The surface with its pole.
        warping (WarpingFunction): Ambient curvature bound.
        bounds (BoundingFunctions): Tangency and mean-convexity bounds.
        radii (List[float]): Extrinsic radii to verify.
        K (int): Highest order compared.
        mesh_tol (float | None): Fixed verdict tolerance; calibrated per radius when None.
        ambient_dim (int): n.
        tol (float): Quadrature tolerance of the bound spectra.
        warning_manager (WarningManager): Collects non-fatal warnings.
        report_factory (ReportFactory): Builds the report dataclass.
        results (List[MeshBallResult]): Per-radius results after :meth:`run_orchestrator`.
    """

    def __init__(
        self,
        *,
        mesh: SurfaceMesh,
        warping: WarpingFunction,
        bounds: BoundingFunctions,
        radii: Sequence[float],
        K: int,
        warning_manager: WarningManager,
        report_factory: ReportFactory,
        mesh_tol: float | None = None,
        ambient_dim: int = 3,
        tol: float = 1e-10,
    ) -> None:
        self.logger = configure_logging(
            module_name=__name__,
            log_file_name="mesh_orchestrator",
            log_level=DEBUG,
        )
        self.mesh = mesh
        self.warping = warping
        self.bounds = bounds
        self.radii: List[float] = [float(r) for r in radii]
        self.K = int(K)
        self.mesh_tol = mesh_tol
        self.ambient_dim = int(ambient_dim)
        self.tol = tol
        self.warning_manager = warning_manager
        self.report_factory = report_factory
        self.results: List[MeshBallResult] = []

    def run_orchestrator(self) -> MeshReport:
        """Verify every radius and assemble the report."""
        entries: List[Dict[str, Any]] = []
        tolerances: List[float] = []
        for R in self.radii:
            mesh_tol = self.mesh_tol
            if mesh_tol is None:
                mesh_tol = calibrate_mesh_tolerance(self.mesh.edge_length, R, K=max(self.K, 1))
            tolerances.append(mesh_tol)
            constellation = build_constellation(
                self.ambient_dim, 2, self.warping, self.bounds, R, self.tol
            )
            result = verify_extrinsic_ball(
                self.mesh,
                constellation,
                self.K,
                mesh_tol,
                tol=self.tol,
                warning_manager=self.warning_manager,
            )
            self.results.append(result)
            entries.append(self._result_entry(result, mesh_tol))
            self.logger.info(
                f"{self.mesh.name}, R = {R:g}: {'PASS' if result.passed else 'FAIL'} "
                f"(mesh_tol {mesh_tol:.3g})"
            )
        return self.report_factory.get_report(
            ReportTypes.MESH_REPORT,
            inputs={
                "mesh": self.mesh.name,
                "pole_vertex": self.mesh.pole_vertex,
                "pole": self.mesh.pole.tolist(),
                "w": self.warping.label,
                "g": self.bounds.g.label,
                "h": self.bounds.h.label,
                "side": self.bounds.side,
                "n": self.ambient_dim,
                "K": self.K,
                "radii": self.radii,
            },
            mesh_quality=self.mesh.quality(),
            mesh_tol=max(tolerances) if tolerances else 0.0,
            results=entries,
            passed=all(r.passed for r in self.results),
            warnings=[f"[{w.category}] {w.message}" for w in self.warning_manager.warnings],
        )

    @staticmethod
    def _result_entry(result: MeshBallResult, mesh_tol: float) -> Dict[str, Any]:
        ball, fields, suggestion = result.ball, result.fields, result.suggestion
        return {
            "R": ball.radius,
            "mesh_tol": mesh_tol,
            "nodes": int(len(ball.vertices)),
            "faces": int(len(ball.faces)),
            "boundary_length": ball.boundary_length,
            "boundary_loops": len(ball.boundary_loops),
            "euler_characteristic": ball.euler_characteristic,
            "negative_weights": result.hierarchy.negative_weights,
            "spectrum": list(result.spectrum.values),
            "raw_spectrum": list(result.spectrum.raw_values),
            "bound": list(result.bound.spectrum.values),
            "bound_ball_radius": result.bound.ball_radius,
            "direction": result.bound.direction,
            "verdicts": [
                {
                    "k": v.k,
                    "value": v.value,
                    "bound": v.bound,
                    "relative_margin": v.relative_margin,
                    "holds": v.holds,
                    "near_equality": v.near_equality,
                }
                for v in result.verdicts
            ],
            "passed": result.passed,
            "diagnostics": {
                "min_T": fields.min_T,
                "max_abs_C": fields.max_abs_C,
                "C_range": list(fields.C_range),
                "h_lower": suggestion.h_lower,
                "h_upper": suggestion.h_upper,
                "bin_edges": suggestion.bin_edges.tolist(),
                "tangency_envelope": [
                    None if np.isnan(t) else float(t) for t in suggestion.tangency_envelope
                ],
            },
            "transplant": [
                {"k": t.k, "extreme": t.extreme, "scale": t.scale, "holds": t.holds}
                for t in result.transplant
            ],
            "divergence_residuals": [d.residual for d in result.divergence],
        }
