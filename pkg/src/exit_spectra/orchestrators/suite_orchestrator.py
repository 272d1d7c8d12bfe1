"""Acceptance suite: closed-form oracles, cross-method agreement and inequality checks."""

from __future__ import annotations

import math
import time
from typing import TYPE_CHECKING, Any, Callable, Dict, List, Tuple

import numpy as np

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.core.comparison import (
    balance_check,
    build_comparison_space,
    build_constellation,
    compare_intrinsic,
    lemma_paren_check,
    make_bounding_functions,
    spectrum_bound,
)
from exit_spectra.core.spectrum import (
    exit_moment,
    model_spectrum,
    solve_hierarchy,
    verify_divergence_identity,
)
from exit_spectra.enums import BoundSide, ComparisonDirection, ReportTypes, SurfaceTypes
from exit_spectra.exceptions import ExitSpectraError
from exit_spectra.factories import SurfaceGeneratorFactory
from exit_spectra.geometry import ModelSpace, constant_function, space_form_warping
from exit_spectra.mesh.mesh_verifier import (
    calibrate_mesh_tolerance,
    estimate_hypothesis_fields,
    extract_extrinsic_ball,
    mesh_spectrum,
    solve_discrete_hierarchy,
    verify_extrinsic_ball,
)
from exit_spectra.stochastic.diffusion_oracle import DiffusionConfig, compare_to_quadrature

if TYPE_CHECKING:
    from exit_spectra.dataclass_models import SuiteReport
    from exit_spectra.factories import ReportFactory
    from exit_spectra.utils import WarningManager

CriterionResult = Tuple[bool, Dict[str, Any]]


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


class SuiteOrchestrator:
    """Runs the acceptance criteria and collects one record per criterion.

    ``quick`` trades resolution for speed: fewer Monte-Carlo paths, coarser
    meshes and lower orders. Each record has the criterion id and name, the
    outcome, its details and the wall time.

    Attributes:
        quick (bool): Reduced-size run.
        workers (int | None): Worker threads for the Monte-Carlo criteria.
        warning_manager (WarningManager): Collects non-fatal warnings.
        report_factory (ReportFactory): Builds the report dataclass.
    """

    def __init__(
        self,
        *,
        warning_manager: WarningManager,
        report_factory: ReportFactory,
        quick: bool = False,
        workers: int | None = None,
    ) -> None:
        self.logger = configure_logging(
            module_name=__name__,
            log_file_name="suite_orchestrator",
            log_level=DEBUG,
        )
        self.quick = quick
        self.workers = workers
        self.warning_manager = warning_manager
        self.report_factory = report_factory

    def criteria(self) -> List[Tuple[int, str, Callable[[], CriterionResult]]]:
        return [
            (1, "euclidean_exactness", self.euclidean_exactness),
            (2, "hyperbolic_closed_forms", self.hyperbolic_closed_forms),
            (3, "divergence_identity", self.divergence_identity),
            (4, "comparison_reduction", self.comparison_reduction),
            (5, "lambda_closed_form", self.lambda_closed_form),
            (6, "balance", self.balance),
            (7, "lemma_positivity", self.lemma_positivity),
            (8, "intrinsic_comparison", self.intrinsic_comparison),
            (9, "monte_carlo_agreement", self.monte_carlo_agreement),
            (10, "mesh_equality_case", self.mesh_equality_case),
            (11, "mesh_inequality_case", self.mesh_inequality_case),
        ]

    def run_orchestrator(self) -> SuiteReport:
        records = []
        for number, name, check in self.criteria():
            start = time.perf_counter()
            try:
                passed, details = check()
            except ExitSpectraError as exc:
                passed, details = False, {"error": f"{type(exc).__name__}: {exc}"}
            seconds = time.perf_counter() - start
            self.logger.info(f"criterion {number} {name}: {'PASS' if passed else 'FAIL'} ({seconds:.2f} s)")
            records.append(
                {"id": number, "name": name, "passed": passed, "seconds": seconds, "details": details}
            )
        return self.report_factory.get_report(
            ReportTypes.SUITE_REPORT,
            quick=self.quick,
            criteria=records,
            passed=all(r["passed"] for r in records),
        )

    def euclidean_exactness(self) -> CriterionResult:
        worst = 0.0
        for m in (2, 3, 5):
            model = ModelSpace(m, space_form_warping(0.0))
            for R in (0.5, 1.0, 2.0):
                a0 = exit_moment(solve_hierarchy(model, R, 1), 0)
                worst = max(worst, _rel(a0, R / m))
        a1 = model_spectrum(ModelSpace(2, space_form_warping(0.0)), 1.0, 1).values[1]
        passed = worst <= 1e-10 and _rel(a1, 1 / 16) <= 1e-8
        return passed, {"max_rel_error_A0": worst, "A1_disk": a1}

    def hyperbolic_closed_forms(self) -> CriterionResult:
        model = ModelSpace(2, space_form_warping(-1.0))
        errors = {}
        for R in (0.5, 1.0, 1.5):
            profiles = solve_hierarchy(model, R, 1)
            u1 = float(profiles.value(1, 0.0))
            a0 = exit_moment(profiles, 0)
            errors[str(R)] = max(
                _rel(u1, 2 * math.log(math.cosh(R / 2))), _rel(a0, math.tanh(R / 2))
            )
        return max(errors.values()) <= 1e-8, {"max_rel_error": errors}

    def divergence_identity(self) -> CriterionResult:
        top = 3 if self.quick else 5
        worst = 0.0
        for b in (0.0, -1.0, -4.0):
            for m in (2, 3):
                profiles = solve_hierarchy(ModelSpace(m, space_form_warping(b)), 1.0, top + 1)
                for k in range(top + 1):
                    worst = max(worst, verify_divergence_identity(profiles, k).residual)
        return worst <= 1e-8, {"max_residual": worst, "K": top}

    def comparison_reduction(self) -> CriterionResult:
        details = {}
        passed = True
        for b in (0.0, -1.0):
            w = space_form_warping(b)
            bounds = make_bounding_functions(None, None, BoundSide.BELOW, 1.0)
            con = build_constellation(3, 2, w, bounds, 1.0)
            grid = np.linspace(0.0, 1.0, 257)
            gap = float(np.max(np.abs(con.comparison.W(grid) - w.eval(grid))) / np.max(w.eval(grid)))
            bound = spectrum_bound(con, 3).spectrum.values
            plain = model_spectrum(ModelSpace(2, w), 1.0, 3).values
            spectra = max(_rel(x, y) for x, y in zip(bound, plain))
            details[w.label] = {"W_gap": gap, "spectrum_gap": spectra}
            passed = passed and gap <= 1e-8 and spectra <= 1e-8
        return passed, details

    def lambda_closed_form(self) -> CriterionResult:
        worst = 0.0
        w = space_form_warping(0.0)
        grid = np.linspace(0.0, 1.0, 257)[1:]
        for h0 in (0.1, 0.3):
            for m in (2, 3):
                bounds = make_bounding_functions(
                    None, constant_function(h0), BoundSide.BELOW, 1.0
                )
                cs = build_comparison_space(w, bounds, m, 1.0)
                expected = grid * np.exp(-m * h0 * grid / (m - 1))
                worst = max(worst, float(np.max(np.abs(cs.W(grid) - expected) / expected)))
        return worst <= 1e-6, {"max_rel_error": worst}

    def _space_form_space(self, b: float, m: int):
        bounds = make_bounding_functions(None, None, BoundSide.BELOW, 1.0)
        return build_comparison_space(space_form_warping(b), bounds, m, 1.0)

    def balance(self) -> CriterionResult:
        details = {}
        passed = True
        for m in (2, 3):
            for b in (-0.25, -1.0, -4.0):
                report = balance_check(self._space_form_space(b, m), strict=True)
                ok = bool(np.all(report.margins > 0))
                details[f"b={b:g},m={m}"] = report.min_margin
                passed = passed and ok
            flat = balance_check(self._space_form_space(0.0, m))
            flat_gap = float(np.max(np.abs(flat.margins)))
            details[f"b=0,m={m}"] = flat_gap
            passed = passed and flat_gap <= 1e-10
        return passed, {"min_margins": details}

    def lemma_positivity(self) -> CriterionResult:
        details = {}
        passed = True
        for m in (2, 3):
            for b in (0.0, -1.0, -4.0):
                cs = self._space_form_space(b, m)
                lemma = lemma_paren_check(cs, 3)
                strict = balance_check(cs, strict=True).strictly_balanced
                ok = lemma.min_value >= -1e-9
                if strict:
                    ok = ok and all(v > 0 for v in lemma.per_order[1:])
                details[f"b={b:g},m={m}"] = list(lemma.per_order)
                passed = passed and ok
        return passed, {"per_order_minimum": details}

    def intrinsic_comparison(self) -> CriterionResult:
        top = 3 if self.quick else 5
        hyperbolic = ModelSpace(2, space_form_warping(-1.0))
        flat = ModelSpace(2, space_form_warping(0.0))
        steep = ModelSpace(2, space_form_warping(-4.0))
        margins = {}
        passed = True
        for R in (0.5, 1.0, 2.0):
            above = compare_intrinsic(hyperbolic, flat, R, top, ComparisonDirection.LE)
            below = compare_intrinsic(hyperbolic, steep, R, top, ComparisonDirection.GE)
            margins[str(R)] = {
                "le": min(v.margin for v in above.verdicts),
                "ge": min(v.margin for v in below.verdicts),
            }
            passed = passed and above.passed and below.passed
        return passed, {"min_margins": margins}

    def monte_carlo_agreement(self) -> CriterionResult:
        paths = 20_000 if self.quick else 100_000
        details: Dict[str, Any] = {}
        passed = True
        for b in (0.0, -1.0):
            model = ModelSpace(2, space_form_warping(b))
            cfg = DiffusionConfig(model=model, R=1.0, dt=1e-4, paths=paths, max_order=2)
            profiles = solve_hierarchy(model, 1.0, 2)
            scores = compare_to_quadrature(cfg, profiles, workers=self.workers)
            zs = [s.z for s in scores if not s.skipped]
            details[model.label] = zs
            passed = passed and all(abs(z) <= 3.0 for z in zs)
            if b == 0.0:
                wrong = solve_hierarchy(model, 0.5, 2)
                control = compare_to_quadrature(
                    cfg, wrong, allow_mismatch=True, workers=self.workers
                )
                z_control = control[1].z
                details["negative_control_z1"] = z_control
                passed = passed and abs(z_control) > 10.0
        return passed, {"paths": paths, "z": details}

    def _disk_spectrum(self, edge_length: float) -> Tuple[float, float, int]:
        disk = SurfaceGeneratorFactory.get_generator(SurfaceTypes.DISK).generate(edge_length, 1.0)
        ball = extract_extrinsic_ball(disk, 1.0)
        spectrum = mesh_spectrum(solve_discrete_hierarchy(ball, 2))
        return spectrum.values[0], spectrum.values[1], len(disk.vertices)

    def mesh_equality_case(self) -> CriterionResult:
        coarse, fine = (1 / 14, 1 / 28) if self.quick else (1 / 29, 1 / 57)
        a0_c, a1_c, _ = self._disk_spectrum(coarse)
        a0, a1, vertices = self._disk_spectrum(fine)
        err_coarse = max(_rel(a0_c, 0.5), _rel(a1_c, 1 / 16))
        err_fine = max(_rel(a0, 0.5), _rel(a1, 1 / 16))
        rate = math.log2(err_coarse / err_fine) if err_fine > 0 else math.inf
        passed = err_fine <= 0.02 and rate >= 1.7
        return passed, {
            "vertices": vertices,
            "A0": a0,
            "A1": a1,
            "rel_error": err_fine,
            "rate": rate,
        }

    def mesh_inequality_case(self) -> CriterionResult:
        edges = (0.1, 0.05) if self.quick else (0.05, 0.025)
        w = space_form_warping(0.0)
        bounds = make_bounding_functions(None, None, BoundSide.ABOVE, 1.0)
        details: Dict[str, Any] = {}
        passed = True
        for surface in (SurfaceTypes.CATENOID, SurfaceTypes.HELICOID):
            generator = SurfaceGeneratorFactory.get_generator(surface, self.warning_manager)
            max_abs_c = []
            for edge in edges:
                mesh = generator.generate(edge, 1.25)
                max_abs_c.append(
                    estimate_hypothesis_fields(extract_extrinsic_ball(mesh, 1.0)).max_abs_C
                )
            mesh = generator.generate(edges[-1], 1.25)
            for R in (0.6, 1.0):
                mesh_tol = calibrate_mesh_tolerance(edges[-1], R, K=3)
                con = build_constellation(3, 2, w, bounds, R)
                result = verify_extrinsic_ball(
                    mesh, con, 3, mesh_tol, warning_manager=self.warning_manager
                )
                details[f"{surface.value},R={R:g}"] = {
                    "margins": [v.relative_margin for v in result.verdicts],
                    "mesh_tol": mesh_tol,
                    "euler_characteristic": result.ball.euler_characteristic,
                }
                passed = passed and result.passed
            details[f"{surface.value},max_abs_C"] = max_abs_c
            # Minimal surfaces: the discrete C must shrink under refinement.
            passed = passed and max_abs_c[-1] < max_abs_c[0]
        return passed, details
