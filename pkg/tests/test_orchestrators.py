from types import SimpleNamespace

import pytest

from exit_spectra.core import make_bounding_functions
from exit_spectra.dataclass_models import MeshReport, SuiteReport
from exit_spectra.enums import BoundSide, ComparisonDirection
from exit_spectra.exceptions import NumericalError
from exit_spectra.factories import ReportFactory
from exit_spectra.geometry import space_form_warping
from exit_spectra.orchestrators import MeshVerificationOrchestrator, SuiteOrchestrator
from exit_spectra.orchestrators import suite_orchestrator


def mesh_orchestrator(mesh, radii, warning_manager, mesh_tol=None):
    return MeshVerificationOrchestrator(
        mesh=mesh,
        warping=space_form_warping(0.0),
        bounds=make_bounding_functions(None, None, BoundSide.ABOVE, max(radii)),
        radii=radii,
        K=2,
        warning_manager=warning_manager,
        report_factory=ReportFactory(),
        mesh_tol=mesh_tol,
    )


@pytest.fixture
def suite(warning_manager):
    return SuiteOrchestrator(
        warning_manager=warning_manager, report_factory=ReportFactory(), quick=True, workers=1
    )


def test_mesh_orchestrator_fixed_tolerance(coarse_disk, warning_manager):
    orchestrator = mesh_orchestrator(coarse_disk, [0.5, 1.0], warning_manager, mesh_tol=0.1)
    report = orchestrator.run_orchestrator()
    assert isinstance(report, MeshReport)
    assert report.passed
    assert report.mesh_tol == 0.1
    assert [entry["R"] for entry in report.results] == [0.5, 1.0]
    assert len(orchestrator.results) == 2
    entry = report.results[1]
    assert entry["direction"] is ComparisonDirection.LE
    assert entry["euler_characteristic"] == 1
    assert [v["k"] for v in entry["verdicts"]] == [0, 1, 2]
    assert entry["bound"][0] == pytest.approx(0.5, rel=1e-9)
    assert report.inputs["w"] == "Q_0"
    assert report.inputs["radii"] == [0.5, 1.0]


def test_mesh_orchestrator_calibrates_per_radius(coarse_disk, warning_manager):
    # the calibration disk at R = 1 is the fixture disk itself
    report = mesh_orchestrator(coarse_disk, [1.0], warning_manager).run_orchestrator()
    assert report.passed
    assert 1e-3 <= report.mesh_tol < 0.2
    assert all(v["near_equality"] for v in report.results[0]["verdicts"])


def test_mesh_report_serializes(coarse_disk, warning_manager):
    report = mesh_orchestrator(coarse_disk, [0.5], warning_manager, mesh_tol=0.1).run_orchestrator()
    data = report.to_dict()
    assert data["results"][0]["direction"] == "le"
    assert data["inputs"]["side"] == "above"
    assert isinstance(data["results"][0]["diagnostics"]["bin_edges"], list)


def test_suite_lists_criteria_in_order(suite):
    criteria = suite.criteria()
    assert [number for number, _, _ in criteria] == list(range(1, 12))
    assert criteria[0][1] == "euclidean_exactness"
    assert criteria[-1][1] == "mesh_inequality_case"


@pytest.mark.parametrize(
    "name",
    [
        "euclidean_exactness",
        "hyperbolic_closed_forms",
        "comparison_reduction",
        "lambda_closed_form",
        "intrinsic_comparison",
    ],
)
def test_fast_criteria_pass(suite, name):
    passed, details = getattr(suite, name)()
    assert passed, details


def test_suite_records_failures_without_stopping(suite, monkeypatch):
    def broken():
        raise NumericalError("did not converge")

    monkeypatch.setattr(
        suite,
        "criteria",
        lambda: [(1, "ok", lambda: (True, {"x": 1})), (2, "broken", broken)],
    )
    report = suite.run_orchestrator()
    assert isinstance(report, SuiteReport)
    assert report.quick
    assert not report.passed
    assert [r["passed"] for r in report.criteria] == [True, False]
    assert report.criteria[1]["details"]["error"] == "NumericalError: did not converge"
    assert all(r["seconds"] >= 0.0 for r in report.criteria)


@pytest.mark.parametrize(
    "field_size, expected",
    [(lambda edge: edge, True), (lambda edge: 1.0 / edge, False)],
    ids=["shrinking", "growing"],
)
def test_mesh_inequality_requires_shrinking_curvature(suite, monkeypatch, field_size, expected):
    generator = SimpleNamespace(generate=lambda edge, extent: SimpleNamespace(edge=edge))
    monkeypatch.setattr(
        suite_orchestrator,
        "SurfaceGeneratorFactory",
        SimpleNamespace(get_generator=lambda surface, warning_manager=None: generator),
    )
    monkeypatch.setattr(suite_orchestrator, "extract_extrinsic_ball", lambda mesh, R: mesh)
    monkeypatch.setattr(
        suite_orchestrator,
        "estimate_hypothesis_fields",
        lambda ball: SimpleNamespace(max_abs_C=field_size(ball.edge)),
    )
    monkeypatch.setattr(suite_orchestrator, "calibrate_mesh_tolerance", lambda *a, **k: 0.1)
    monkeypatch.setattr(suite_orchestrator, "build_constellation", lambda *a, **k: None)
    monkeypatch.setattr(
        suite_orchestrator,
        "verify_extrinsic_ball",
        lambda *a, **k: SimpleNamespace(
            passed=True, verdicts=(), ball=SimpleNamespace(euler_characteristic=1)
        ),
    )
    passed, details = suite.mesh_inequality_case()
    assert passed is expected
    assert details["helicoid,max_abs_C"] == [field_size(0.1), field_size(0.05)]


@pytest.mark.slow
def test_quick_suite_runs_every_criterion(suite):
    report = suite.run_orchestrator()
    assert [r["id"] for r in report.criteria] == list(range(1, 12))
    assert all("error" not in r["details"] for r in report.criteria)
