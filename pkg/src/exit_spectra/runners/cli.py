from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError as PydanticValidationError

from exit_spectra.configs import (
    CRITICAL,
    DEBUG,
    ERROR,
    INFO,
    WARNING,
    configure_logging,
    set_console_level,
)
from exit_spectra.constants import OUTPUT_FILES_DIR_PATH
from exit_spectra.core.comparison import (
    balance_check,
    build_constellation,
    compare_intrinsic,
    lemma_paren_check,
    make_bounding_functions,
    spectrum_bound,
)
from exit_spectra.core.spectrum import model_spectrum, solve_hierarchy
from exit_spectra.dataclass_models import DIFFUSION_COLUMNS, SPECTRUM_COLUMNS
from exit_spectra.enums import (
    BoundSide,
    Command,
    ComparisonDirection,
    MeshFormat,
    ReportTypes,
    SurfaceTypes,
)
from exit_spectra.exceptions import ExitSpectraError, HypothesisViolationError, ValidationError
from exit_spectra.factories import ReportFactory, SurfaceGeneratorFactory
from exit_spectra.geometry import (
    ModelSpace,
    WarpingFunction,
    make_custom_warping,
    space_form_warping,
)
from exit_spectra.mesh import SurfaceMesh, load_mesh
from exit_spectra.orchestrators import MeshVerificationOrchestrator, SuiteOrchestrator
from exit_spectra.parsing import parse_radial_expression
from exit_spectra.runners.run_config import RunConfig, read_config_file
from exit_spectra.stochastic import DiffusionConfig, compare_to_quadrature, sample_exit_moments
from exit_spectra.utils import Utilities, WarningManager, resolve_worker_count

LOG_LEVELS = {"DEBUG": DEBUG, "INFO": INFO, "WARNING": WARNING, "ERROR": ERROR, "CRITICAL": CRITICAL}

# Custom warpings without an explicit domain are checked on [0, this].
DEFAULT_CUSTOM_DOMAIN = 10.0


def build_warping(b: float | None, expression: str | None, domain_max: float | None) -> WarpingFunction:
    """Q_b for a curvature constant, or a validated custom warping from an expression in r."""
    if expression is None:
        return space_form_warping(b, domain_max)
    f = parse_radial_expression(expression)
    return make_custom_warping(
        f.eval,
        f.deriv1,
        f.deriv2,
        domain_max if domain_max is not None else DEFAULT_CUSTOM_DOMAIN,
        label=expression,
    )


class ExitSpectraRunner:
    """Executes one command of a :class:`RunConfig` and writes its report.

    Attributes:
        config (RunConfig): Validated configuration.
        logger (logging.Logger): Runner logger.
        warning_manager (WarningManager): Collects non-fatal warnings of the run.
        utilities (Utilities): Report writer.
        report_factory (ReportFactory): Report dataclass registry.
        written (List[Path]): Report files written so far.
    """

    def __init__(self, config: RunConfig):
        self.logger = configure_logging(
            module_name=__name__,
            log_file_name="cli",
            log_level=DEBUG,
        )
        self.config = config
        self.warning_manager = self._create_warning_manager()
        self.utilities = self._create_utilities_instance()
        self.report_factory = ReportFactory()
        self.written: List[Path] = []

    def _create_warning_manager(self) -> WarningManager:
        return WarningManager()

    def _create_utilities_instance(self) -> Utilities:
        return Utilities()

    def run(self) -> int:
        """Run the configured command; returns 0, or 1 when a verdict fails."""
        handlers: Dict[Command, Callable[[], int]] = {
            Command.SPECTRUM: self.run_spectrum,
            Command.COMPARE_SPACE: self.run_compare_space,
            Command.BALANCE: self.run_balance,
            Command.INTRINSIC: self.run_intrinsic,
            Command.SIMULATE: self.run_simulate,
            Command.MESH_VERIFY: self.run_mesh_verify,
            Command.SUITE: self.run_suite,
        }
        self.logger.info(f"Running {self.config.command.value}")
        return handlers[self.config.command]()

    def _output_path(self, suffix: str) -> Path:
        if self.config.output is not None:
            return self.config.output
        name = self.config.command.value.replace("-", "_")
        return OUTPUT_FILES_DIR_PATH / f"{name}.{suffix}"

    def _write_csv(self, rows: Sequence[Any], columns: Sequence[str]) -> Path:
        path = self.utilities.write_csv([row.to_dict() for row in rows], self._output_path("csv"), columns)
        self.written.append(path)
        print(f"wrote {path}")
        return path

    def _write_json(self, report: Any) -> Path:
        path = self.utilities.write_json(report.to_dict(), self._output_path("json"))
        self.written.append(path)
        print(f"wrote {path}")
        return path

    def _warnings(self) -> List[str]:
        return [f"[{w.category}] {w.message}" for w in self.warning_manager.warnings]

    def _model(self) -> ModelSpace:
        cfg = self.config
        return ModelSpace(cfg.m, build_warping(cfg.b, cfg.w, cfg.domain_max))

    def _model_id(self) -> str:
        return f"{self.config.b:g}" if self.config.w is None else self.config.w

    def _bounds(self, default_side: BoundSide, radius: float | None = None):
        cfg = self.config
        g = parse_radial_expression(cfg.g) if cfg.g is not None else None
        h = parse_radial_expression(cfg.h) if cfg.h is not None else None
        side = cfg.side if cfg.side is not None else default_side
        return make_bounding_functions(
            g, h, side, radius if radius is not None else cfg.R, self.warning_manager
        )

    def run_spectrum(self) -> int:
        cfg = self.config
        model = self._model()
        spectrum = model_spectrum(model, cfg.R, cfg.K, cfg.tol)
        rows = [
            self.report_factory.get_report(
                ReportTypes.SPECTRUM_ROW,
                model_id=model.label,
                b_or_custom=self._model_id(),
                m=cfg.m,
                R=cfg.R,
                k=k,
                A_hat_k=value,
                A_raw_k=raw,
                tol=cfg.tol,
                provenance=spectrum.provenance.value,
            )
            for k, (value, raw) in enumerate(zip(spectrum.values, spectrum.raw_values))
        ]
        self._write_csv(rows, SPECTRUM_COLUMNS)
        return 0

    def _comparison_report(self, include_bound: bool) -> int:
        cfg = self.config
        w = build_warping(cfg.b, cfg.w, cfg.domain_max)
        bounds = self._bounds(BoundSide.BELOW)
        con = build_constellation(cfg.ambient_dim, cfg.m, w, bounds, cfg.R, cfg.tol)
        cs = con.comparison
        report = balance_check(cs, strict=cfg.strict)
        lemma = None
        bound = None
        if report.balanced and cfg.K >= 1:
            lemma = lemma_paren_check(cs, cfg.K)
        if include_bound and report.balanced:
            bound = spectrum_bound(con, cfg.K, cfg.tol)
        balance = {
            "min_margin": report.min_margin,
            "argmin": report.argmin,
            "strict": report.strict,
            "balanced": report.balanced,
            "strictly_balanced": report.strictly_balanced,
            "mean_convex": report.mean_convex,
            "grid_points": int(report.grid.size),
        }
        verdicts: Dict[str, Any] = {
            "balanced": report.passed,
            "bound_asserted": bound is not None,
            "lambda_ode_residual": cs.lambda_ode_residual(),
        }
        if bound is not None:
            verdicts["direction"] = bound.direction.value
            verdicts["bound_ball_radius"] = bound.ball_radius
        result = self.report_factory.get_report(
            ReportTypes.COMPARISON_REPORT,
            command=cfg.command.value,
            inputs={
                "w": w.label,
                "g": bounds.g.label,
                "h": bounds.h.label,
                "m": cfg.m,
                "n": cfg.ambient_dim,
                "R": cfg.R,
                "K": cfg.K,
                "side": bounds.side,
            },
            s_R=cs.s_max,
            balance=balance,
            lemma_min=lemma.min_value if lemma is not None else None,
            lemma_per_order=list(lemma.per_order) if lemma is not None else [],
            bound_spectra=[
                {"k": k, "A_hat_k": v, "A_raw_k": raw}
                for k, (v, raw) in enumerate(zip(bound.spectrum.values, bound.spectrum.raw_values))
            ]
            if bound is not None
            else [],
            verdicts=verdicts,
            warnings=self._warnings(),
        )
        self._write_json(result)
        if not report.passed:
            raise HypothesisViolationError(
                f"{cs.label} is not {'strictly ' if cfg.strict else ''}balanced: "
                f"min margin {report.min_margin:.6g} at s = {report.argmin:.6g}"
            )
        return 0

    def run_compare_space(self) -> int:
        return self._comparison_report(include_bound=True)

    def run_balance(self) -> int:
        return self._comparison_report(include_bound=False)

    def run_intrinsic(self) -> int:
        cfg = self.config
        N = ModelSpace(cfg.m, build_warping(cfg.N_b, cfg.N_w, cfg.domain_max))
        bound = ModelSpace(cfg.m, build_warping(cfg.bound_b, cfg.bound_w, cfg.domain_max))
        comparison = compare_intrinsic(N, bound, cfg.R, cfg.K, cfg.direction, cfg.tol)
        report = self.report_factory.get_report(
            ReportTypes.INTRINSIC_REPORT,
            inputs={"N": N.label, "bound": bound.label, "m": cfg.m, "R": cfg.R, "K": cfg.K},
            direction=cfg.direction.value,
            curvature_margin=comparison.curvature_margin,
            verdicts=[
                {
                    "k": v.k,
                    "value": v.value,
                    "bound": v.bound,
                    "margin": v.margin,
                    "holds": v.holds,
                    "near_equality": v.near_equality,
                }
                for v in comparison.verdicts
            ],
            passed=comparison.passed,
        )
        self._write_json(report)
        print("PASS" if comparison.passed else "FAIL")
        return 0 if comparison.passed else 1

    def run_simulate(self) -> int:
        cfg = self.config
        model = self._model()
        order = max(cfg.K, 1)
        diffusion = DiffusionConfig(
            model=model,
            R=cfg.R,
            r0=cfg.r0,
            dt=cfg.dt,
            paths=cfg.paths,
            seed=cfg.seed,
            max_order=order,
        )
        workers = resolve_worker_count(cfg.workers)
        estimates = sample_exit_moments(diffusion, workers, self.warning_manager)
        profile_R = cfg.profile_R if cfg.profile_R is not None else cfg.R
        profiles = solve_hierarchy(model, profile_R, order, cfg.tol)
        scores = compare_to_quadrature(
            diffusion,
            profiles,
            estimates=estimates,
            allow_mismatch=cfg.profile_R is not None,
        )
        rows = [
            self.report_factory.get_report(
                ReportTypes.DIFFUSION_ROW,
                model_id=model.label,
                m=cfg.m,
                R=cfg.R,
                r0=cfg.r0,
                k=s.k,
                mc_mean=s.mc_mean,
                std_err=s.std_error,
                quad_value=s.quad_value,
                z=s.z,
            )
            for s in scores
        ]
        self._write_csv(rows, DIFFUSION_COLUMNS)
        return 0

    def _surface(self) -> SurfaceMesh:
        cfg = self.config
        if cfg.mesh is not None:
            return load_mesh(
                cfg.mesh,
                cfg.mesh_format,
                pole_vertex=cfg.pole_vertex,
                pole_point=cfg.pole_point,
                warning_manager=self.warning_manager,
            )
        generator = SurfaceGeneratorFactory.get_generator(cfg.generator, self.warning_manager)
        extent = cfg.extent if cfg.extent is not None else 1.25 * max(cfg.mesh_radii)
        params = {}
        if cfg.shape is not None and generator.shape_parameter is not None:
            params[generator.shape_parameter] = cfg.shape
        return generator.generate(cfg.edge_length, extent, **params)

    def run_mesh_verify(self) -> int:
        cfg = self.config
        mesh = self._surface()
        w = space_form_warping(cfg.b if cfg.b is not None else 0.0)
        bounds = self._bounds(BoundSide.ABOVE, max(cfg.mesh_radii))
        orchestrator = MeshVerificationOrchestrator(
            mesh=mesh,
            warping=w,
            bounds=bounds,
            radii=cfg.mesh_radii,
            K=cfg.K,
            warning_manager=self.warning_manager,
            report_factory=self.report_factory,
            mesh_tol=cfg.mesh_tol,
            ambient_dim=cfg.ambient_dim,
            tol=cfg.tol,
        )
        report = orchestrator.run_orchestrator()
        self._write_json(report)
        print("PASS" if report.passed else "FAIL")
        return 0 if report.passed else 1

    def run_suite(self) -> int:
        orchestrator = SuiteOrchestrator(
            warning_manager=self.warning_manager,
            report_factory=self.report_factory,
            quick=self.config.quick,
            workers=resolve_worker_count(self.config.workers),
        )
        report = orchestrator.run_orchestrator()
        self._write_json(report)
        for record in report.criteria:
            print(f"{record['id']:>2} {record['name']:<28} {'PASS' if record['passed'] else 'FAIL'}")
        return 0 if report.passed else 1


def run(config: RunConfig) -> int:
    """Execute ``config``; returns the process exit status (0, 1, 2 or 3)."""
    logger = configure_logging(__name__, "cli", DEBUG)
    try:
        return ExitSpectraRunner(config).run()
    except ExitSpectraError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_status


def _float_list(text: str) -> List[float]:
    return [float(item) for item in text.replace(",", " ").split()]


def _add_model_flags(parser: argparse.ArgumentParser, prefix: str = "", what: str = "model") -> None:
    dest = prefix.replace("-", "_")
    parser.add_argument(f"--{prefix}b", dest=f"{dest}b", type=float, help=f"Curvature constant of the {what}")
    parser.add_argument(f"--{prefix}w", dest=f"{dest}w", help=f"Warping expression in r for the {what}")


def _add_bound_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--g", help="Tangency bound g(r)")
    parser.add_argument("--h", help="Mean-convexity bound h(r)")
    parser.add_argument("--side", choices=[s.value for s in BoundSide], help="Constellation side")
    parser.add_argument("--n", type=int, help="Ambient dimension (default m + 1)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="Config file with [common] and per-command sections")
    common.add_argument("--m", type=int, help="Dimension m >= 2")
    common.add_argument("--R", type=float, help="Ball radius R > 0")
    common.add_argument("--K", type=int, help="Highest order K >= 0")
    common.add_argument("--tol", type=float, help="Relative quadrature tolerance")
    common.add_argument("--domain-max", dest="domain_max", type=float, help="R_max of the warping")
    common.add_argument("--seed", type=int, help="Random seed")
    common.add_argument("--workers", type=int, help="Worker threads")
    common.add_argument("--output", type=Path, help="Report path")
    common.add_argument(
        "--log-level", dest="log_level", choices=sorted(LOG_LEVELS), help="Console log level"
    )

    parser = argparse.ArgumentParser(
        prog="exit-spectra",
        description="Exit-moment spectra of model-space balls and their comparison bounds",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    spectrum = commands.add_parser(
        Command.SPECTRUM.value, parents=[common], argument_default=argparse.SUPPRESS,
        help="Spectrum A_hat_0..A_hat_K of a model ball (CSV)",
    )
    _add_model_flags(spectrum)

    for command, text in (
        (Command.COMPARE_SPACE, "Comparison space, balance, lemma and bound spectrum (JSON)"),
        (Command.BALANCE, "Balance condition of a comparison space (JSON)"),
    ):
        sub = commands.add_parser(
            command.value, parents=[common], argument_default=argparse.SUPPRESS, help=text
        )
        _add_model_flags(sub, what="curvature bound")
        _add_bound_flags(sub)
        sub.add_argument("--strict", action="store_true", help="Require strict balance")

    intrinsic = commands.add_parser(
        Command.INTRINSIC.value, parents=[common], argument_default=argparse.SUPPRESS,
        help="Intrinsic comparison of two model balls (JSON)",
    )
    _add_model_flags(intrinsic, "N-", "compared model")
    _add_model_flags(intrinsic, "bound-", "bounding model")
    intrinsic.add_argument(
        "--direction", choices=[d.value for d in ComparisonDirection], help="Asserted inequality"
    )

    simulate = commands.add_parser(
        Command.SIMULATE.value, parents=[common], argument_default=argparse.SUPPRESS,
        help="Monte-Carlo exit moments against quadrature (CSV)",
    )
    _add_model_flags(simulate)
    simulate.add_argument("--r0", type=float, help="Start radius")
    simulate.add_argument("--dt", type=float, help="Time step")
    simulate.add_argument("--paths", type=int, help="Number of paths")
    simulate.add_argument(
        "--profile-R", dest="profile_R", type=float,
        help="Compare with profiles on another radius (negative control)",
    )

    mesh = commands.add_parser(
        Command.MESH_VERIFY.value, parents=[common], argument_default=argparse.SUPPRESS,
        help="Extrinsic comparison on a triangulated surface (JSON)",
    )
    mesh.add_argument("--b", type=float, help="Ambient curvature bound (default 0)")
    _add_bound_flags(mesh)
    mesh.add_argument("--mesh", type=Path, help="OFF or OBJ file")
    mesh.add_argument("--mesh-format", dest="mesh_format", choices=[f.value for f in MeshFormat])
    mesh.add_argument("--generator", choices=[t.value for t in SurfaceTypes], help="Built-in surface")
    mesh.add_argument("--edge-length", dest="edge_length", type=float, help="Generator edge length")
    mesh.add_argument("--extent", type=float, help="Generator extent")
    mesh.add_argument("--shape", type=float, help="Sphere radius, neck radius or pitch")
    mesh.add_argument("--pole-vertex", dest="pole_vertex", type=int, help="Pole vertex index")
    mesh.add_argument(
        "--pole-point", dest="pole_point", type=float, nargs=3, help="Pole: vertex nearest to x y z"
    )
    mesh.add_argument("--radii", type=_float_list, help="Comma separated radii (default R)")
    mesh.add_argument("--mesh-tol", dest="mesh_tol", type=float, help="Verdict tolerance")

    suite = commands.add_parser(
        Command.SUITE.value, parents=[common], argument_default=argparse.SUPPRESS,
        help="Acceptance suite (JSON)",
    )
    suite.add_argument("--quick", action="store_true", help="Reduced sizes")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, merge the config file and run; returns the exit status."""
    load_dotenv()
    logger = configure_logging(__name__, "cli", DEBUG)
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    command = Command(args.pop("command"))
    config_path = args.pop("config", None)
    log_level = args.pop("log_level", None)
    if log_level is not None:
        set_console_level(LOG_LEVELS[log_level])
    values: Dict[str, Any] = {}
    try:
        if config_path is not None:
            values.update(read_config_file(config_path, command))
            file_level = values.pop("log_level", "").upper()
            if file_level and log_level is None:
                if file_level not in LOG_LEVELS:
                    raise ValidationError(f"unknown log level {file_level!r} in {config_path}")
                set_console_level(LOG_LEVELS[file_level])
        values.update(args)
        config = RunConfig(command=command, **values)
    except PydanticValidationError as exc:
        logger.error(f"invalid configuration: {exc}")
        print(f"error: invalid configuration\n{exc}", file=sys.stderr)
        return 2
    except ExitSpectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_status
    np.seterr(all="ignore")
    return run(config)


def command_line_runner() -> None:
    sys.exit(main())


if __name__ == "__main__":
    command_line_runner()
