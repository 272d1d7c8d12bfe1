"""Validated run configuration and ``key = value`` config files."""

from __future__ import annotations

import configparser
from pathlib import Path
from typing import Any, Dict, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from exit_spectra.constants import DEFAULT_MAX_ORDER, DEFAULT_SEED, QUAD_REL_TOL
from exit_spectra.enums import (
    BoundSide,
    Command,
    ComparisonDirection,
    MeshFormat,
    SurfaceTypes,
)
from exit_spectra.exceptions import ExpressionSyntaxError, ValidationError
from exit_spectra.parsing import parse_expression

# Fields holding radial expressions; each must parse.
EXPRESSION_FIELDS = ("w", "g", "h", "N_w", "bound_w")


class RunConfig(BaseModel):
    """Everything one command needs.

    Model spaces are given either by a curvature constant (``b``, ``N_b``,
    ``bound_b``) or by a warping expression in ``r`` (``w``, ``N_w``,
    ``bound_w``), never both.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command

    b: float | None = None
    w: str | None = None
    domain_max: float | None = Field(default=None, gt=0)
    m: int = Field(default=2, ge=2)
    n: int | None = Field(default=None, ge=2)
    R: float = Field(default=1.0, gt=0)
    K: int = Field(default=DEFAULT_MAX_ORDER, ge=0)
    tol: float = Field(default=QUAD_REL_TOL, gt=0, lt=1)

    g: str | None = None
    h: str | None = None
    side: BoundSide | None = None
    strict: bool = False

    N_b: float | None = None
    N_w: str | None = None
    bound_b: float | None = None
    bound_w: str | None = None
    direction: ComparisonDirection | None = None

    r0: float = Field(default=0.0, ge=0)
    dt: float = Field(default=1e-4, gt=0)
    paths: int = Field(default=100_000, ge=1)
    seed: int = DEFAULT_SEED
    workers: int | None = Field(default=None, ge=1)
    profile_R: float | None = Field(default=None, gt=0)

    mesh: Path | None = None
    mesh_format: MeshFormat | None = None
    generator: SurfaceTypes | None = None
    edge_length: float = Field(default=0.05, gt=0)
    extent: float | None = Field(default=None, gt=0)
    shape: float | None = Field(default=None, gt=0)
    pole_vertex: int | None = Field(default=None, ge=0)
    pole_point: Tuple[float, float, float] | None = None
    radii: List[float] | None = None
    mesh_tol: float | None = Field(default=None, gt=0)

    quick: bool = False
    output: Path | None = None

    @field_validator("radii", "pole_point", mode="before")
    @classmethod
    def _split_lists(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [item for item in value.replace(",", " ").split() if item]
        return value

    @field_validator("radii")
    @classmethod
    def _positive_radii(cls, value: List[float] | None) -> List[float] | None:
        if value is not None:
            if not value:
                raise ValueError("radii must not be empty")
            if any(not r > 0 for r in value):
                raise ValueError("radii must be positive")
        return value

    @field_validator(*EXPRESSION_FIELDS)
    @classmethod
    def _parses(cls, value: str | None) -> str | None:
        if value is not None:
            try:
                parse_expression(value)
            except ExpressionSyntaxError as exc:
                raise ValueError(str(exc)) from exc
        return value

    @model_validator(mode="after")
    def _consistent(self) -> RunConfig:
        if self.r0 >= self.R:
            raise ValueError(f"r0 = {self.r0} must be below R = {self.R}")
        if self.n is not None and self.n < self.m:
            raise ValueError(f"ambient dimension n = {self.n} is below m = {self.m}")
        for constant, expression in (("b", "w"), ("N_b", "N_w"), ("bound_b", "bound_w")):
            if getattr(self, constant) is not None and getattr(self, expression) is not None:
                raise ValueError(f"give either {constant} or {expression}, not both")
        command = self.command
        if command in (Command.SPECTRUM, Command.COMPARE_SPACE, Command.BALANCE, Command.SIMULATE):
            if self.b is None and self.w is None:
                raise ValueError(f"{command.value} needs a model: b or w")
        if command is Command.INTRINSIC:
            if self.N_b is None and self.N_w is None:
                raise ValueError("intrinsic needs N_b or N_w")
            if self.bound_b is None and self.bound_w is None:
                raise ValueError("intrinsic needs bound_b or bound_w")
            if self.direction is None:
                raise ValueError("intrinsic needs a direction (ge or le)")
        if command is Command.MESH_VERIFY:
            if (self.mesh is None) == (self.generator is None):
                raise ValueError("mesh-verify needs exactly one of mesh or generator")
            if self.m != 2:
                raise ValueError("meshes are surfaces: m must be 2")
        return self

    @property
    def ambient_dim(self) -> int:
        return self.n if self.n is not None else self.m + 1

    @property
    def mesh_radii(self) -> List[float]:
        return list(self.radii) if self.radii else [self.R]


def read_config_file(path: str | Path, command: Command) -> Dict[str, str]:
    """Values of the ``[common]`` and ``[<command>]`` sections; the latter wins.

    Keys may use dashes or underscores, matching the command line flags.

    Raises:
        ValidationError: If the file is missing or malformed.
    """
    source = Path(path)
    if not source.is_file():
        raise ValidationError(f"config file not found: {source}")
    parser = configparser.ConfigParser(interpolation=None)
    # Keys are case sensitive (R, K, N_b).
    parser.optionxform = str
    try:
        parser.read(source, encoding="utf-8")
    except configparser.Error as exc:
        raise ValidationError(f"malformed config file {source}: {exc}") from exc
    values: Dict[str, str] = {}
    for section in ("common", command.value):
        if parser.has_section(section):
            for key, value in parser.items(section):
                values[key.replace("-", "_")] = value
    return values
