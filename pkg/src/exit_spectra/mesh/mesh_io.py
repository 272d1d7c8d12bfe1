"""Reading and writing OFF and OBJ surface meshes through trimesh.

trimesh builds the arrays and writes the files. A syntax scan runs first so
that malformed input is reported with the line it occurs on, and hands
trimesh a normalised text holding vertex and face records only. Faces must
all be triangles or all be quads; quads are split in two by trimesh.
"""

from __future__ import annotations

from io import BytesIO
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np
import trimesh
from numpy.typing import ArrayLike

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.enums import MeshFormat
from exit_spectra.exceptions import MeshParseError, ValidationError
from exit_spectra.mesh.surface_mesh import SurfaceMesh, nearest_vertex
from exit_spectra.utils.utilities import Utilities
from exit_spectra.utils.warning_manager import WarningManager

logger = configure_logging(__name__, "mesh_io", DEBUG)

# Fixed decimals written per coordinate.
EXPORT_DIGITS = 17

POLYGON_SIZES = (3, 4)


def _records(text: str) -> List[Tuple[int, List[str]]]:
    """Non-empty lines with comments removed, as (line number, tokens)."""
    records = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            records.append((number, line.split()))
    return records


def _numbers(tokens: Sequence[str], line_number: int, what: str, kind: type) -> list:
    try:
        return [kind(t) for t in tokens]
    except ValueError as exc:
        raise MeshParseError(f"invalid {what}: {' '.join(tokens)}", line_number) from exc


class _FaceScan:
    """Polygon size and vertex usage bookkeeping shared by both formats."""

    def __init__(self, vertex_lines: List[int]) -> None:
        self.vertex_lines = vertex_lines
        self.used = np.zeros(len(vertex_lines), dtype=bool)
        self.size: int | None = None

    def add(self, polygon: List[int], line_number: int) -> None:
        if len(polygon) not in POLYGON_SIZES:
            raise MeshParseError(
                f"face has {len(polygon)} vertices; only triangles and quads are supported",
                line_number,
            )
        if self.size is None:
            self.size = len(polygon)
        elif len(polygon) != self.size:
            raise MeshParseError(
                f"face has {len(polygon)} vertices after faces with {self.size}; "
                "mixed polygon sizes are not supported",
                line_number,
            )
        self.used[polygon] = True

    def check_usage(self) -> None:
        unused = np.flatnonzero(~self.used)
        if unused.size:
            raise MeshParseError(
                f"vertex {int(unused[0])} is not used by any face", self.vertex_lines[unused[0]]
            )


def _load_arrays(text: str, file_type: str, **kwargs) -> Tuple[np.ndarray, np.ndarray]:
    surface = trimesh.load_mesh(
        BytesIO(text.encode("utf-8")), file_type=file_type, process=False, **kwargs
    )
    if not isinstance(surface, trimesh.Trimesh):
        raise MeshParseError(f"{file_type.upper()} data did not load as one triangle mesh", 1)
    vertices = np.array(surface.vertices, dtype=float).reshape(-1, 3)
    faces = np.array(surface.faces, dtype=np.int64).reshape(-1, 3)
    return vertices, faces


def parse_off(text: str) -> Tuple[np.ndarray, np.ndarray]:
    """Parse OFF text into vertex and face arrays.

    Raises:
        MeshParseError: With the one based line number of the problem.
    """
    records = _records(text)
    if not records:
        raise MeshParseError("empty file", 1)
    number, tokens = records[0]
    if tokens[0] != "OFF":
        raise MeshParseError(f"expected OFF header, found {tokens[0]!r}", number)
    # The counts may follow the header on the same line.
    rest = records[1:]
    if len(tokens) > 1:
        counts_line, counts = number, tokens[1:]
    else:
        if not rest:
            raise MeshParseError("missing vertex and face counts", number + 1)
        (counts_line, counts), rest = rest[0], rest[1:]
    if len(counts) < 2:
        raise MeshParseError("expected vertex and face counts", counts_line)
    n_vertices, n_faces = _numbers(counts[:2], counts_line, "counts", int)
    if n_vertices < 0 or n_faces < 0:
        raise MeshParseError("negative element count", counts_line)
    if len(rest) < n_vertices + n_faces:
        last = rest[-1][0] if rest else counts_line
        raise MeshParseError(
            f"expected {n_vertices} vertices and {n_faces} faces, file ends early", last + 1
        )
    lines = ["OFF", f"{n_vertices} {n_faces} 0"]
    for number, tokens in rest[:n_vertices]:
        if len(tokens) < 3:
            raise MeshParseError("vertex needs three coordinates", number)
        _numbers(tokens[:3], number, "vertex", float)
        lines.append(" ".join(tokens[:3]))
    scan = _FaceScan([number for number, _ in rest[:n_vertices]])
    for number, tokens in rest[n_vertices : n_vertices + n_faces]:
        size = _numbers(tokens[:1], number, "face size", int)[0]
        if size < 3 or len(tokens) < size + 1:
            raise MeshParseError(f"face declares {size} vertices, found {len(tokens) - 1}", number)
        polygon = _numbers(tokens[1 : size + 1], number, "face", int)
        if any(i < 0 or i >= n_vertices for i in polygon):
            raise MeshParseError(f"face index out of range 0..{n_vertices - 1}", number)
        scan.add(polygon, number)
        lines.append(" ".join([str(size)] + tokens[1 : size + 1]))
    scan.check_usage()
    return _load_arrays("\n".join(lines) + "\n", "off")


def parse_obj(
    text: str, warning_manager: WarningManager | None = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Parse the ``v`` and ``f`` records of OBJ text; other records are skipped with a warning.

    Face entries may use the ``v/vt/vn`` form and negative (relative) indices.

    Raises:
        MeshParseError: With the one based line number of the problem.
    """
    vertex_lines: List[int] = []
    lines: List[str] = []
    faces: List[Tuple[int, List[int]]] = []
    skipped: Dict[str, int] = {}
    for number, tokens in _records(text):
        kind = tokens[0]
        if kind == "v":
            if len(tokens) < 4:
                raise MeshParseError("vertex needs three coordinates", number)
            _numbers(tokens[1:4], number, "vertex", float)
            vertex_lines.append(number)
            lines.append("v " + " ".join(tokens[1:4]))
        elif kind == "f":
            if len(tokens) < 4:
                raise MeshParseError("face needs at least three vertices", number)
            polygon = []
            for entry in tokens[1:]:
                index = _numbers([entry.split("/", 1)[0]], number, "face", int)[0]
                if index == 0:
                    raise MeshParseError("OBJ indices start at 1", number)
                resolved = index - 1 if index > 0 else len(vertex_lines) + index
                if not 0 <= resolved < len(vertex_lines):
                    raise MeshParseError(f"face index {index} refers to a missing vertex", number)
                polygon.append(resolved)
            faces.append((number, polygon))
        else:
            skipped[kind] = skipped.get(kind, 0) + 1
    scan = _FaceScan(vertex_lines)
    for number, polygon in faces:
        scan.add(polygon, number)
        lines.append("f " + " ".join(str(i + 1) for i in polygon))
    scan.check_usage()
    if skipped:
        message = "ignored OBJ records: " + ", ".join(f"{k} x{n}" for k, n in sorted(skipped.items()))
        if warning_manager is not None:
            warning_manager.log_warning("mesh_format", message)
        else:
            logger.warning(message)
    return _load_arrays("\n".join(lines) + "\n", "obj", maintain_order=True)


def load_mesh(
    path: str | Path,
    mesh_format: MeshFormat | None = None,
    pole_vertex: int | None = None,
    pole_point: ArrayLike | None = None,
    warning_manager: WarningManager | None = None,
) -> SurfaceMesh:
    """Load and validate a surface mesh.

    Args:
        path: OFF or OBJ file.
        mesh_format: Format; inferred from the suffix when omitted.
        pole_vertex: Index of the pole.
        pole_point: Alternatively a point; the nearest vertex becomes the pole.
        warning_manager: Collects warnings about skipped records.

    Returns:
        SurfaceMesh: Validated mesh. Without a pole selection, vertex 0 is the pole.

    Raises:
        MeshParseError: On syntax errors, with the line number.
        ValidationError: On non-manifold or degenerate meshes, or a bad pole.
    """
    source = Path(path)
    if mesh_format is None:
        try:
            mesh_format = MeshFormat(source.suffix.lower().lstrip("."))
        except ValueError as exc:
            raise ValidationError(f"cannot infer mesh format from {source.name!r}") from exc
    if not source.is_file():
        raise ValidationError(f"mesh file not found: {source}")
    text = source.read_text(encoding="utf-8")
    if mesh_format is MeshFormat.OFF:
        vertices, faces = parse_off(text)
    else:
        vertices, faces = parse_obj(text, warning_manager)
    if pole_vertex is not None and pole_point is not None:
        raise ValidationError("select the pole by index or by point, not both")
    pole = 0
    if pole_vertex is not None:
        pole = int(pole_vertex)
    elif pole_point is not None and len(vertices):
        pole = nearest_vertex(vertices, pole_point)
    mesh = SurfaceMesh(vertices, faces, pole, name=source.stem)
    logger.debug(f"Loaded {source.name}: {len(vertices)} vertices, {len(faces)} faces")
    return mesh


def _export(mesh: SurfaceMesh, file_type: str, **kwargs) -> str:
    surface = trimesh.Trimesh(vertices=mesh.vertices, faces=mesh.faces, process=False)
    return surface.export(file_type=file_type, digits=EXPORT_DIGITS, **kwargs)


def save_off(mesh: SurfaceMesh, path: str | Path) -> Path:
    """Write ``mesh`` as OFF."""
    return Utilities.atomic_write_text(path, _export(mesh, "off"))


def save_obj(mesh: SurfaceMesh, path: str | Path) -> Path:
    """Write ``mesh`` as OBJ, vertex and face records only."""
    return Utilities.atomic_write_text(
        path,
        _export(mesh, "obj", include_normals=False, include_color=False, include_texture=False),
    )
