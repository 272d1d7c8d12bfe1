import numpy as np
import pytest

from exit_spectra.enums import MeshFormat
from exit_spectra.exceptions import DomainError, MeshParseError, ValidationError
from exit_spectra.mesh import SurfaceMesh, load_mesh, parse_obj, parse_off, save_obj, save_off
from exit_spectra.utils import CustomWarning

SQUARE_OFF = """OFF
# unit square
4 2 0
0 0 0
1 0 0
1 1 0
0 1 0
3 0 1 2
3 0 2 3
"""

SQUARE_OBJ = """# unit square
o square
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
vn 0 0 1
f 1//1 2//1 3//1
f -4 -2 -1
"""


def square() -> SurfaceMesh:
    vertices, faces = parse_off(SQUARE_OFF)
    return SurfaceMesh(vertices, faces, 0, name="square")


def test_parse_off():
    vertices, faces = parse_off(SQUARE_OFF)
    assert vertices.shape == (4, 3)
    np.testing.assert_array_equal(faces, [[0, 1, 2], [0, 2, 3]])


def test_parse_off_counts_on_header_line_and_polygons():
    vertices, faces = parse_off("OFF 4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n")
    assert len(vertices) == 4
    # the quad is split along its 0-2 diagonal
    assert sorted(map(tuple, np.sort(faces, axis=1).tolist())) == [(0, 1, 2), (0, 2, 3)]


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("PLY\n", 1),
        ("OFF\n4 2\n0 0 0\n1 0 0\n1 1\n0 1 0\n3 0 1 2\n3 0 2 3\n", 5),
        ("OFF\n3 1\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n", 6),
        ("OFF\n3 1\n0 0 0\n1 0 0\n0 1 0\n3 0 1\n", 6),
        ("OFF\n3 1\n0 0 0\n1 0 x\n0 1 0\n3 0 1 2\n", 4),
        ("OFF\n3 2\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n", 7),
        ("OFF\n4 1\n0 0 0\n1 0 0\n0 1 0\n5 5 5\n3 0 1 2\n", 6),
        ("OFF\n5 1\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n1 2 0\n5 0 1 4 2 3\n", 8),
        ("OFF\n5 2\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n2 2 0\n3 0 1 2\n4 1 4 2 3\n", 9),
    ],
)
def test_parse_off_errors_carry_line_numbers(text, line):
    with pytest.raises(MeshParseError) as info:
        parse_off(text)
    assert info.value.line_number == line


def test_parse_obj_skips_other_records(warning_manager):
    with pytest.warns(CustomWarning):
        vertices, faces = parse_obj(SQUARE_OBJ, warning_manager)
    assert vertices.shape == (4, 3)
    np.testing.assert_array_equal(faces, [[0, 1, 2], [0, 2, 3]])
    assert warning_manager.by_category() == {"mesh_format": 1}
    assert "vn x1" in warning_manager.warnings[0].message


@pytest.mark.parametrize(
    "text, line",
    [
        ("v 0 0\n", 1),
        ("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2\n", 4),
        ("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n", 4),
        ("v 0 0 0\nv 1 0 0\nv 0 1 0\n\nf 1 2 4\n", 5),
        ("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nf 1 2 3\n", 4),
    ],
)
def test_parse_obj_errors_carry_line_numbers(text, line):
    with pytest.raises(MeshParseError) as info:
        parse_obj(text)
    assert info.value.line_number == line


def test_surface_mesh_is_read_only():
    mesh = square()
    with pytest.raises(ValueError):
        mesh.vertices[0, 0] = 5.0
    assert mesh.edge_length > 0
    assert mesh.quality()["faces"] == 2


@pytest.mark.parametrize(
    "faces, message",
    [
        ([[0, 1, 2], [2, 1, 0]], "repeated faces"),
        ([[0, 1, 1]], "repeat a vertex"),
        ([[0, 1, 9]], "missing vertices"),
        ([[0, 1, 4]], "degenerate"),
        ([[0, 1, 2], [0, 1, 3], [0, 1, 5]], "non-manifold"),
    ],
)
def test_invalid_surfaces(faces, message):
    vertices = np.array(
        [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [2, 0, 0], [0, -1, 0]], dtype=float
    )
    with pytest.raises(ValidationError, match=message):
        SurfaceMesh(vertices, np.array(faces), 0)


def test_coincident_vertices_are_rejected():
    # vertex 4 repeats vertex 2, leaving a crack between the two faces
    vertices = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0], [1, 1, 0]], dtype=float)
    with pytest.raises(ValidationError, match=r"coincident vertices: \[2, 4\]"):
        SurfaceMesh(vertices, np.array([[0, 1, 2], [0, 4, 3]]), 0)


def test_invalid_pole():
    vertices, faces = parse_off(SQUARE_OFF)
    with pytest.raises(ValidationError):
        SurfaceMesh(vertices, faces, 4)


@pytest.mark.parametrize("fmt, save", [(MeshFormat.OFF, save_off), (MeshFormat.OBJ, save_obj)])
def test_save_and_load(tmp_path, fmt, save):
    mesh = square().transformed(np.eye(3), [0.1, 1 / 3, -2.0])
    path = save(mesh, tmp_path / f"square.{fmt.value}")
    loaded = load_mesh(path, pole_vertex=2)
    np.testing.assert_allclose(loaded.vertices, mesh.vertices, rtol=0, atol=1e-15)
    np.testing.assert_array_equal(loaded.faces, mesh.faces)
    assert loaded.pole_vertex == 2
    assert loaded.name == "square"


def test_load_with_pole_point(tmp_path):
    path = tmp_path / "square.off"
    path.write_text(SQUARE_OFF, encoding="utf-8")
    assert load_mesh(path, pole_point=[0.9, 0.95, 0.1]).pole_vertex == 2
    assert load_mesh(path).pole_vertex == 0
    with pytest.raises(ValidationError):
        load_mesh(path, pole_vertex=1, pole_point=[0, 0, 0])
    with pytest.raises(DomainError):
        load_mesh(path, pole_point=[0, 0])


def test_load_errors(tmp_path):
    with pytest.raises(ValidationError):
        load_mesh(tmp_path / "missing.off")
    other = tmp_path / "square.stl"
    other.write_text(SQUARE_OFF, encoding="utf-8")
    with pytest.raises(ValidationError):
        load_mesh(other)
    loaded = load_mesh(other, mesh_format=MeshFormat.OFF)
    assert len(loaded.faces) == 2
