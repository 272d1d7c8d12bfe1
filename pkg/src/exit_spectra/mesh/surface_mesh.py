"""Triangulated surfaces in R^3 and their geometric building blocks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import sparse
import trimesh

from exit_spectra.exceptions import DomainError, ValidationError

# Faces whose area is below this fraction of the squared mean edge length are degenerate.
DEGENERATE_AREA_FRACTION = 1e-12


def face_normals(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Unnormalised normals; their norm is twice the face area."""
    p0, p1, p2 = (vertices[faces[:, i]] for i in range(3))
    return np.cross(p1 - p0, p2 - p0)


def face_areas(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    return 0.5 * np.linalg.norm(face_normals(vertices, faces), axis=1)


def unique_edges(faces: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted undirected edges and the number of faces bordering each."""
    edges = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    edges = np.sort(edges, axis=1)
    unique, counts = np.unique(edges, axis=0, return_counts=True)
    return unique, counts


def mean_edge_length(vertices: np.ndarray, faces: np.ndarray) -> float:
    edges, _ = unique_edges(faces)
    return float(np.mean(np.linalg.norm(vertices[edges[:, 0]] - vertices[edges[:, 1]], axis=1)))


def validate_surface(vertices: np.ndarray, faces: np.ndarray) -> None:
    """Check indices, coincident vertices, degenerate and repeated faces, and manifold edges.

    Raises:
        ValidationError: Listing (up to ten of) the offending vertices, faces or edges.
    """
    if vertices.ndim != 2 or vertices.shape[1] != 3:
        raise ValidationError(f"vertices must have shape (V, 3), got {vertices.shape}")
    if faces.ndim != 2 or faces.shape[1] != 3 or faces.shape[0] == 0:
        raise ValidationError(f"faces must have shape (F, 3) with F > 0, got {faces.shape}")
    if not np.all(np.isfinite(vertices)):
        raise ValidationError("vertex coordinates must be finite")
    out_of_range = np.flatnonzero(np.any((faces < 0) | (faces >= len(vertices)), axis=1))
    if out_of_range.size:
        raise ValidationError(f"faces reference missing vertices: {out_of_range[:10].tolist()}")
    repeated_corner = np.flatnonzero(
        (faces[:, 0] == faces[:, 1]) | (faces[:, 1] == faces[:, 2]) | (faces[:, 0] == faces[:, 2])
    )
    if repeated_corner.size:
        raise ValidationError(f"faces repeat a vertex: {repeated_corner[:10].tolist()}")
    surface = trimesh.Trimesh(vertices=vertices, faces=faces, process=False, validate=False)
    _, inverse = trimesh.grouping.unique_rows(vertices)
    shared = np.flatnonzero(np.bincount(inverse)[inverse] > 1)
    if shared.size:
        raise ValidationError(f"coincident vertices: {shared[:10].tolist()}")
    kept, _ = trimesh.grouping.unique_rows(np.sort(faces, axis=1))
    repeated = np.setdiff1d(np.arange(len(faces)), kept)
    if repeated.size:
        raise ValidationError(f"repeated faces: {repeated[:10].tolist()}")
    scale = float(np.mean(surface.edges_unique_length)) ** 2
    degenerate = np.flatnonzero(surface.area_faces <= DEGENERATE_AREA_FRACTION * scale)
    if degenerate.size:
        raise ValidationError(f"degenerate (zero-area) faces: {degenerate[:10].tolist()}")
    counts = np.bincount(surface.edges_unique_inverse)
    bad = surface.edges_unique[counts > 2]
    if bad.size:
        raise ValidationError(
            f"non-manifold edges (more than two faces): {[tuple(e) for e in bad[:10].tolist()]}"
        )


@dataclass(frozen=True)
class SurfaceMesh:
    """Triangulated surface in R^3 with a marked pole.

    Attributes:
        vertices (np.ndarray): (V, 3) coordinates, read-only.
        faces (np.ndarray): (F, 3) vertex indices, read-only.
        pole_vertex (int): Index of the pole p.
        name (str): Identifier for reports.
    """

    vertices: np.ndarray
    faces: np.ndarray
    pole_vertex: int
    name: str = "mesh"

    def __post_init__(self) -> None:
        vertices = np.array(self.vertices, dtype=float)
        faces = np.array(self.faces, dtype=np.int64)
        validate_surface(vertices, faces)
        if not 0 <= int(self.pole_vertex) < len(vertices):
            raise ValidationError(f"pole vertex {self.pole_vertex} is not a valid index")
        vertices.setflags(write=False)
        faces.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "pole_vertex", int(self.pole_vertex))

    @property
    def pole(self) -> np.ndarray:
        return self.vertices[self.pole_vertex]

    @property
    def edge_length(self) -> float:
        return mean_edge_length(self.vertices, self.faces)

    def with_pole(self, pole_vertex: int) -> SurfaceMesh:
        return SurfaceMesh(self.vertices, self.faces, pole_vertex, self.name)

    def transformed(self, rotation: ArrayLike, translation: ArrayLike) -> SurfaceMesh:
        """Image under the rigid motion x -> rotation @ x + translation."""
        rot = np.asarray(rotation, dtype=float)
        shift = np.asarray(translation, dtype=float)
        return SurfaceMesh(self.vertices @ rot.T + shift, self.faces, self.pole_vertex, self.name)

    def quality(self) -> Dict[str, float]:
        """Counts and edge-length statistics for reports."""
        edges, _ = unique_edges(self.faces)
        lengths = np.linalg.norm(self.vertices[edges[:, 0]] - self.vertices[edges[:, 1]], axis=1)
        return {
            "vertices": int(len(self.vertices)),
            "faces": int(len(self.faces)),
            "edge_length_min": float(lengths.min()),
            "edge_length_mean": float(lengths.mean()),
            "edge_length_max": float(lengths.max()),
        }


def nearest_vertex(vertices: np.ndarray, point: ArrayLike) -> int:
    """Index of the vertex closest to ``point``."""
    target = np.asarray(point, dtype=float)
    if target.shape != (3,):
        raise DomainError(f"pole point must have three coordinates, got {target.shape}")
    return int(np.argmin(np.linalg.norm(vertices - target, axis=1)))


def cotangent_weights(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Cotangents of the three corner angles of every face, shape (F, 3)."""
    cot = np.empty((len(faces), 3))
    for corner in range(3):
        a = vertices[faces[:, corner]]
        b = vertices[faces[:, (corner + 1) % 3]]
        c = vertices[faces[:, (corner + 2) % 3]]
        u, v = b - a, c - a
        cot[:, corner] = np.einsum("ij,ij->i", u, v) / np.linalg.norm(np.cross(u, v), axis=1)
    return cot


def cotangent_stiffness(vertices: np.ndarray, faces: np.ndarray) -> sparse.csr_matrix:
    """Cotangent stiffness L with L_ij = -(cot a_ij + cot b_ij)/2 and zero row sums.

    L is symmetric positive semidefinite; ``L @ f`` approximates
    -int (Laplacian f) phi_i.
    """
    n = len(vertices)
    cot = cotangent_weights(vertices, faces)
    rows: List[np.ndarray] = []
    cols: List[np.ndarray] = []
    data: List[np.ndarray] = []
    for corner in range(3):
        # The angle at `corner` is opposite the edge joining the other two corners.
        i = faces[:, (corner + 1) % 3]
        j = faces[:, (corner + 2) % 3]
        weight = 0.5 * cot[:, corner]
        rows += [i, j, i, j]
        cols += [j, i, i, j]
        data += [-weight, -weight, weight, weight]
    matrix = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    return matrix.tocsr()


def lumped_mass(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Barycentric lumped mass: a third of each incident face area."""
    areas = face_areas(vertices, faces)
    mass = np.zeros(len(vertices))
    for corner in range(3):
        np.add.at(mass, faces[:, corner], areas / 3.0)
    return mass


def mixed_areas(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Mixed Voronoi areas: Voronoi regions on non-obtuse faces, area splits on obtuse ones."""
    cot = cotangent_weights(vertices, faces)
    areas = face_areas(vertices, faces)
    obtuse_corner = cot < 0
    obtuse_face = np.any(obtuse_corner, axis=1)
    result = np.zeros(len(vertices))
    for corner in range(3):
        i = faces[:, corner]
        j = faces[:, (corner + 1) % 3]
        k = faces[:, (corner + 2) % 3]
        e_ij = np.sum((vertices[j] - vertices[i]) ** 2, axis=1)
        e_ik = np.sum((vertices[k] - vertices[i]) ** 2, axis=1)
        # Edge ij is opposite corner k, edge ik opposite corner j.
        voronoi = (e_ij * cot[:, (corner + 2) % 3] + e_ik * cot[:, (corner + 1) % 3]) / 8.0
        share = np.where(
            obtuse_face,
            np.where(obtuse_corner[:, corner], areas / 2.0, areas / 4.0),
            voronoi,
        )
        np.add.at(result, i, share)
    return result
