"""Built-in parametric surfaces for the mesh verifier.

Every generator returns a :class:`~exit_spectra.mesh.surface_mesh.SurfaceMesh`
whose pole is the vertex at the parameter origin and which contains the
extrinsic ball of radius ``extent`` around the pole. Apart from the disk the
surfaces are sampled on square grids of conformal parameters, so the triangles
are images of right isosceles triangles.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Callable, Tuple

import numpy as np
from scipy.spatial import Delaunay

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.enums import SurfaceTypes
from exit_spectra.exceptions import DomainError
from exit_spectra.factories import SurfaceGeneratorFactory
from exit_spectra.mesh.surface_mesh import SurfaceMesh
from exit_spectra.utils.warning_manager import WarningManager


class SurfaceGeneratorStrategy(ABC):
    """Base class of the parametric surface generators.

    Attributes:
        surface_type (SurfaceTypes): The generated surface.
        shape_parameter (str | None): Keyword of the single shape parameter, if any.
        warning_manager (WarningManager | None): Collects non-fatal warnings.
        logger (logging.Logger): Module logger.
    """

    surface_type: SurfaceTypes
    shape_parameter: str | None = None

    def __init__(self, warning_manager: WarningManager | None = None):
        self.warning_manager = warning_manager
        self.logger = configure_logging(
            module_name=__name__,
            log_file_name="surface_generators",
            log_level=DEBUG,
        )

    @abstractmethod
    def generate(self, edge_length: float, extent: float, **params: float) -> SurfaceMesh:
        """Build the surface.

        Args:
            edge_length: Target edge length near the pole.
            extent: The mesh contains the extrinsic ball of this radius.
            **params: Surface specific shape parameters.
        """
        raise NotImplementedError

    @staticmethod
    def _check(edge_length: float, extent: float) -> None:
        if not edge_length > 0:
            raise DomainError(f"edge length must be positive, got {edge_length}")
        if not extent > 0:
            raise DomainError(f"extent must be positive, got {extent}")
        if extent / edge_length > 2000:
            raise DomainError("requested resolution exceeds 2000 edges per radius")

    def _grid_surface(
        self,
        embed: Callable[[np.ndarray, np.ndarray], np.ndarray],
        a_range: Tuple[int, int],
        b_range: Tuple[int, int],
        step: float,
        periodic_a: int | None = None,
        keep: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
        name: str = "surface",
    ) -> SurfaceMesh:
        """Triangulate the parameter grid a = i*step, b = j*step with one diagonal per cell.

        ``periodic_a`` identifies i with i + periodic_a. ``keep`` filters cells by
        the parameters of their four corners. The pole is the vertex at (0, 0).
        """
        ia = np.arange(a_range[0], a_range[1] + 1)
        jb = np.arange(b_range[0], b_range[1] + 1)
        if periodic_a is not None:
            ia = np.arange(periodic_a)
        na, nb = len(ia), len(jb)
        A, B = np.meshgrid(ia * step, jb * step, indexing="ij")
        points = embed(A.ravel(), B.ravel())

        def index(i: np.ndarray, j: np.ndarray) -> np.ndarray:
            return i * nb + j

        ci, cj = np.meshgrid(
            np.arange(na if periodic_a is not None else na - 1), np.arange(nb - 1), indexing="ij"
        )
        ci, cj = ci.ravel(), cj.ravel()
        ci1 = (ci + 1) % na if periodic_a is not None else ci + 1
        if keep is not None:
            corners_a = np.stack([ia[ci], ia[ci1], ia[ci1], ia[ci]]) * step
            corners_b = np.stack([jb[cj], jb[cj], jb[cj + 1], jb[cj + 1]]) * step
            mask = np.all(keep(corners_a, corners_b), axis=0)
            ci, cj, ci1 = ci[mask], cj[mask], ci1[mask]
        v00, v10 = index(ci, cj), index(ci1, cj)
        v11, v01 = index(ci1, cj + 1), index(ci, cj + 1)
        faces = np.concatenate([np.stack([v00, v10, v11], 1), np.stack([v00, v11, v01], 1)])
        pole = int(index(np.flatnonzero(ia == 0)[0], np.flatnonzero(jb == 0)[0]))
        return _compact(points, faces, pole, name)


def _compact(points: np.ndarray, faces: np.ndarray, pole: int, name: str) -> SurfaceMesh:
    """Drop vertices no face uses and renumber."""
    used = np.unique(faces)
    if pole not in used:
        raise DomainError("the pole is not covered by the generated surface")
    remap = np.full(len(points), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    return SurfaceMesh(points[used], remap[faces], int(remap[pole]), name=name)


@SurfaceGeneratorFactory.register_generator(SurfaceTypes.DISK)
class DiskGenerator(SurfaceGeneratorStrategy):
    """Flat disk of radius ``extent`` in z = 0 from concentric rings, Delaunay triangulated."""

    surface_type = SurfaceTypes.DISK

    def generate(self, edge_length: float, extent: float, **params: float) -> SurfaceMesh:
        self._check(edge_length, extent)
        rings = max(int(math.ceil(extent / edge_length)), 2)
        points = [np.zeros((1, 2))]
        for j in range(1, rings + 1):
            count = 6 * j
            phase = (math.pi / count) * (j % 2)
            theta = phase + 2.0 * math.pi * np.arange(count) / count
            radius = extent * j / rings
            points.append(np.column_stack([radius * np.cos(theta), radius * np.sin(theta)]))
        planar = np.concatenate(points)
        triangulation = Delaunay(planar, qhull_options="QJ Qbb")
        vertices = np.column_stack([planar, np.zeros(len(planar))])
        self.logger.debug(f"Disk with {rings} rings, {len(vertices)} vertices")
        return _compact(vertices, triangulation.simplices.astype(np.int64), 0, "disk")


@SurfaceGeneratorFactory.register_generator(SurfaceTypes.SPHERE_CAP)
class SphereCapGenerator(SurfaceGeneratorStrategy):
    """Cap of the sphere of radius ``sphere_radius`` tangent to z = 0 at the origin.

    The cap is the image of a square grid under the inverse stereographic
    projection from the antipode of the pole.
    """

    surface_type = SurfaceTypes.SPHERE_CAP
    shape_parameter = "sphere_radius"

    def generate(self, edge_length: float, extent: float, **params: float) -> SurfaceMesh:
        self._check(edge_length, extent)
        rho = float(params.get("sphere_radius", 1.0))
        reach = extent + 2.0 * edge_length
        if not reach < 2.0 * rho:
            raise DomainError(
                f"extent {extent:g} plus margin must stay below the sphere diameter {2 * rho:g}"
            )
        # Chord distance from the pole is sqrt(q t) with q = u^2 + v^2.
        q_max = 4.0 * rho**2 * reach**2 / (4.0 * rho**2 - reach**2)
        limit = math.sqrt(q_max)
        n = int(math.ceil(limit / edge_length)) + 1

        def embed(u: np.ndarray, v: np.ndarray) -> np.ndarray:
            t = 4.0 * rho**2 / (u**2 + v**2 + 4.0 * rho**2)
            return np.column_stack([t * u, t * v, -2.0 * rho + 2.0 * rho * t])

        return self._grid_surface(
            embed,
            (-n, n),
            (-n, n),
            edge_length,
            keep=lambda a, b: a**2 + b**2 <= (limit + edge_length) ** 2,
            name="sphere_cap",
        )


@SurfaceGeneratorFactory.register_generator(SurfaceTypes.CATENOID)
class CatenoidGenerator(SurfaceGeneratorStrategy):
    """Catenoid (a cosh v cos theta, a cosh v sin theta, a v); pole on the neck at theta = 0."""

    surface_type = SurfaceTypes.CATENOID
    shape_parameter = "neck_radius"

    def generate(self, edge_length: float, extent: float, **params: float) -> SurfaceMesh:
        self._check(edge_length, extent)
        a = float(params.get("neck_radius", 1.0))
        around = max(int(round(2.0 * math.pi * a / edge_length)), 12)
        step = 2.0 * math.pi / around
        # |x - p| >= a |v|, so |v| <= extent / a covers the ball.
        rows = int(math.ceil(extent / (a * step))) + 2

        def embed(theta: np.ndarray, v: np.ndarray) -> np.ndarray:
            return a * np.column_stack([np.cosh(v) * np.cos(theta), np.cosh(v) * np.sin(theta), v])

        return self._grid_surface(
            embed, (0, around - 1), (-rows, rows), step, periodic_a=around, name="catenoid"
        )


@SurfaceGeneratorFactory.register_generator(SurfaceTypes.HELICOID)
class HelicoidGenerator(SurfaceGeneratorStrategy):
    """Helicoid (c sinh t cos u, c sinh t sin u, c u); pole at the origin on the axis."""

    surface_type = SurfaceTypes.HELICOID
    shape_parameter = "pitch"

    def generate(self, edge_length: float, extent: float, **params: float) -> SurfaceMesh:
        self._check(edge_length, extent)
        c = float(params.get("pitch", 1.0))
        step = edge_length / c
        # |x| >= c |u| and |x| >= c sinh|t|.
        u_rows = int(math.ceil(extent / (c * step))) + 2
        t_rows = int(math.ceil(math.asinh(extent / c) / step)) + 2

        def embed(u: np.ndarray, t: np.ndarray) -> np.ndarray:
            return c * np.column_stack([np.sinh(t) * np.cos(u), np.sinh(t) * np.sin(u), u])

        return self._grid_surface(
            embed, (-u_rows, u_rows), (-t_rows, t_rows), step, name="helicoid"
        )
