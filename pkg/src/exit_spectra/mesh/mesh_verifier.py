"""Exit-moment hierarchies on extrinsic balls of triangulated surfaces in R^3.

The extrinsic ball D_R(p) is the component through the pole of the part of
the surface inside the Euclidean ball of radius R. It is cut out of the mesh
by clipping edges at |x - p| = R, and the hierarchy

    L u_k = k M u_{k-1},    u_k = 0 on the boundary,

is solved with the cotangent stiffness L and the lumped mass M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.sparse.linalg import splu

from exit_spectra.configs import DEBUG, configure_logging
from exit_spectra.constants import QUAD_REL_TOL
from exit_spectra.core.comparison import Constellation, SpectrumBound, spectrum_bound
from exit_spectra.core.spectrum import (
    DivergenceCheck,
    MomentSpectrum,
    model_spectrum,
    solve_hierarchy,
)
from exit_spectra.enums import BoundSide, ComparisonDirection, Provenance, SurfaceTypes
from exit_spectra.exceptions import DomainError, NumericalError, UsageError
from exit_spectra.factories import SurfaceGeneratorFactory
from exit_spectra.geometry.warp_models import ModelSpace, space_form_warping
from exit_spectra.mesh.surface_mesh import (
    SurfaceMesh,
    cotangent_stiffness,
    face_areas,
    face_normals,
    lumped_mass,
    mixed_areas,
    unique_edges,
)
from exit_spectra.utils.warning_manager import WarningManager

logger = configure_logging(__name__, "mesh_verifier", DEBUG)

# Vertices within this fraction of the mean edge length of the sphere |x - p| = R are moved onto it.
SNAP_FRACTION = 0.1

_INSIDE, _ON, _OUTSIDE = 0, 1, 2


@dataclass(frozen=True)
class ExtrinsicBallMesh:
    """Clipped sub-mesh D_R(p) of a surface mesh.

    Attributes:
        parent (SurfaceMesh): The surface.
        radius (float): R.
        vertices (np.ndarray): (N, 3) nodes: kept parent vertices, then clip points.
        faces (np.ndarray): (F, 3) clipped connectivity.
        pole (int): Node index of p.
        boundary_mask (np.ndarray): True on nodes of boundary edges.
        parent_index (np.ndarray): Parent vertex of each node, -1 for clip points.
        boundary_loops (Tuple[np.ndarray, ...]): Ordered node indices of each boundary loop.
        boundary_length (float): Length of the boundary polyline.
        euler_characteristic (int): V - E + F.
        snapped (int): Parent vertices moved onto the sphere |x - p| = R.
    """

    parent: SurfaceMesh
    radius: float
    vertices: np.ndarray
    faces: np.ndarray
    pole: int
    boundary_mask: np.ndarray
    parent_index: np.ndarray
    boundary_loops: Tuple[np.ndarray, ...]
    boundary_length: float
    euler_characteristic: int
    snapped: int = 0

    @property
    def center(self) -> np.ndarray:
        return self.vertices[self.pole]

    @property
    def distances(self) -> np.ndarray:
        """Extrinsic distance r(x) = |x - p| of every node."""
        return np.linalg.norm(self.vertices - self.center, axis=1)

    @property
    def interior_vertices(self) -> np.ndarray:
        return np.flatnonzero(~self.boundary_mask)

    @property
    def boundary_polyline(self) -> Tuple[np.ndarray, ...]:
        """Coordinates of each boundary loop, in order."""
        return tuple(self.vertices[loop] for loop in self.boundary_loops)


def _clip_parameter(a: np.ndarray, b: np.ndarray, center: np.ndarray, R: float) -> float:
    """t in (0, 1) with |a + t (b - a) - center| = R, for a inside and b outside."""
    e = b - a
    f = a - center
    A = float(e @ e)
    B = float(f @ e)
    C = float(f @ f) - R * R
    return (-B + math.sqrt(max(B * B - A * C, 0.0))) / A


def _boundary_loops(edges: np.ndarray) -> List[np.ndarray]:
    neighbours: Dict[int, List[int]] = {}
    for a, b in edges.tolist():
        neighbours.setdefault(a, []).append(b)
        neighbours.setdefault(b, []).append(a)
    seen = set()
    loops = []
    for start in neighbours:
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        previous, current = None, start
        while True:
            options = [n for n in neighbours[current] if n != previous and n not in seen]
            if not options:
                break
            previous, current = current, options[0]
            seen.add(current)
            loop.append(current)
        loops.append(np.array(loop, dtype=np.int64))
    return loops


def extract_extrinsic_ball(mesh: SurfaceMesh, R: float) -> ExtrinsicBallMesh:
    """Cut D_R(p) out of ``mesh``.

    Faces with a vertex strictly inside the ball are kept; edges leaving the
    ball are clipped at the exact crossing point and the clipped polygons are
    fan triangulated. Vertices within ``SNAP_FRACTION`` of an edge length of
    the sphere are moved onto it, which keeps sliver triangles out of the
    clipped mesh.

    Raises:
        DomainError: If R is not positive or too small for the mesh, if the
            ball is empty, or if it reaches the border of the mesh.
    """
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    R = float(R)
    center = mesh.pole
    X = mesh.vertices
    d = np.linalg.norm(X - center, axis=1)
    snap = SNAP_FRACTION * mesh.edge_length
    if R <= 2.0 * snap:
        raise DomainError(f"R = {R:g} is below the mesh resolution")
    status = np.full(len(X), _OUTSIDE, dtype=np.int8)
    status[d < R - snap] = _INSIDE
    status[np.abs(d - R) <= snap] = _ON
    positions = X.copy()
    on = status == _ON
    positions[on] = center + (X[on] - center) * (R / d[on])[:, None]

    faces = mesh.faces
    face_status = status[faces]
    candidate = np.any(face_status == _INSIDE, axis=1)
    whole = candidate & np.all(face_status != _OUTSIDE, axis=1)
    crossing = candidate & ~whole

    # Nodes are keyed ("v", parent index) or ("c", edge) while polygons are built.
    node_ids: Dict[Tuple, int] = {}
    node_points: List[np.ndarray] = []
    node_parent: List[int] = []

    def vertex_node(i: int) -> int:
        key = ("v", i)
        if key not in node_ids:
            node_ids[key] = len(node_points)
            node_points.append(positions[i])
            node_parent.append(i)
        return node_ids[key]

    def clip_node(i: int, j: int) -> int:
        inner, outer = (i, j) if status[i] == _INSIDE else (j, i)
        key = ("c", min(i, j), max(i, j))
        if key not in node_ids:
            t = _clip_parameter(positions[inner], positions[outer], center, R)
            node_ids[key] = len(node_points)
            node_points.append(positions[inner] + t * (positions[outer] - positions[inner]))
            node_parent.append(-1)
        return node_ids[key]

    triangles: List[Tuple[int, int, int]] = []
    for face in faces[whole].tolist():
        triangles.append(tuple(vertex_node(i) for i in face))
    for face in faces[crossing].tolist():
        polygon: List[int] = []
        for corner in range(3):
            a, b = face[corner], face[(corner + 1) % 3]
            if status[a] != _OUTSIDE:
                polygon.append(vertex_node(a))
            if {int(status[a]), int(status[b])} == {_INSIDE, _OUTSIDE}:
                polygon.append(clip_node(a, b))
        if len(polygon) == 3:
            triangles.append(tuple(polygon))
        elif len(polygon) == 4:
            pts = [node_points[n] for n in polygon]
            if np.linalg.norm(pts[0] - pts[2]) <= np.linalg.norm(pts[1] - pts[3]):
                triangles += [(polygon[0], polygon[1], polygon[2]), (polygon[0], polygon[2], polygon[3])]
            else:
                triangles += [(polygon[1], polygon[2], polygon[3]), (polygon[1], polygon[3], polygon[0])]

    if not triangles or ("v", mesh.pole_vertex) not in node_ids:
        raise DomainError(f"the ball of radius {R:g} contains no face around the pole")
    points = np.array(node_points)
    parent_index = np.array(node_parent, dtype=np.int64)
    tri = np.array(triangles, dtype=np.int64)
    tri = tri[face_areas(points, tri) > 1e-12 * mesh.edge_length**2]

    # Keep the component containing the pole.
    n_nodes = len(points)
    edges, _ = unique_edges(tri)
    graph = sparse.coo_matrix(
        (np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n_nodes, n_nodes)
    )
    _, labels = csgraph.connected_components(graph, directed=False)
    pole_node = node_ids[("v", mesh.pole_vertex)]
    tri = tri[labels[tri[:, 0]] == labels[pole_node]]
    used = np.unique(tri)
    remap = np.full(n_nodes, -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    points, parent_index, tri = points[used], parent_index[used], remap[tri]
    pole = int(remap[pole_node])

    edges, counts = unique_edges(tri)
    boundary_edges = edges[counts == 1]
    boundary_mask = np.zeros(len(points), dtype=bool)
    boundary_mask[boundary_edges.ravel()] = True
    dist = np.linalg.norm(points - points[pole], axis=1)
    off_sphere = np.flatnonzero(boundary_mask & (np.abs(dist - R) > 1e-9 * R))
    if off_sphere.size:
        raise DomainError(
            f"the extrinsic ball of radius {R:g} is not contained in the mesh: "
            f"{off_sphere.size} boundary nodes lie on the mesh border, e.g. at distance "
            f"{dist[off_sphere[0]]:.6g}"
        )
    if boundary_edges.size == 0:
        raise DomainError(f"the extrinsic ball of radius {R:g} has no boundary")
    lengths = np.linalg.norm(points[boundary_edges[:, 0]] - points[boundary_edges[:, 1]], axis=1)
    loops = _boundary_loops(boundary_edges)
    chi = len(points) - len(edges) + len(tri)
    ball = ExtrinsicBallMesh(
        parent=mesh,
        radius=R,
        vertices=points,
        faces=tri,
        pole=pole,
        boundary_mask=boundary_mask,
        parent_index=parent_index,
        boundary_loops=tuple(loops),
        boundary_length=float(lengths.sum()),
        euler_characteristic=int(chi),
        snapped=int(np.count_nonzero(on)),
    )
    logger.debug(
        f"Extracted D_{R:g} from {mesh.name}: {len(points)} nodes, {len(tri)} faces, "
        f"{len(loops)} boundary loops, chi = {chi}"
    )
    return ball


@dataclass(frozen=True)
class DiscreteHierarchy:
    """Solved discrete hierarchy u_0..u_K on an extrinsic ball.

    Attributes:
        ball (ExtrinsicBallMesh): The domain.
        max_order (int): K.
        values (np.ndarray): (K+1, N) nodal values.
        stiffness (sparse.csr_matrix): Cotangent stiffness L.
        mass (np.ndarray): Lumped mass diagonal.
        tolerance (float): Relative residual target of the solves.
        residuals (Tuple[float, ...]): Achieved relative residual per order.
        negative_weights (int): Number of negative cotangent edge weights.
    """

    ball: ExtrinsicBallMesh
    max_order: int
    values: np.ndarray
    stiffness: sparse.csr_matrix = field(repr=False)
    mass: np.ndarray = field(repr=False)
    tolerance: float = 1e-10
    residuals: Tuple[float, ...] = ()
    negative_weights: int = 0

    def at_pole(self, k: int) -> float:
        return float(self.values[k, self.ball.pole])


def solve_discrete_hierarchy(
    ball: ExtrinsicBallMesh,
    K: int,
    tol: float = 1e-10,
    warning_manager: WarningManager | None = None,
) -> DiscreteHierarchy:
    """Solve L u_k = k M u_{k-1} with u_k = 0 on the boundary for k = 1..K.

    Raises:
        DomainError: If K < 1 or no interior node exists.
        NumericalError: If the interior system is singular or a solve misses ``tol``.
    """
    if int(K) != K or K < 1:
        raise DomainError(f"max order must be an integer >= 1, got {K}")
    L = cotangent_stiffness(ball.vertices, ball.faces)
    M = lumped_mass(ball.vertices, ball.faces)
    coo = L.tocoo()
    off = coo.row != coo.col
    scale = float(np.max(np.abs(coo.data))) if coo.nnz else 1.0
    negative = int(np.count_nonzero(coo.data[off] > 1e-14 * scale) // 2)
    if negative:
        _warn(
            warning_manager,
            "mesh_quality",
            f"{negative} negative cotangent weights on D_{ball.radius:g}; "
            "the discrete maximum principle may fail",
        )
    interior = ~ball.boundary_mask
    if not np.any(interior):
        raise DomainError("the extrinsic ball has no interior nodes")
    L_ii = L[interior][:, interior].tocsc()
    L_ib = L[interior][:, ball.boundary_mask]
    n_comp, labels = csgraph.connected_components(L_ii, directed=False)
    touches = np.zeros(n_comp, dtype=bool)
    touches[labels[np.unique(L_ib.tocoo().row)]] = True
    if not np.all(touches):
        raise NumericalError("singular system: an interior component does not reach the boundary")
    try:
        factor = splu(L_ii)
    except RuntimeError as exc:
        raise NumericalError(f"singular stiffness matrix: {exc}") from exc

    n = len(ball.vertices)
    values = np.zeros((int(K) + 1, n))
    values[0] = 1.0
    residuals = [0.0]
    for k in range(1, int(K) + 1):
        rhs = k * (M * values[k - 1])[interior]
        x = factor.solve(rhs)
        # One step of iterative refinement.
        x += factor.solve(rhs - L_ii @ x)
        res = float(np.linalg.norm(L_ii @ x - rhs) / max(np.linalg.norm(rhs), 1e-300))
        if res > tol:
            raise NumericalError(f"solve for u_{k} reached relative residual {res:.3g} > {tol:g}")
        values[k, interior] = x
        residuals.append(res)
        if np.any(x <= 0):
            _warn(
                warning_manager,
                "mesh_quality",
                f"u_{k} is not positive at {int(np.count_nonzero(x <= 0))} interior nodes "
                f"of D_{ball.radius:g}",
            )
    values.setflags(write=False)
    logger.debug(f"Solved discrete hierarchy to order {K} on {n} nodes")
    return DiscreteHierarchy(
        ball=ball,
        max_order=int(K),
        values=values,
        stiffness=L,
        mass=M,
        tolerance=tol,
        residuals=tuple(residuals),
        negative_weights=negative,
    )


def _warn(manager: WarningManager | None, category: str, message: str) -> None:
    if manager is not None:
        manager.log_warning(category, message)
    else:
        logger.warning(message)


def mesh_spectrum(h: DiscreteHierarchy) -> MomentSpectrum:
    """A_hat_k = (u_k^T M 1) / boundary length, k = 0..K.

    Raises:
        DomainError: If the boundary length is zero.
    """
    length = h.ball.boundary_length
    if not length > 0:
        raise DomainError("boundary length is zero")
    raw = h.values @ h.mass
    return MomentSpectrum(
        radius=h.ball.radius,
        values=tuple(float(v) / length for v in raw),
        raw_values=tuple(float(v) for v in raw),
        provenance=Provenance.MESH,
        error_estimates=tuple(h.residuals),
        source=h.ball.parent.name,
    )


def discrete_divergence_residual(h: DiscreteHierarchy, k: int) -> DivergenceCheck:
    """Compare int u_k (through M) with the boundary flux -sum_b (L u_{k+1})_b / (k+1).

    For k >= 1 the two agree to solver precision; for k = 0 they differ by
    the boundary mass, which is O(h).
    """
    if not 0 <= k <= h.max_order - 1:
        raise UsageError(f"divergence residual of order {k} needs u_{k + 1}")
    volume = float(h.mass @ h.values[k])
    flux_rows = h.stiffness @ h.values[k + 1]
    flux = -float(np.sum(flux_rows[h.ball.boundary_mask])) / (k + 1)
    residual = abs(volume - flux) / max(abs(volume), 1e-300)
    return DivergenceCheck(
        volume_side=volume,
        boundary_side=flux,
        residual=residual,
        passed=residual <= max(1e3 * h.tolerance, 1e-8) if k >= 1 else True,
    )


@dataclass(frozen=True)
class HypothesisFields:
    """Per-node estimates of the radial mean curvature C and radial tangency T.

    Nodes that are not computed (boundary and pole) hold NaN.

    Attributes:
        C (np.ndarray): -<grad r, H>.
        T (np.ndarray): |grad^P r|.
        r (np.ndarray): Extrinsic distance of every node.
        valid (np.ndarray): Mask of computed nodes.
    """

    C: np.ndarray
    T: np.ndarray
    r: np.ndarray
    valid: np.ndarray

    @property
    def min_T(self) -> float:
        return float(np.min(self.T[self.valid])) if np.any(self.valid) else math.nan

    @property
    def C_range(self) -> Tuple[float, float]:
        if not np.any(self.valid):
            return (math.nan, math.nan)
        values = self.C[self.valid]
        return (float(values.min()), float(values.max()))

    @property
    def max_abs_C(self) -> float:
        return float(np.max(np.abs(self.C[self.valid]))) if np.any(self.valid) else math.nan


def mean_curvature_vectors(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
    """Discrete normalised mean curvature vector -(L x)_i / (2 A_mixed,i) of a surface."""
    L = cotangent_stiffness(vertices, faces)
    area = mixed_areas(vertices, faces)
    with np.errstate(divide="ignore", invalid="ignore"):
        return -(L @ vertices) / (2.0 * area)[:, None]


def _border_vertices(mesh: SurfaceMesh) -> np.ndarray:
    edges, counts = unique_edges(mesh.faces)
    border = np.zeros(len(mesh.vertices), dtype=bool)
    border[edges[counts == 1].ravel()] = True
    return border


def estimate_hypothesis_fields(ball: ExtrinsicBallMesh) -> HypothesisFields:
    """Estimate C(x) and T(x) at interior nodes other than the pole.

    Both fields are evaluated on the unclipped parent surface, so every
    estimate uses a complete one-ring and the clipped triangles along
    |x - p| = R never enter. Nodes that are clip points, snapped onto the
    sphere or on the border of the parent are left out.

    T averages, with face-area weights, the projections of the ambient
    gradient (x - p)/|x - p| onto the planes of the incident faces.
    """
    parent = ball.parent
    X, F = parent.vertices, parent.faces
    source = ball.parent_index
    origin = np.where(source >= 0, source, 0)
    r_parent = np.linalg.norm(X - parent.pole, axis=1)
    inside = r_parent < ball.radius - SNAP_FRACTION * parent.edge_length

    valid = ~ball.boundary_mask & (source >= 0)
    valid &= inside[origin] & ~_border_vertices(parent)[origin]
    valid[ball.pole] = False

    needed = np.zeros(len(X), dtype=bool)
    needed[source[valid]] = True
    ring = F[np.any(needed[F], axis=1)]
    safe_r = np.where(r_parent > 0, r_parent, 1.0)
    grad = (X - parent.pole) / safe_r[:, None]
    H = mean_curvature_vectors(X, ring)
    C = -np.einsum("ij,ij->i", grad, H)

    normals = face_normals(X, ring)
    areas = 0.5 * np.linalg.norm(normals, axis=1)
    unit = normals / (2.0 * areas)[:, None]
    accum = np.zeros_like(X)
    weight = np.zeros(len(X))
    for corner in range(3):
        idx = ring[:, corner]
        g = grad[idx]
        proj = g - np.einsum("ij,ij->i", g, unit)[:, None] * unit
        np.add.at(accum, idx, areas[:, None] * proj)
        np.add.at(weight, idx, areas)
    T = np.linalg.norm(accum / np.maximum(weight, 1e-300)[:, None], axis=1)

    C_nodes = np.full(len(source), np.nan)
    T_nodes = np.full(len(source), np.nan)
    C_nodes[valid] = C[source[valid]]
    T_nodes[valid] = T[source[valid]]
    return HypothesisFields(C=C_nodes, T=T_nodes, r=ball.distances, valid=valid)


@dataclass(frozen=True)
class BoundSuggestion:
    """Constants and envelopes a constellation for the mesh can be built from.

    Attributes:
        h_lower (float): Largest constant h_1 with h_1 <= C on the samples.
        h_upper (float): Smallest constant h_2 with h_2 >= C on the samples.
        bin_edges (np.ndarray): Radial bin edges on [0, R].
        tangency_envelope (np.ndarray): Minimum sampled T per bin (NaN when empty).
    """

    h_lower: float
    h_upper: float
    bin_edges: np.ndarray
    tangency_envelope: np.ndarray


def suggest_bounds(fields: HypothesisFields, radius: float, bins: int = 8) -> BoundSuggestion:
    """Sampled bounds from the hypothesis fields; diagnostics, not certificates."""
    lower, upper = fields.C_range
    edges = np.linspace(0.0, radius, bins + 1)
    envelope = np.full(bins, np.nan)
    r, T = fields.r[fields.valid], fields.T[fields.valid]
    which = np.clip(np.searchsorted(edges, r, side="right") - 1, 0, bins - 1)
    for b in range(bins):
        sel = which == b
        if np.any(sel):
            envelope[b] = float(T[sel].min())
    return BoundSuggestion(h_lower=lower, h_upper=upper, bin_edges=edges, tangency_envelope=envelope)


@dataclass(frozen=True)
class TransplantResult:
    """Extreme of u_k - v_k over the nodes, v_k the transplanted model profile."""

    k: int
    extreme: float
    scale: float
    holds: bool


def transplant_check(
    h: DiscreteHierarchy,
    constellation: Constellation,
    K: int | None = None,
    rel_tol: float = 0.02,
) -> Tuple[TransplantResult, ...]:
    """Compare mesh solutions u_k with v_k = u^W_k(s(r(x))).

    Below, v_k <= u_k is expected (extreme = min of u_k - v_k >= -tol);
    above, v_k >= u_k (extreme = max of u_k - v_k <= tol). The tolerance is
    ``rel_tol`` times max v_k.
    """
    K = h.max_order if K is None else int(K)
    if not 1 <= K <= h.max_order:
        raise UsageError(f"transplant check needs 1 <= K <= {h.max_order}")
    if not math.isclose(constellation.radius, h.ball.radius, rel_tol=1e-12):
        raise UsageError("constellation radius differs from the ball radius")
    cs = constellation.comparison
    profiles = solve_hierarchy(cs.as_model, cs.s_max, K, cs.tolerance)
    r = np.minimum(h.ball.distances, constellation.radius)
    s = np.minimum(cs.stretch.forward(r), cs.s_max)
    results = []
    for k in range(1, K + 1):
        v = profiles.value(k, s)
        diff = h.values[k] - v
        scale = float(np.max(np.abs(v)))
        band = rel_tol * scale
        if constellation.side is BoundSide.BELOW:
            extreme = float(np.min(diff))
            holds = extreme >= -band
        else:
            extreme = float(np.max(diff))
            holds = extreme <= band
        results.append(TransplantResult(k=k, extreme=extreme, scale=scale, holds=holds))
    return tuple(results)


def euclidean_disk_model() -> ModelSpace:
    return ModelSpace(dim=2, warping=space_form_warping(0.0))


def calibrate_mesh_tolerance(
    edge_length: float,
    R: float,
    K: int = 3,
    floor: float = 1e-3,
) -> float:
    """Twice the largest relative flat-disk error at this resolution, floored.

    The disk is generated with the same edge length and radius 1.25 R, so the
    measured error includes the clipping of the boundary.
    """
    disk = SurfaceGeneratorFactory.get_generator(SurfaceTypes.DISK).generate(edge_length, 1.25 * R)
    hierarchy = solve_discrete_hierarchy(extract_extrinsic_ball(disk, R), K + 1)
    mesh = mesh_spectrum(hierarchy)
    model = model_spectrum(euclidean_disk_model(), R, K)
    errors = [abs(a - b) / b for a, b in zip(mesh.values[: K + 1], model.values)]
    tolerance = max(2.0 * max(errors), floor)
    logger.debug(f"Calibrated mesh tolerance {tolerance:.3g} at edge length {edge_length:g}")
    return tolerance


@dataclass(frozen=True)
class MeshVerdict:
    """Mesh value against its bound for one order."""

    k: int
    value: float
    bound: float
    relative_margin: float
    holds: bool
    near_equality: bool


def compare_with_bound(
    spectrum: MomentSpectrum, bound: SpectrumBound, mesh_tol: float
) -> Tuple[MeshVerdict, ...]:
    """Verdicts A_hat_k(D_R) <= bound (1 + mesh_tol) above, >= bound (1 - mesh_tol) below."""
    verdicts = []
    for k, (value, ref) in enumerate(zip(spectrum.values, bound.spectrum.values)):
        rel = (value - ref) / ref
        if bound.direction is ComparisonDirection.LE:
            holds = rel <= mesh_tol
            margin = -rel
        else:
            holds = rel >= -mesh_tol
            margin = rel
        verdicts.append(
            MeshVerdict(
                k=k,
                value=value,
                bound=ref,
                relative_margin=margin,
                holds=holds,
                near_equality=abs(rel) <= mesh_tol,
            )
        )
    return tuple(verdicts)


@dataclass(frozen=True)
class MeshBallResult:
    """Everything verified on one extrinsic ball."""

    ball: ExtrinsicBallMesh
    hierarchy: DiscreteHierarchy
    spectrum: MomentSpectrum
    bound: SpectrumBound
    verdicts: Tuple[MeshVerdict, ...]
    fields: HypothesisFields
    suggestion: BoundSuggestion
    transplant: Tuple[TransplantResult, ...]
    divergence: Tuple[DivergenceCheck, ...]

    @property
    def passed(self) -> bool:
        return all(v.holds for v in self.verdicts)


def verify_extrinsic_ball(
    mesh: SurfaceMesh,
    constellation: Constellation,
    K: int,
    mesh_tol: float,
    tol: float = QUAD_REL_TOL,
    warning_manager: WarningManager | None = None,
) -> MeshBallResult:
    """Extract D_R, solve to order K+1 and compare A_hat_0..A_hat_K with the bound."""
    ball = extract_extrinsic_ball(mesh, constellation.radius)
    if ball.euler_characteristic != 1:
        _warn(
            warning_manager,
            "topology",
            f"D_{ball.radius:g} has Euler characteristic {ball.euler_characteristic}, not a disk",
        )
    hierarchy = solve_discrete_hierarchy(ball, K + 1, warning_manager=warning_manager)
    spectrum = mesh_spectrum(hierarchy)
    truncated = MomentSpectrum(
        radius=spectrum.radius,
        values=spectrum.values[: K + 1],
        raw_values=spectrum.raw_values[: K + 1],
        provenance=spectrum.provenance,
        error_estimates=spectrum.error_estimates[: K + 1],
        source=spectrum.source,
    )
    bound = spectrum_bound(constellation, K, tol)
    fields = estimate_hypothesis_fields(ball)
    return MeshBallResult(
        ball=ball,
        hierarchy=hierarchy,
        spectrum=truncated,
        bound=bound,
        verdicts=compare_with_bound(truncated, bound, mesh_tol),
        fields=fields,
        suggestion=suggest_bounds(fields, ball.radius),
        transplant=transplant_check(hierarchy, constellation, max(K, 1)),
        divergence=tuple(discrete_divergence_residual(hierarchy, k) for k in range(K + 1)),
    )
