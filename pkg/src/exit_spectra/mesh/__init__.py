from .surface_mesh import (
    SurfaceMesh,
    cotangent_stiffness,
    face_areas,
    lumped_mass,
    mean_edge_length,
    mixed_areas,
    nearest_vertex,
    unique_edges,
    validate_surface,
)
from .mesh_io import load_mesh, parse_obj, parse_off, save_obj, save_off
from .mesh_verifier import (
    BoundSuggestion,
    DiscreteHierarchy,
    ExtrinsicBallMesh,
    HypothesisFields,
    MeshBallResult,
    MeshVerdict,
    TransplantResult,
    calibrate_mesh_tolerance,
    compare_with_bound,
    discrete_divergence_residual,
    estimate_hypothesis_fields,
    extract_extrinsic_ball,
    mean_curvature_vectors,
    mesh_spectrum,
    solve_discrete_hierarchy,
    suggest_bounds,
    transplant_check,
    verify_extrinsic_ball,
)
