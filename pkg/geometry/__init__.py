"""
Geometry of node sets: normals, curvature, boundaries and distances
"""
from .curvature import (
    CurvatureField,
    check_tv_difference,
    curvature,
    curvature_values,
    gamma_limit_check,
    local_minimality_check,
    normal,
    single_flip_tv_change,
    tv_difference,
)
from .distance import (
    boundary,
    boundary_complement,
    boundary_gradient_witness,
    eikonal_residual,
    exterior_boundary,
    graph_distance,
    reduced_boundary,
    signed_distance,
    sigma,
)

__all__ = [
    "CurvatureField",
    "boundary",
    "boundary_complement",
    "boundary_gradient_witness",
    "check_tv_difference",
    "curvature",
    "curvature_values",
    "eikonal_residual",
    "exterior_boundary",
    "gamma_limit_check",
    "graph_distance",
    "local_minimality_check",
    "normal",
    "reduced_boundary",
    "signed_distance",
    "sigma",
    "single_flip_tv_change",
]
