"""
Core graph types, the (q, r) calculus, settings and errors
"""
from .calculus import (
    balanced_cut,
    clustering_coefficient,
    clustering_identity,
    coarea_tv,
    dirichlet_energy,
    divergence,
    gradient,
    inner_e,
    inner_v,
    laplacian_apply,
    mass,
    norm_e,
    norm_v,
    norm_v_inf,
    one_laplacian,
    phi_tv,
    ratio_cut,
    tv_anisotropic,
    tv_isotropic,
    tv_max_formulation,
    tv_set,
)
from .graph import Graph, NodeSet, build_graph
from .settings import Settings, load_settings, settings

__all__ = [
    "Graph",
    "NodeSet",
    "Settings",
    "balanced_cut",
    "ratio_cut",
    "build_graph",
    "clustering_coefficient",
    "clustering_identity",
    "coarea_tv",
    "dirichlet_energy",
    "divergence",
    "gradient",
    "inner_e",
    "inner_v",
    "laplacian_apply",
    "load_settings",
    "mass",
    "norm_e",
    "norm_v",
    "norm_v_inf",
    "one_laplacian",
    "phi_tv",
    "settings",
    "tv_anisotropic",
    "tv_isotropic",
    "tv_max_formulation",
    "tv_set",
]
