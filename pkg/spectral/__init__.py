"""
Spectral tools for the graph Laplacian: eigenpairs, bounds and the heat semigroup
"""
from .bounds import (
    GAP_RATIO,
    SpectralBounds,
    component_count,
    fiedler_sweep_sets,
    gap_condition,
    noncomplete_bound,
    spectral_bounds,
    trace_mean,
)
from .decomposition import SpectralDecomposition, decomposition_for, eigendecompose
from .heat import HeatKernel, heat_evolve, mixing_bound

__all__ = [
    "GAP_RATIO",
    "HeatKernel",
    "SpectralBounds",
    "SpectralDecomposition",
    "component_count",
    "decomposition_for",
    "eigendecompose",
    "fiedler_sweep_sets",
    "gap_condition",
    "heat_evolve",
    "mixing_bound",
    "noncomplete_bound",
    "spectral_bounds",
    "trace_mean",
]
