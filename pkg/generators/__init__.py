"""
Example graph families, the two-moons dataset and shipped initial sets
"""
from .assets import (
    buckyball,
    buckyball_cap,
    buckyball_coordinates,
    lattice_layout,
    lattices_with_set,
    torus_initial_set,
)
from .families import (
    adjoined_lattices,
    complete,
    cycle,
    grid,
    grid_coordinates,
    grid_label,
    lattice_coordinates,
    path,
    regular_tree,
    star,
    torus,
    tree_coordinates,
)
from .moons import MoonsConfig, knn_similarity_graph, moons_initial_set, purity, sample_moons, two_moons

__all__ = [
    "MoonsConfig",
    "adjoined_lattices",
    "buckyball",
    "buckyball_cap",
    "buckyball_coordinates",
    "complete",
    "cycle",
    "grid",
    "grid_coordinates",
    "grid_label",
    "knn_similarity_graph",
    "lattice_coordinates",
    "lattice_layout",
    "lattices_with_set",
    "moons_initial_set",
    "path",
    "purity",
    "regular_tree",
    "sample_moons",
    "star",
    "torus",
    "torus_initial_set",
    "tree_coordinates",
]
