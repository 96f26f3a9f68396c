#!/usr/bin/env python3
"""
Shipped Assets
Buckyball adjacency, the torus initial set and the adjoined-lattice sets
"""
import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, Tuple

import numpy as np

from core.errors import InvalidParameter
from core.graph import Graph, NodeSet, build_graph
from core.io import read_json

from .families import _check_weight, adjoined_lattices, torus

logger = logging.getLogger(__name__)

ASSET_DIR = Path(__file__).parent / "assets"
BUCKYBALL_EDGE_LENGTH = 2.0


@lru_cache(maxsize=None)
def load_asset(name: str) -> Dict:
    return read_json(ASSET_DIR / f"{name}.json")


def buckyball(omega: float = 1.0, q: float = 1.0, r: float = 0.0) -> Graph:
    """Truncated icosahedron: 60 nodes, 90 edges, 3-regular"""
    omega = _check_weight(omega)
    asset = load_asset("buckyball")
    edges = [(i, j, omega) for i, j in asset["edges"]]
    return build_graph(asset["n"], edges, q=q, r=r)


def buckyball_coordinates() -> np.ndarray:
    return np.array(load_asset("buckyball")["coordinates"], dtype=float)


def buckyball_cap() -> NodeSet:
    """The 14-node initial cap"""
    return tuple(sorted(load_asset("buckyball")["cap"]))


def torus_initial_set() -> Tuple[Graph, NodeSet]:
    """32 x 12 unit torus with the notched-rectangle initial set"""
    asset = load_asset("torus_32x12_init")
    g = torus(asset["cols"], asset["rows"])
    return g, g.node_set(asset["initial_set"])


def lattice_layout() -> Dict:
    return load_asset("lattices")


def lattices_with_set(name: str) -> Tuple[Graph, NodeSet, float]:
    """Adjoined lattices, one of the shipped initial sets and its time step"""
    layout = lattice_layout()
    if name not in layout["sets"]:
        raise InvalidParameter(f"Unknown lattice set {name!r}; expected one of {sorted(layout['sets'])}")
    g = adjoined_lattices(layout["width"], layout["height"], layout["square_width"])
    entry = layout["sets"][name]
    return g, g.node_set(entry["members"]), float(entry["tau"])
