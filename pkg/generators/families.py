#!/usr/bin/env python3
"""
Graph Families
Deterministic constructors for the example graphs
"""
import logging
from typing import List

import numpy as np
from scipy import sparse

from core.errors import InvalidParameter, InvalidSize
from core.graph import Graph, build_graph

logger = logging.getLogger(__name__)


def _check_weight(omega: float) -> float:
    omega = float(omega)
    if not omega > 0 or not np.isfinite(omega):
        raise InvalidParameter(f"Edge weight must be positive and finite, got {omega}")
    return omega


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidSize(message)


def _from_adjacency(adjacency: sparse.spmatrix, omega: float, q: float, r: float) -> Graph:
    upper = sparse.triu(adjacency, k=1).tocoo()
    # dense kron factors come back as BSR blocks with explicit zeros
    present = upper.data != 0
    edges = [(int(i), int(j), omega) for i, j in zip(upper.row[present], upper.col[present])]
    return build_graph(adjacency.shape[0], edges, q=q, r=r)


def _cycle_adjacency(n: int) -> sparse.csr_matrix:
    shift = sparse.eye(n, k=1, format="csr") + sparse.eye(n, k=-(n - 1), format="csr")
    return (shift + shift.T).tocsr()


def complete(n: int, omega: float = 1.0, q: float = 1.0, r: float = 0.0) -> Graph:
    _require(n >= 2, f"Complete graph needs n >= 2, got {n}")
    omega = _check_weight(omega)
    edges = [(i, j, omega) for i in range(n) for j in range(i + 1, n)]
    return build_graph(n, edges, q=q, r=r)


def star(n: int, omega: float = 1.0, q: float = 1.0, r: float = 0.0) -> Graph:
    """Star SG_n with center 0 and leaves 1..n−1"""
    _require(n >= 2, f"Star needs n >= 2, got {n}")
    omega = _check_weight(omega)
    return build_graph(n, [(0, i, omega) for i in range(1, n)], q=q, r=r)


def cycle(n: int, omega: float = 1.0, q: float = 1.0, r: float = 0.0) -> Graph:
    _require(n >= 3, f"Cycle needs n >= 3, got {n}")
    omega = _check_weight(omega)
    return build_graph(n, [(i, (i + 1) % n, omega) for i in range(n)], q=q, r=r)


def path(n: int, omega: float = 1.0, q: float = 1.0, r: float = 0.0) -> Graph:
    _require(n >= 2, f"Path needs n >= 2, got {n}")
    omega = _check_weight(omega)
    return build_graph(n, [(i, i + 1, omega) for i in range(n - 1)], q=q, r=r)


def torus(n1: int, n2: int, omega: float = 1.0, q: float = 1.0, r: float = 0.0) -> Graph:
    """Kronecker sum of the n1- and n2-cycles; node (x, y) is y * n1 + x"""
    _require(n1 >= 3 and n2 >= 3, f"Torus needs both sides >= 3, got {n1} x {n2}")
    omega = _check_weight(omega)
    adjacency = (
        sparse.kron(sparse.eye(n2), _cycle_adjacency(n1), format="csr")
        + sparse.kron(_cycle_adjacency(n2), sparse.eye(n1), format="csr")
    ).tocsr()
    adjacency.eliminate_zeros()
    return _from_adjacency(adjacency, omega, q, r)


def grid(rows: int, cols: int, omega: float = 1.0, q: float = 1.0, r: float = 0.0) -> Graph:
    """Square grid with cut borders; node (row, col) is row * cols + col"""
    _require(rows >= 1 and cols >= 1 and rows * cols >= 2, f"Grid needs at least two nodes, got {rows} x {cols}")
    omega = _check_weight(omega)
    edges = []
    for row in range(rows):
        for col in range(cols):
            i = row * cols + col
            if col + 1 < cols:
                edges.append((i, i + 1, omega))
            if row + 1 < rows:
                edges.append((i, i + cols, omega))
    return build_graph(rows * cols, edges, q=q, r=r)


def grid_label(i: int) -> int:
    """1-based label used when grid nodes are numbered row by row from one"""
    return i + 1


def regular_tree(depth: int, children: int, omega: float = 1.0, q: float = 1.0, r: float = 0.0) -> Graph:
    """
    Complete tree numbered level by level starting at the leaves, the root last.

    depth=3, children=2 gives 15 nodes: leaves 0..7, then 8..11, 12..13, root 14.
    """
    _require(depth >= 1 and children >= 1, f"Tree needs depth >= 1 and children >= 1, got {depth}, {children}")
    omega = _check_weight(omega)
    level_sizes = [children ** k for k in range(depth, -1, -1)]
    offsets = np.concatenate(([0], np.cumsum(level_sizes)))
    edges = []
    for level, size in enumerate(level_sizes[:-1]):
        for k in range(size):
            child = int(offsets[level] + k)
            parent = int(offsets[level + 1] + k // children)
            edges.append((child, parent, omega))
    return build_graph(int(offsets[-1]), edges, q=q, r=r)


def adjoined_lattices(
    width: int = 20,
    height: int = 10,
    square_width: int = 10,
    omega: float = 1.0,
    q: float = 1.0,
    r: float = 0.0,
) -> Graph:
    """
    Square lattice in columns [0, square_width) next to a triangular lattice in
    the remaining columns; node (x, y) is y * width + x.
    """
    _require(width >= 2 and height >= 2, f"Lattices need at least 2 x 2 nodes, got {width} x {height}")
    _require(0 <= square_width <= width, f"square_width must lie in [0, {width}], got {square_width}")
    omega = _check_weight(omega)
    edges = []
    for y in range(height):
        for x in range(width):
            i = y * width + x
            if x + 1 < width:
                edges.append((i, i + 1, omega))
            if y + 1 < height:
                edges.append((i, i + width, omega))
            if x >= square_width and x + 1 < width and y + 1 < height:
                edges.append((i, i + width + 1, omega))
    return build_graph(width * height, edges, q=q, r=r)


def lattice_coordinates(width: int, height: int, square_width: int) -> np.ndarray:
    """Plot positions; triangular columns are sheared so cells look equilateral"""
    coords = []
    for y in range(height):
        for x in range(width):
            shift = -0.5 * y if x >= square_width else 0.0
            coords.append((x + shift, y * (np.sqrt(3) / 2 if x >= square_width else 1.0)))
    return np.array(coords)


def grid_coordinates(rows: int, cols: int) -> np.ndarray:
    return np.array([(col, row) for row in range(rows) for col in range(cols)], dtype=float)


def tree_coordinates(depth: int, children: int) -> np.ndarray:
    """Leaves evenly spaced on the bottom row, parents centered above their children"""
    level_sizes = [children ** k for k in range(depth, -1, -1)]
    xs: List[float] = list(np.arange(level_sizes[0], dtype=float))
    coords = [(x, 0.0) for x in xs]
    for level in range(1, depth + 1):
        xs = [float(np.mean(xs[k * children:(k + 1) * children])) for k in range(level_sizes[level])]
        coords += [(x, float(level)) for x in xs]
    return np.array(coords)
