#!/usr/bin/env python3
"""
Boundaries and Distances
Set boundaries, graph distance, signed distance and the eikonal checks
"""
import logging
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from core.calculus import NodeFunction, gradient
from core.errors import EmptySet, InvalidParameter
from core.graph import Graph, NodeSet

from .curvature import normal

logger = logging.getLogger(__name__)


def _cut_neighbor_counts(g: Graph, inside: np.ndarray) -> np.ndarray:
    crossing = inside[g.src] != inside[g.dst]
    return np.bincount(g.src[crossing], minlength=g.n)


def boundary(g: Graph, S: Iterable[int]) -> NodeSet:
    """∂S: nodes of S with a neighbor outside S"""
    inside = g.membership(S)
    counts = _cut_neighbor_counts(g, inside)
    return tuple(int(i) for i in np.flatnonzero(inside & (counts > 0)))


def boundary_complement(g: Graph, S: Iterable[int]) -> NodeSet:
    return boundary(g, g.complement(S))


def sigma(g: Graph, S: Iterable[int]) -> NodeSet:
    """Σ = ∂S ∪ ∂(S^c)"""
    return tuple(sorted(set(boundary(g, S)) | set(boundary_complement(g, S))))


def reduced_boundary(g: Graph, S: Iterable[int]) -> NodeSet:
    """Nodes of ∂S with exactly one neighbor outside S"""
    inside = g.membership(S)
    counts = _cut_neighbor_counts(g, inside)
    return tuple(int(i) for i in np.flatnonzero(inside & (counts == 1)))


def _length_matrix(g: Graph) -> csr_matrix:
    return csr_matrix((g.w ** (g.q - 1), (g.src, g.dst)), shape=(g.n, g.n))


def graph_distance(g: Graph, A: Iterable[int]) -> NodeFunction:
    """Shortest-path distance to A with edge lengths ω^{q−1}; inf off A's components"""
    sources = g.node_set(A)
    if not sources:
        raise EmptySet("Distance needs a nonempty source set")
    dist = dijkstra(_length_matrix(g), directed=False, indices=list(sources), min_only=True)
    return np.asarray(dist, dtype=float)


def signed_distance(g: Graph, S: Iterable[int], interface: str = "sigma") -> NodeFunction:
    """
    (χ_{S^c} − χ_S) d^I with I = Σ (interface="sigma") or I = ∂S (interface="boundary").
    """
    members = g.require_nontrivial(S)
    if interface == "sigma":
        sources = sigma(g, members)
    elif interface == "boundary":
        sources = boundary(g, members)
    else:
        raise InvalidParameter(f"Unknown interface {interface!r}")
    dist = graph_distance(g, sources)
    inside = g.membership(members)
    return np.where(inside, -dist, dist)


def exterior_boundary(g: Graph, S: Iterable[int]) -> NodeSet:
    """Nodes outside S whose distance to ∂S is realized by a single edge"""
    members = g.require_nontrivial(S)
    inside = g.membership(members)
    on_boundary = np.zeros(g.n, dtype=bool)
    on_boundary[list(boundary(g, members))] = True
    dist = graph_distance(g, boundary(g, members))
    lengths = g.w ** (g.q - 1)
    hits = (~inside[g.src]) & on_boundary[g.dst] & np.isclose(dist[g.src], lengths)
    return tuple(sorted(set(int(i) for i in g.src[hits])))


def boundary_gradient_witness(g: Graph, S: Iterable[int], node: int, tol: float = 1e-10) -> Optional[int]:
    """A j∈∂S with (∇ sd^{∂S})_{node,j} = −ν_{node,j}, or None"""
    members = g.require_nontrivial(S)
    inside = g.membership(members)
    grad = gradient(g, signed_distance(g, members, interface="boundary"))
    nu = normal(g, members)
    for k in np.flatnonzero(g.src == node):
        j = int(g.dst[k])
        if inside[j] and abs(grad[k] + nu[k]) <= tol:
            return j
    return None


def eikonal_residual(g: Graph, A: Iterable[int]) -> NodeFunction:
    """min_j (∇d^A)_ij + 1 at every node off A (zero on A and at unreachable nodes)"""
    sources = g.node_set(A)
    dist = graph_distance(g, sources)
    with np.errstate(invalid="ignore"):
        grad = gradient(g, dist)
    finite = np.isfinite(grad)
    mins = np.full(g.n, np.inf)
    np.minimum.at(mins, g.src[finite], grad[finite])
    residual = np.where(np.isfinite(mins), mins + 1.0, 0.0)
    residual[list(sources)] = 0.0
    residual[~np.isfinite(dist)] = 0.0
    return residual
