#!/usr/bin/env python3
"""
Weighted Graph
Immutable undirected graph carrying the (q, r) parameters of the graph calculus
"""
import logging
import math
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components as csgraph_components

from .errors import (
    ConflictingDuplicate,
    IsolatedNode,
    InvalidNode,
    InvalidParameter,
    NegativeWeight,
    SelfLoop,
    TrivialSet,
)

logger = logging.getLogger(__name__)

NodeSet = Tuple[int, ...]
WeightedEdge = Tuple[int, int, float]


class Graph:
    """
    Undirected weighted graph with positive symmetric weights and no isolated nodes.

    Adjacency is kept as a CSR matrix: sorted neighbor lists with parallel weight
    arrays. The directed edge list (src[k], dst[k], w[k]) follows CSR order, and
    reverse[k] is the position of (dst[k], src[k]) in that list. Edge functions
    are arrays aligned with this list.
    """

    def __init__(self, adjacency: sparse.csr_matrix, q: float = 1.0, r: float = 0.0):
        adjacency = sparse.csr_matrix(adjacency, dtype=float)
        adjacency.sort_indices()
        self._adjacency = adjacency
        self._q = float(q)
        self._r = float(r)

        n = adjacency.shape[0]
        src = np.repeat(np.arange(n), np.diff(adjacency.indptr))
        dst = adjacency.indices.astype(np.int64)
        keys = src * n + dst
        reverse = np.searchsorted(keys, dst * n + src)

        self._src = src
        self._dst = dst
        self._w = adjacency.data.copy()
        self._reverse = reverse
        self._degrees = np.asarray(adjacency.sum(axis=1)).ravel()
        for arr in (self._src, self._dst, self._w, self._reverse, self._degrees):
            arr.setflags(write=False)

    # ------------------------------------------------------------------
    # Basic attributes
    # ------------------------------------------------------------------
    @property
    def n(self) -> int:
        return self._adjacency.shape[0]

    @property
    def q(self) -> float:
        return self._q

    @property
    def r(self) -> float:
        return self._r

    @property
    def src(self) -> np.ndarray:
        return self._src

    @property
    def dst(self) -> np.ndarray:
        return self._dst

    @property
    def w(self) -> np.ndarray:
        return self._w

    @property
    def reverse(self) -> np.ndarray:
        return self._reverse

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def adjacency(self) -> sparse.csr_matrix:
        return self._adjacency

    @property
    def num_edges(self) -> int:
        return len(self._w) // 2

    @property
    def d_plus(self) -> float:
        return float(self._degrees.max())

    @property
    def d_minus(self) -> float:
        return float(self._degrees.min())

    @cached_property
    def vertex_weights(self) -> np.ndarray:
        """d_i^r, the weights of the node inner product"""
        weights = self._degrees ** self._r
        weights.setflags(write=False)
        return weights

    @cached_property
    def edge_weights_q(self) -> np.ndarray:
        """ω_ij^q on the directed edge list"""
        weights = self._w ** self._q
        weights.setflags(write=False)
        return weights

    @property
    def volume_all(self) -> float:
        return float(self.vertex_weights.sum())

    def volume(self, nodes: Iterable[int]) -> float:
        idx = np.asarray(list(nodes), dtype=np.int64)
        if idx.size == 0:
            return 0.0
        return float(self.vertex_weights[idx].sum())

    # ------------------------------------------------------------------
    # Neighborhoods and edges
    # ------------------------------------------------------------------
    def neighbors(self, i: int) -> np.ndarray:
        start, stop = self._adjacency.indptr[i], self._adjacency.indptr[i + 1]
        return self._dst[start:stop]

    def neighbor_weights(self, i: int) -> np.ndarray:
        start, stop = self._adjacency.indptr[i], self._adjacency.indptr[i + 1]
        return self._w[start:stop]

    def weight(self, i: int, j: int) -> float:
        return float(self._adjacency[i, j])

    def edges(self) -> Iterator[WeightedEdge]:
        """Each undirected edge once, as (i, j, ω) with i < j"""
        for k in np.flatnonzero(self._src < self._dst):
            yield int(self._src[k]), int(self._dst[k]), float(self._w[k])

    def is_unweighted(self) -> bool:
        return bool(np.all(self._w == 1.0))

    def dense_adjacency(self) -> np.ndarray:
        return self._adjacency.toarray()

    # ------------------------------------------------------------------
    # Laplacian
    # ------------------------------------------------------------------
    @cached_property
    def laplacian_sparse(self) -> sparse.csr_matrix:
        """Random-walk-type Laplacian D^{-r}(D - A) as a sparse matrix"""
        d = self._degrees
        lap = sparse.diags(d) - self._adjacency
        return sparse.csr_matrix(sparse.diags(d ** -self._r) @ lap)

    def laplacian_matrix(self) -> np.ndarray:
        return self.laplacian_sparse.toarray()

    # ------------------------------------------------------------------
    # Structure
    # ------------------------------------------------------------------
    def connected_components(self) -> Tuple[int, np.ndarray]:
        count, labels = csgraph_components(self._adjacency, directed=False)
        return int(count), labels

    def is_connected(self) -> bool:
        return self.connected_components()[0] == 1

    def is_complete(self) -> bool:
        return self.num_edges == self.n * (self.n - 1) // 2

    def with_params(self, q: Optional[float] = None, r: Optional[float] = None) -> "Graph":
        """Same weights, different calculus parameters"""
        q = self._q if q is None else q
        r = self._r if r is None else r
        _check_params(q, r)
        return Graph(self._adjacency, q=q, r=r)

    # ------------------------------------------------------------------
    # Sets
    # ------------------------------------------------------------------
    def node_set(self, members: Iterable[int]) -> NodeSet:
        """Validate and normalize node indices to a sorted tuple"""
        result = set()
        for m in members:
            if isinstance(m, (bool, np.bool_)) or int(m) != m:
                raise InvalidNode(f"Node index {m!r} is not an integer")
            m = int(m)
            if m < 0 or m >= self.n:
                raise InvalidNode(f"Node index {m} outside [0, {self.n})", {"node": m})
            result.add(m)
        return tuple(sorted(result))

    def indicator(self, members: Iterable[int]) -> np.ndarray:
        chi = np.zeros(self.n)
        idx = list(self.node_set(members))
        chi[idx] = 1.0
        return chi

    def membership(self, members: Iterable[int]) -> np.ndarray:
        return self.indicator(members).astype(bool)

    def complement(self, members: Iterable[int]) -> NodeSet:
        inside = self.membership(members)
        return tuple(int(i) for i in np.flatnonzero(~inside))

    def require_nontrivial(self, members: Iterable[int]) -> NodeSet:
        S = self.node_set(members)
        if len(S) == 0 or len(S) == self.n:
            raise TrivialSet("Set must be neither empty nor the whole node set", {"size": len(S)})
        return S

    def check_node_function(self, u: Sequence[float], name: str = "u") -> np.ndarray:
        arr = np.asarray(u, dtype=float)
        if arr.shape != (self.n,):
            raise InvalidParameter(f"{name} must have length {self.n}, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidParameter(f"{name} contains NaN or Inf")
        return arr

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------
    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "q": self._q,
            "r": self._r,
            "edges": [[i, j, w] for i, j, w in self.edges()],
        }

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges}, q={self._q:g}, r={self._r:g})"


def _check_params(q: float, r: float) -> None:
    if not (0.5 <= q <= 1.0) or math.isnan(q):
        raise InvalidParameter(f"q must lie in [1/2, 1], got {q}", {"q": q})
    if not (0.0 <= r <= 1.0) or math.isnan(r):
        raise InvalidParameter(f"r must lie in [0, 1], got {r}", {"r": r})


def build_graph(n: int, edges: Iterable[Sequence[float]], q: float = 1.0, r: float = 0.0) -> Graph:
    """
    Validate an edge list and build a Graph.

    (i, j) and (j, i) with the same weight describe one undirected edge; a
    repeated ordered pair or two different weights for the same pair is
    rejected.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    n = int(n)
    _check_params(q, r)

    seen_ordered = set()
    weights: Dict[Tuple[int, int], float] = {}
    for entry in edges:
        if len(entry) != 3:
            raise InvalidParameter(f"Edge entry {entry!r} must be (i, j, w)")
        i, j, w = entry
        for node in (i, j):
            if isinstance(node, bool) or int(node) != node or not (0 <= node < n):
                raise InvalidNode(f"Edge endpoint {node!r} outside [0, {n})", {"node": node})
        i, j, w = int(i), int(j), float(w)
        if i == j:
            raise SelfLoop(f"Self-loop at node {i}", {"node": i})
        if not math.isfinite(w) or w <= 0:
            raise NegativeWeight(f"Edge ({i}, {j}) has non-positive weight {w}", {"edge": [i, j], "weight": w})
        if (i, j) in seen_ordered:
            raise ConflictingDuplicate(f"Edge ({i}, {j}) listed twice", {"edge": [i, j]})
        seen_ordered.add((i, j))
        key = (min(i, j), max(i, j))
        if key in weights and weights[key] != w:
            raise ConflictingDuplicate(
                f"Edge {key} given weights {weights[key]} and {w}", {"edge": list(key)}
            )
        weights[key] = w

    rows: List[int] = []
    cols: List[int] = []
    data: List[float] = []
    for (i, j), w in weights.items():
        rows += [i, j]
        cols += [j, i]
        data += [w, w]
    adjacency = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))

    degrees = np.asarray(adjacency.sum(axis=1)).ravel()
    isolated = np.flatnonzero(degrees == 0)
    if isolated.size:
        raise IsolatedNode(f"Node {int(isolated[0])} has no edges", {"nodes": isolated.tolist()})

    graph = Graph(adjacency, q=q, r=r)
    logger.debug("Built %r", graph)
    return graph
