#!/usr/bin/env python3
"""
Local Flip Analysis
Time-step windows in which one MBO step changes the phase of a single node
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from core.calculus import laplacian_apply
from core.errors import InvalidParameter
from core.graph import Graph, NodeSet

logger = logging.getLogger(__name__)

GAP_KINDS = ("reduced", "dirichlet")


@dataclass(frozen=True)
class FlipAnalysis:
    """
    Local data around one node.

    s1 holds the neighbors on the other side of the interface; s1_closure adds
    the node itself. reduced_degrees are d'_i = Σ_{j∈S1} ω_ij over s1_closure.
    The window is closed when the node starts outside the set.
    """

    node: int
    node_in_set: bool
    s1: NodeSet
    s1_closure: NodeSet
    reduced_degrees: Dict[int, float]
    kappa: float
    gap_reduced: float
    gap_dirichlet: float

    @property
    def closed(self) -> bool:
        return not self.node_in_set

    def gap(self, kind: str = "reduced") -> float:
        if kind == "reduced":
            return self.gap_reduced
        if kind == "dirichlet":
            return self.gap_dirichlet
        raise InvalidParameter(f"Unknown gap kind {kind!r}; expected one of {GAP_KINDS}")

    def interval(self, kind: str = "reduced") -> Optional[Tuple[float, float]]:
        """(τ1, τ2) = (|κ| ∓ sqrt(κ² − X)) / X when κ² > X, else None"""
        X = self.gap(kind)
        k = abs(self.kappa)
        if k == 0 or X <= 0 or k * k <= X:
            return None
        root = math.sqrt(k * k - X)
        return (k - root) / X, (k + root) / X

    def to_dict(self) -> Dict:
        return {
            "node": self.node,
            "node_in_set": self.node_in_set,
            "s1": list(self.s1),
            "reduced_degrees": {str(i): d for i, d in self.reduced_degrees.items()},
            "kappa": self.kappa,
            "gap_reduced": self.gap_reduced,
            "gap_dirichlet": self.gap_dirichlet,
            "closed": self.closed,
            "interval_reduced": self.interval("reduced"),
            "interval_dirichlet": self.interval("dirichlet"),
        }


def flip_analysis(g: Graph, S: Iterable[int], node: int) -> FlipAnalysis:
    members = g.node_set(S)
    node = g.node_set([node])[0]
    inside = g.membership(members)
    node_in_set = bool(inside[node])

    nbrs = g.neighbors(node)
    s1 = tuple(sorted(int(j) for j in nbrs if inside[j] != node_in_set))
    closure = tuple(sorted(set(s1) | {node}))
    in_s1 = np.zeros(g.n, dtype=bool)
    in_s1[list(s1)] = True

    adjacency = g.dense_adjacency()
    local = adjacency[np.ix_(closure, closure)]
    d = g.degrees[list(closure)]
    dr = d ** -g.r
    reduced = adjacency[np.ix_(closure, list(s1))].sum(axis=1) if s1 else np.zeros(len(closure))

    # max_i d_i^{-r} Σ_k d_k^{-r} d'_k ω_ik over the closure
    gap_reduced = float(np.max(dr * (local @ (dr * reduced))))

    # Principal submatrix of D^{-r}(D − A) with full-graph degrees
    dirichlet = dr[:, None] * (np.diag(d) - local)
    chi = in_s1[list(closure)].astype(float)
    gap_dirichlet = float(np.max(np.abs(dirichlet @ (dirichlet @ chi))))

    g1 = g.with_params(q=1.0)
    kappa = float(laplacian_apply(g1, g.indicator(members))[node])

    analysis = FlipAnalysis(
        node=node,
        node_in_set=node_in_set,
        s1=s1,
        s1_closure=closure,
        reduced_degrees={int(i): float(v) for i, v in zip(closure, reduced)},
        kappa=kappa,
        gap_reduced=gap_reduced,
        gap_dirichlet=gap_dirichlet,
    )
    logger.debug("Flip analysis at node %d: kappa=%.6g reduced=%.6g dirichlet=%.6g",
                 node, kappa, gap_reduced, gap_dirichlet)
    return analysis


def local_flip_interval(
    g: Graph, S: Iterable[int], node: int, gap: str = "reduced"
) -> Optional[Tuple[float, float]]:
    """
    Window (τ1, τ2) for a single-node flip.

    gap="reduced" uses the reduced-degree quantity, gap="dirichlet" the sup norm
    of (Δ')²χ_{S1}. The Dirichlet quantity is at least |κ|² at the node itself,
    so it never produces a window.
    """
    if gap not in GAP_KINDS:
        raise InvalidParameter(f"Unknown gap kind {gap!r}; expected one of {GAP_KINDS}")
    return flip_analysis(g, S, node).interval(gap)


def r1_corollary_conditions(g: Graph, S: Iterable[int], node: int, eps: float) -> bool:
    """
    Sufficient conditions at r = 1 for a flip window:
    d'_i/d_i ≤ ε d'_1/d_1 and ω_i1/d_i < (1 − ε²) d'_1/d_1 for every i in S1.
    """
    if g.r != 1.0:
        raise InvalidParameter("These conditions are stated for r = 1")
    if not 0 < eps < 1:
        raise InvalidParameter(f"eps must lie in (0, 1), got {eps}")
    analysis = flip_analysis(g, S, node)
    if not analysis.s1:
        return False
    d = g.degrees
    ratio_node = analysis.reduced_degrees[analysis.node] / d[analysis.node]
    for i in analysis.s1:
        if analysis.reduced_degrees[i] / d[i] > eps * ratio_node:
            return False
        if g.weight(i, analysis.node) / d[i] >= (1 - eps ** 2) * ratio_node:
            return False
    return True


def star_flip_criterion(g: Graph, S: Iterable[int], node: int) -> bool:
    """
    Star-shaped neighborhood at r = 1: no links among S1, and either a single
    neighbor of smaller degree or several neighbors of degree at most d_node.
    """
    if g.r != 1.0:
        raise InvalidParameter("The star criterion is stated for r = 1")
    analysis = flip_analysis(g, S, node)
    s1 = analysis.s1
    if not s1 or any(analysis.reduced_degrees[i] != 0 for i in s1):
        return False
    d = g.degrees
    d_node = d[analysis.node]
    if len(s1) == 1:
        return bool(d[s1[0]] < d_node)
    return bool(all(d[i] <= d_node for i in s1))
