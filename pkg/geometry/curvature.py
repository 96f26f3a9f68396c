#!/usr/bin/env python3
"""
Set Curvature
Normals, curvature fields and TV-difference identities for node sets
"""
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Tuple

import numpy as np

from core.calculus import (
    EdgeFunction,
    NodeFunction,
    divergence,
    gamma_functional,
    gamma_limit_value,
    inner_v,
    tv_set,
)
from core.errors import InvalidParameter
from core.graph import Graph, NodeSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvatureField:
    """Curvature κ_S^{q,r} of a node set together with the set it belongs to"""

    values: np.ndarray
    members: NodeSet

    def total(self, g: Graph) -> float:
        """⟨κ, χ_V⟩_V, zero for every set"""
        return inner_v(g, self.values, np.ones(g.n))

    def pairing(self, g: Graph) -> float:
        """⟨κ, χ_S⟩_V, equal to the cut of S"""
        return inner_v(g, self.values, g.indicator(self.members))

    def support(self) -> NodeSet:
        return tuple(int(i) for i in np.flatnonzero(self.values != 0))


def normal(g: Graph, S: Iterable[int]) -> EdgeFunction:
    """ν_ij = +1 for i∉S, j∈S; −1 for i∈S, j∉S; 0 otherwise"""
    inside = g.membership(S)
    return inside[g.dst].astype(float) - inside[g.src].astype(float)


def curvature_values(g: Graph, S: Iterable[int]) -> NodeFunction:
    return divergence(g, normal(g, S))


def curvature(g: Graph, S: Iterable[int]) -> CurvatureField:
    members = g.node_set(S)
    return CurvatureField(values=curvature_values(g, members), members=members)


def tv_difference(g: Graph, S_hat: Iterable[int], S: Iterable[int]) -> float:
    """TV(Ŝ) − TV(S) through ⟨κ_Ŝ + κ_S, χ_Ŝ − χ_S⟩_V"""
    S_hat, S = g.node_set(S_hat), g.node_set(S)
    kappa = curvature_values(g, S_hat) + curvature_values(g, S)
    return inner_v(g, kappa, g.indicator(S_hat) - g.indicator(S))


def single_flip_tv_change(g: Graph, S: Iterable[int], node: int) -> float:
    """TV change when `node` switches sides"""
    inside = g.membership(S)
    node = g.node_set([node])[0]
    nbrs = g.neighbors(node)
    weights = g.neighbor_weights(node) ** g.q
    same = weights[inside[nbrs]].sum()
    other = weights[~inside[nbrs]].sum()
    if inside[node]:
        return float(same - other)
    return float(other - same)


def local_minimality_check(g: Graph, S: Iterable[int], omega: Iterable[int]) -> bool:
    """True when no single flip inside Ω lowers the cut"""
    members = g.node_set(S)
    for node in g.node_set(omega):
        if single_flip_tv_change(g, members, node) < 0:
            logger.debug("Flipping node %d lowers the cut of the set", node)
            return False
    return True


def gamma_limit_check(
    g: Graph, S: Iterable[int], eps: float, gfun: Callable[[float], float]
) -> Tuple[float, float]:
    """(f_ε(χ_S), f_0(χ_S)); the double-well term vanishes on indicators"""
    if not eps > 0:
        raise InvalidParameter(f"eps must be positive, got {eps}")
    chi = g.indicator(S)
    return gamma_functional(g, chi, eps, gfun), gamma_limit_value(g, chi, gfun)


def check_tv_difference(g: Graph, S_hat: Iterable[int], S: Iterable[int]) -> float:
    """Absolute gap between the identity and the direct TV difference"""
    direct = tv_set(g, S_hat) - tv_set(g, S)
    return abs(direct - tv_difference(g, S_hat, S))
