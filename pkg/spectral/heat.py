#!/usr/bin/env python3
"""
Heat Semigroup
Evaluation of e^{-tΔ} and the mixing-time bound
"""
import logging
import math
from typing import Optional

import numpy as np
from scipy.sparse.linalg import expm_multiply

from core.calculus import NodeFunction, mass, norm_v
from core.errors import DisconnectedGraph, InvalidParameter
from core.graph import Graph

from .decomposition import SpectralDecomposition, decomposition_for

logger = logging.getLogger(__name__)


def _check_time(t: float) -> float:
    t = float(t)
    if not t >= 0 or not math.isfinite(t):
        raise InvalidParameter(f"Time must be finite and nonnegative, got {t}")
    return t


def heat_evolve(
    g: Graph, u0: NodeFunction, t: float, decomposition: Optional[SpectralDecomposition] = None
) -> NodeFunction:
    """u(t) = e^{−tΔ} u0, spectrally when a decomposition is supplied"""
    u0 = g.check_node_function(u0, "u0")
    t = _check_time(t)
    if t == 0:
        return u0.copy()
    if decomposition is not None:
        return decomposition.heat(u0, t)
    return expm_multiply(-t * g.laplacian_sparse, u0)


class HeatKernel:
    """Dense e^{−τΔ} for repeated application at a fixed τ"""

    def __init__(self, g: Graph, tau: float, decomposition: Optional[SpectralDecomposition] = None):
        self.tau = _check_time(tau)
        self.decomposition = decomposition_for(g, decomposition)
        self.matrix = self.decomposition.heat_matrix(self.tau)

    def apply(self, u: NodeFunction) -> NodeFunction:
        return self.matrix @ np.asarray(u, dtype=float)


def mixing_bound(
    g: Graph, u0: NodeFunction, eps: float, decomposition: Optional[SpectralDecomposition] = None
) -> float:
    """
    Time after which e^{−tΔ}u0 is within eps of its mean in the sup norm:
    (1/λ2) log(eps^{-1} d_-^{-r/2} |u0 − M/vol V|_V), clamped at 0.
    """
    u0 = g.check_node_function(u0, "u0")
    if not eps > 0:
        raise InvalidParameter(f"eps must be positive, got {eps}")
    if not g.is_connected():
        raise DisconnectedGraph("Mixing bound needs a connected graph")
    lambda2 = decomposition_for(g, decomposition).lambda2
    deviation = norm_v(g, u0 - mass(g, u0) / g.volume_all)
    if deviation == 0:
        return 0.0
    tau = math.log(deviation / (eps * g.d_minus ** (g.r / 2))) / lambda2
    return max(tau, 0.0)
