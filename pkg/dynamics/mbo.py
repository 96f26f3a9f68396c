#!/usr/bin/env python3
"""
Graph MBO
Threshold dynamics: diffuse the indicator with e^{-τΔ}, keep nodes at or above 1/2
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional

import numpy as np

from core.calculus import NodeFunction, inner_v, laplacian_apply, mass, norm_v_inf, tv_anisotropic
from core.errors import ConvergenceFailure, DisconnectedGraph, HalfVolume, InvalidParameter
from core.graph import Graph, NodeSet
from core.settings import settings
from spectral.bounds import gap_condition
from spectral.decomposition import SpectralDecomposition, decomposition_for
from spectral.heat import HeatKernel

logger = logging.getLogger(__name__)

THRESHOLD = 0.5


@dataclass(frozen=True)
class MboParams:
    tau: float
    max_iter: int = settings.mbo_max_iter

    def __post_init__(self):
        if not (self.tau > 0) or not math.isfinite(self.tau):
            raise InvalidParameter(f"tau must be positive and finite, got {self.tau}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise InvalidParameter(f"max_iter must be a positive integer, got {self.max_iter}")


@dataclass
class MboTrace:
    """Iterates S_0, S_1, ... with J, TV and mass at each; converged_at indexes the fixed point"""

    sets: List[NodeSet] = field(default_factory=list)
    lyapunov: List[float] = field(default_factory=list)
    tv: List[float] = field(default_factory=list)
    mass: List[float] = field(default_factory=list)
    converged_at: Optional[int] = None

    @property
    def final(self) -> NodeSet:
        return self.sets[-1]

    @property
    def iterations(self) -> int:
        """Number of threshold steps that changed the set"""
        if self.converged_at is not None:
            return self.converged_at
        return len(self.sets) - 1

    def records(self) -> List[Dict]:
        """One JSON-ready record per iterate"""
        return [
            {"k": k, "set": list(S), "tv": tv, "lyapunov": J, "mass": M}
            for k, (S, tv, J, M) in enumerate(zip(self.sets, self.tv, self.lyapunov, self.mass))
        ]


def _kernel(g: Graph, tau: float, kernel: Optional[HeatKernel]) -> HeatKernel:
    if kernel is not None and kernel.tau == tau:
        return kernel
    return HeatKernel(g, tau)


def threshold(values: NodeFunction) -> NodeSet:
    """Nodes at or above 1/2"""
    return tuple(int(i) for i in np.flatnonzero(np.asarray(values) >= THRESHOLD))


def mbo_step(g: Graph, S: Iterable[int], tau: float, kernel: Optional[HeatKernel] = None) -> NodeSet:
    """One diffusion-threshold step"""
    if not tau > 0:
        raise InvalidParameter(f"tau must be positive, got {tau}")
    kernel = _kernel(g, tau, kernel)
    return threshold(kernel.apply(g.indicator(S)))


def lyapunov(g: Graph, u: NodeFunction, tau: float, kernel: Optional[HeatKernel] = None) -> float:
    """J(u) = M(u) − ⟨u, e^{−τΔ}u⟩_V"""
    if not tau > 0:
        raise InvalidParameter(f"tau must be positive, got {tau}")
    u = g.check_node_function(u)
    kernel = _kernel(g, tau, kernel)
    return mass(g, u) - inner_v(g, u, kernel.apply(u))


def mbo_run(g: Graph, S0: Iterable[int], params: MboParams) -> MboTrace:
    """Iterate until the set repeats or max_iter steps have been taken"""
    kernel = HeatKernel(g, params.tau)
    trace = MboTrace()
    current = g.node_set(S0)
    visited = {current}

    def record(S: NodeSet) -> None:
        chi = g.indicator(S)
        trace.sets.append(S)
        trace.lyapunov.append(lyapunov(g, chi, params.tau, kernel))
        trace.tv.append(tv_anisotropic(g, chi))
        trace.mass.append(mass(g, chi))

    record(current)
    for k in range(params.max_iter):
        nxt = mbo_step(g, current, params.tau, kernel)
        logger.debug("MBO iterate %d: |S|=%d", k + 1, len(nxt))
        if nxt == current:
            trace.converged_at = k
            break
        if nxt in visited:
            raise ConvergenceFailure("MBO iterates revisited an earlier set", {"iteration": k + 1})
        visited.add(nxt)
        record(nxt)
        current = nxt
    else:
        logger.warning("MBO stopped at max_iter=%d without reaching a fixed point", params.max_iter)
    return trace


# ----------------------------------------------------------------------
# Time-step bounds
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class TauBounds:
    tau_rho: float
    tau_kappa: float
    tau_t: float
    tau_t_squared: float
    gap_condition: bool
    lambda2: float
    rho: float
    relative_volume: float

    def to_dict(self) -> Dict:
        return dict(self.__dict__)


def relative_volume(g: Graph, S: Iterable[int]) -> float:
    """R_S = vol S / vol V"""
    return g.volume(g.node_set(S)) / g.volume_all


def tau_bounds(g: Graph, S: Iterable[int], decomposition: Optional[SpectralDecomposition] = None) -> TauBounds:
    """
    Pinning bounds τ_ρ and τ_κ, and the trivial-dynamics bound τ_t.

    tau_t_squared evaluates the trivial-dynamics expression with the squared
    norm |χ_S − R_S|_V² = vol S · vol S^c / vol V.
    """
    members = g.require_nontrivial(S)
    if not g.is_connected():
        raise DisconnectedGraph("Time-step bounds need a connected graph")
    R = relative_volume(g, members)
    if R == 0.5:
        raise HalfVolume("Trivial-dynamics bound is undefined when vol S = vol V / 2", {"R": R})

    decomposition = decomposition_for(g, decomposition)
    rho, lambda2 = decomposition.rho, decomposition.lambda2
    vol_S = g.volume(members)
    vol_c = g.volume_all - vol_S
    d_minus_half = g.d_minus ** (g.r / 2)

    tau_rho = math.log(1 + 0.5 * d_minus_half / math.sqrt(vol_S)) / rho
    tau_kappa = 1 / (2 * norm_v_inf(laplacian_apply(g, g.indicator(members))))
    spread = math.sqrt(vol_S * vol_c / g.volume_all)
    gap = abs(R - 0.5) * d_minus_half
    tau_t = math.log(spread / gap) / lambda2
    tau_t_squared = math.log(spread ** 2 / gap) / lambda2
    return TauBounds(
        tau_rho=tau_rho,
        tau_kappa=tau_kappa,
        tau_t=tau_t,
        tau_t_squared=tau_t_squared,
        gap_condition=gap_condition(decomposition),
        lambda2=lambda2,
        rho=rho,
        relative_volume=R,
    )


def universal_pinning_tau(g: Graph, decomposition: Optional[SpectralDecomposition] = None) -> float:
    """Below log(3/2)/ρ every set is a fixed point"""
    return math.log(1.5) / decomposition_for(g, decomposition).rho


def critical_tau_complete(g: Graph, S: Iterable[int]) -> float:
    """
    Critical step on K_n: pinned below, trivial above.

    Uses ρ = nω (nω d^{-r} with r > 0) computed from the degrees of the complete graph.
    """
    if not g.is_complete():
        raise InvalidParameter("Closed-form critical step applies to complete graphs only")
    members = g.require_nontrivial(S)
    R = relative_volume(g, members)
    if R == 0.5:
        raise HalfVolume("No critical step when R_S = 1/2: symmetry pins every τ")
    weights = g.w
    if not np.allclose(weights, weights[0]):
        raise InvalidParameter("Closed-form critical step needs uniform weights")
    rho = g.n * weights[0] * g.degrees[0] ** (-g.r)
    return math.log(max(R, 1 - R) / abs(0.5 - R)) / rho


def critical_tau_star(n: int, omega: float = 1.0) -> float:
    """Critical step for the center of a star SG_n with r = 0"""
    if n < 3:
        raise InvalidParameter(f"Star needs n >= 3 nodes, got {n}")
    return math.log(2 * (n - 1) / (n - 2)) / (n * omega)


def pinned_below(g: Graph, S: Iterable[int], taus: Iterable[float]) -> Dict[float, bool]:
    """Whether S is a fixed point of one MBO step at each τ"""
    members = g.node_set(S)
    decomposition = decomposition_for(g)
    return {
        float(tau): mbo_step(g, members, tau, HeatKernel(g, tau, decomposition)) == members
        for tau in taus
    }
