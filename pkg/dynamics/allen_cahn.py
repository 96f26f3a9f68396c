#!/usr/bin/env python3
"""
Graph Allen-Cahn
Ginzburg-Landau energy, the Allen-Cahn gradient flow and its ε-pinning bounds
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from core.calculus import NodeFunction, dirichlet_energy, laplacian_apply, norm_v, norm_v_inf
from core.errors import IntegratorFailure, InvalidParameter, ZeroInitialComponent
from core.graph import Graph, NodeSet
from core.settings import settings
from spectral.decomposition import SpectralDecomposition, decomposition_for

logger = logging.getLogger(__name__)

CROSSING_TOL = 1e-9
ALPHA_CLAMP = 0.999
KAPPA_FACTORS = ("derived", "printed")
ALPHA_RULES = ("clamp", "optimal")


def double_well(u: NodeFunction) -> np.ndarray:
    """W(u) = (u² − 1)²"""
    u = np.asarray(u, dtype=float)
    return (u ** 2 - 1) ** 2


def double_well_prime(u: NodeFunction) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return 4 * u * (u ** 2 - 1)


def gl_energy(g: Graph, u: NodeFunction, eps: float) -> float:
    """½|∇u|_E² + ε^{-1} Σ_i W(u_i)"""
    if not eps > 0:
        raise InvalidParameter(f"eps must be positive, got {eps}")
    return dirichlet_energy(g, u) + float(np.sum(double_well(u))) / eps


def ac_rhs(g: Graph, u: NodeFunction, eps: float) -> NodeFunction:
    """u̇ = −Δu − ε^{-1} d^{-r} W'(u)"""
    return -laplacian_apply(g, u) - double_well_prime(u) / (eps * g.vertex_weights)


@dataclass(frozen=True)
class AcParams:
    eps: float
    t_end: float
    rel_tol: float = settings.ac_rtol
    abs_tol: float = settings.ac_atol
    event_detection: bool = True

    def __post_init__(self):
        if not self.eps > 0:
            raise InvalidParameter(f"eps must be positive, got {self.eps}")
        if not self.t_end > 0:
            raise InvalidParameter(f"t_end must be positive, got {self.t_end}")
        for name in ("rel_tol", "abs_tol"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise InvalidParameter(f"{name} must lie in (0, 1), got {value}")


@dataclass
class AcTrace:
    times: List[float] = field(default_factory=list)
    states: List[np.ndarray] = field(default_factory=list)
    gl_energy: List[float] = field(default_factory=list)
    sign_changes: List[Tuple[float, int]] = field(default_factory=list)
    stationary: bool = False

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def final_signs(self) -> np.ndarray:
        return np.sign(self.final)

    def final_set(self) -> NodeSet:
        """Nodes with a positive final value"""
        return tuple(int(i) for i in np.flatnonzero(self.final > 0))

    def records(self) -> List[Dict]:
        return [
            {"t": t, "u": u.tolist(), "gl": e}
            for t, u, e in zip(self.times, self.states, self.gl_energy)
        ]


def _refine_crossing(sol, node: int, t0: float, t1: float) -> float:
    """Bisection-type root of the dense output for one component"""
    def f(t):
        return float(sol(t)[node])

    if f(t0) == 0:
        return t0
    if f(t1) == 0:
        return t1
    return brentq(f, t0, t1, xtol=CROSSING_TOL)


def ace_evolve(g: Graph, u0: NodeFunction, params: AcParams) -> AcTrace:
    """
    Integrate the Allen-Cahn flow with adaptive RK45 up to t_end or until
    |u̇|_inf drops below abs_tol.
    """
    u0 = g.check_node_function(u0, "u0")
    trace = AcTrace()

    def rhs(t, u):
        return ac_rhs(g, u, params.eps)

    if norm_v_inf(rhs(0.0, u0)) < params.abs_tol:
        trace.times.append(0.0)
        trace.states.append(u0.copy())
        trace.gl_energy.append(gl_energy(g, u0, params.eps))
        trace.stationary = True
        return trace

    def settled(t, u):
        return norm_v_inf(rhs(t, u)) - params.abs_tol

    settled.terminal = True
    settled.direction = -1

    sol = solve_ivp(
        rhs,
        (0.0, params.t_end),
        u0,
        method="RK45",
        rtol=params.rel_tol,
        atol=params.abs_tol,
        dense_output=params.event_detection,
        events=settled,
    )
    if sol.status == -1:
        raise IntegratorFailure(f"Allen-Cahn integration failed: {sol.message}")
    logger.debug("Allen-Cahn integration: %d steps, status=%d", len(sol.t), sol.status)

    states = sol.y.T
    for t, u in zip(sol.t, states):
        trace.times.append(float(t))
        trace.states.append(u.copy())
        trace.gl_energy.append(gl_energy(g, u, params.eps))
    trace.stationary = sol.status == 1

    if params.event_detection:
        for k in range(1, len(sol.t)):
            before, after = np.sign(states[k - 1]), np.sign(states[k])
            for node in np.flatnonzero(before * after < 0):
                t = _refine_crossing(sol.sol, int(node), sol.t[k - 1], sol.t[k])
                trace.sign_changes.append((float(t), int(node)))
        trace.sign_changes.sort()
    return trace


# ----------------------------------------------------------------------
# Pinning bounds
# ----------------------------------------------------------------------
def invariant_ball_radius(g: Graph) -> float:
    """sqrt((17/4) n d_+^r): the V-ball every trajectory enters and stays in"""
    return math.sqrt(17 / 4 * g.n * g.d_plus ** g.r)


def _alpha(u0: np.ndarray, rule: str) -> float:
    smallest = float(np.min(np.abs(u0)))
    if rule == "clamp":
        return min(smallest, ALPHA_CLAMP)
    if rule == "optimal":
        return min(smallest, 1 / math.sqrt(3))
    raise InvalidParameter(f"Unknown alpha rule {rule!r}; expected one of {ALPHA_RULES}")


@dataclass(frozen=True)
class AcPinningBounds:
    eps_rho: float
    eps_kappa: float
    alpha: float
    C: float
    rho: float
    laplacian_sup: float

    def as_tuple(self) -> Tuple[float, float]:
        return self.eps_rho, self.eps_kappa

    def to_dict(self) -> Dict:
        return dict(self.__dict__)


def ac_pinning_report(
    g: Graph,
    u0: NodeFunction,
    kappa_factor: str = "derived",
    alpha_rule: str = "clamp",
    laplacian_sup: Optional[float] = None,
    decomposition: Optional[SpectralDecomposition] = None,
) -> AcPinningBounds:
    """
    Largest ε for which no node of the flow started at u0 changes sign.

    eps_rho = 4α(1−α²) / (C ρ d_+^{r/2}); eps_kappa = 4α(1−α²) d_+^{-r} / sup|Δu|,
    with sup|Δu| ≤ ρ C d_-^{-r/2} unless laplacian_sup is given. kappa_factor
    "printed" replaces 1−α² with (1−α)² in eps_kappa.
    """
    u0 = g.check_node_function(u0, "u0")
    if np.any(u0 == 0):
        raise ZeroInitialComponent("Every component of u0 must be nonzero", {"nodes": np.flatnonzero(u0 == 0).tolist()})
    if kappa_factor not in KAPPA_FACTORS:
        raise InvalidParameter(f"Unknown kappa factor {kappa_factor!r}; expected one of {KAPPA_FACTORS}")

    alpha = _alpha(u0, alpha_rule)
    C = max(norm_v(g, u0), invariant_ball_radius(g))
    rho = decomposition_for(g, decomposition).rho
    well = 4 * alpha * (1 - alpha ** 2)
    eps_rho = well / (C * rho * g.d_plus ** (g.r / 2))

    if laplacian_sup is None:
        laplacian_sup = rho * C * g.d_minus ** (-g.r / 2)
    elif not laplacian_sup > 0:
        raise InvalidParameter(f"laplacian_sup must be positive, got {laplacian_sup}")
    numerator = well if kappa_factor == "derived" else 4 * alpha * (1 - alpha) ** 2
    eps_kappa = numerator * g.d_plus ** (-g.r) / laplacian_sup

    return AcPinningBounds(
        eps_rho=eps_rho, eps_kappa=eps_kappa, alpha=alpha, C=C, rho=rho, laplacian_sup=laplacian_sup
    )


def ac_pinning_bounds(g: Graph, u0: NodeFunction, **options) -> Tuple[float, float]:
    """(eps_rho, eps_kappa); see ac_pinning_report for the options"""
    return ac_pinning_report(g, u0, **options).as_tuple()


def trajectory_laplacian_sup(g: Graph, trace: AcTrace) -> float:
    """max_t |Δu(t)|_inf over a computed trajectory"""
    return max(norm_v_inf(laplacian_apply(g, u)) for u in trace.states)
