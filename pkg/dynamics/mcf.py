#!/usr/bin/env python3
"""
Graph Mean Curvature Flow
Discrete-time curvature flow whose steps are exact minimizers found by s-t min cut
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms.flow import preflow_push
from scipy.optimize import linprog

from core.calculus import EdgeFunction, NodeFunction, divergence, inner_v, tv_anisotropic, tv_set
from core.errors import DisconnectedGraph, InvalidParameter, InvalidSize, NumericalError
from core.graph import Graph, NodeSet
from core.settings import settings
from geometry.distance import signed_distance

logger = logging.getLogger(__name__)

SOURCE = "source"
SINK = "sink"
TIE_BREAKS = ("prefer-previous", "lexicographic-min")
DISTANCES = ("interface", "squared")
MAX_DENOMINATOR = 10 ** 6
BRUTE_FORCE_LIMIT = 16
OBJECTIVE_TOL = 1e-9


@dataclass(frozen=True)
class McfParams:
    """
    distance="squared" is experimental: changed nodes pay (d^Σ)² instead of d^Σ.
    The squared norm ‖χ_{S^c} d^S − χ_S d^{S^c}‖² taken literally does not depend
    on Ŝ, so the square is applied to the penalty weight of each changed node.
    Larger weights away from Σ make the flow freeze sooner.
    """

    dt: float
    max_steps: int = settings.mcf_max_steps
    tie_break: str = "prefer-previous"
    distance: str = "interface"

    def __post_init__(self):
        if self.distance not in DISTANCES:
            raise InvalidParameter(f"Unknown distance {self.distance!r}; expected one of {DISTANCES}")
        if not self.dt > 0 or not math.isfinite(self.dt):
            raise InvalidParameter(f"dt must be positive and finite, got {self.dt}")
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise InvalidParameter(f"max_steps must be a positive integer, got {self.max_steps}")
        if self.tie_break not in TIE_BREAKS:
            raise InvalidParameter(f"Unknown tie_break {self.tie_break!r}; expected one of {TIE_BREAKS}")


@dataclass(frozen=True)
class McfStepResult:
    """
    One flow step. minimal_set and maximal_set are the inclusion-minimal and
    inclusion-maximal minimizers; every minimizer lies between them.
    """

    next_set: NodeSet
    objective: float
    minimizer_unique: bool
    minimal_set: NodeSet
    maximal_set: NodeSet
    cut_value: float

    def to_dict(self) -> Dict:
        return {
            "set": list(self.next_set),
            "objective": self.objective,
            "minimizer_unique": self.minimizer_unique,
            "cut_value": self.cut_value,
        }


# ----------------------------------------------------------------------
# Functionals
# ----------------------------------------------------------------------
def _interface_distance(g: Graph, S: Iterable[int]) -> Tuple[NodeSet, np.ndarray]:
    members = g.require_nontrivial(S)
    if not g.is_connected():
        raise DisconnectedGraph("Curvature flow needs finite distances on a connected graph")
    return members, signed_distance(g, members)


def _penalty_distance(g: Graph, S: Iterable[int], distance: str) -> Tuple[NodeSet, np.ndarray]:
    """Signed penalty weight per node: sd^Σ, or sd^Σ |sd^Σ| for the squared variant"""
    if distance not in DISTANCES:
        raise InvalidParameter(f"Unknown distance {distance!r}; expected one of {DISTANCES}")
    members, sd = _interface_distance(g, S)
    return members, sd * np.abs(sd) if distance == "squared" else sd


def mcf_functional(g: Graph, S_hat: Iterable[int], S: Iterable[int], dt: float, distance: str = "interface") -> float:
    """TV(Ŝ) − TV(S) + (1/dt) ⟨|χ_Ŝ − χ_S|, d^Σ⟩_V"""
    members, sd = _penalty_distance(g, S, distance)
    S_hat = g.node_set(S_hat)
    change = np.abs(g.indicator(S_hat) - g.indicator(members))
    return tv_set(g, S_hat) - tv_set(g, members) + inner_v(g, change, np.abs(sd)) / dt


def reduced_functional(g: Graph, S_hat: Iterable[int], S: Iterable[int], dt: float, distance: str = "interface") -> float:
    """TV(Ŝ) − TV(S) + (1/dt) ⟨χ_Ŝ, sd^Σ⟩_V; same minimizers as the full functional"""
    members, sd = _penalty_distance(g, S, distance)
    S_hat = g.node_set(S_hat)
    return tv_set(g, S_hat) - tv_set(g, members) + inner_v(g, g.indicator(S_hat), sd) / dt


def functional_shift(g: Graph, S: Iterable[int], dt: float, distance: str = "interface") -> float:
    """Full minus reduced functional: (1/dt) ⟨χ_S, d^Σ⟩_V, independent of Ŝ"""
    members, sd = _penalty_distance(g, S, distance)
    return inner_v(g, g.indicator(members), np.abs(sd)) / dt


# ----------------------------------------------------------------------
# Min-cut network
# ----------------------------------------------------------------------
def _integer_scale(values: Sequence[float]) -> Optional[int]:
    """Common denominator when every value is a rational with denominator <= 1e6"""
    denominators = []
    for v in values:
        exact = Fraction(float(v))
        limited = exact.limit_denominator(MAX_DENOMINATOR)
        if limited != exact:
            return None
        denominators.append(limited.denominator)
    scale = reduce(lambda a, b: a * b // math.gcd(a, b), denominators, 1)
    return scale if scale <= MAX_DENOMINATOR ** 2 else None


@dataclass
class _Network:
    residual: nx.DiGraph
    scale: float
    flow_value: float
    tol: float


def _terminal_costs(g: Graph, sd: np.ndarray, dt: float) -> np.ndarray:
    """c_i = sd_i d_i^r / dt; minimizing TV(Ŝ) + Σ_{i∈Ŝ} c_i is the step problem"""
    return sd * g.vertex_weights / dt


def _solve_network(g: Graph, costs: np.ndarray) -> _Network:
    edge_caps = g.edge_weights_q
    scale = _integer_scale(list(edge_caps) + list(costs))
    convert = (lambda x: int(round(float(x) * scale))) if scale else float

    network = nx.DiGraph()
    network.add_nodes_from(range(g.n))
    network.add_nodes_from([SOURCE, SINK])
    for i, j, cap in zip(g.src, g.dst, edge_caps):
        network.add_edge(int(i), int(j), capacity=convert(cap))
    for i, c in enumerate(costs):
        if c > 0:
            network.add_edge(i, SINK, capacity=convert(c))
        elif c < 0:
            network.add_edge(SOURCE, i, capacity=convert(-c))

    residual = preflow_push(network, SOURCE, SINK, value_only=False)
    flow_value = residual.graph["flow_value"]
    total = float(np.sum(edge_caps) + np.sum(np.abs(costs)))
    tol = 0 if scale else 1e-12 * max(total, 1.0)
    logger.debug("Min cut: flow=%s integer_scale=%s", flow_value, scale)
    return _Network(residual=residual, scale=float(scale or 1), flow_value=float(flow_value), tol=tol)


def _residual_capacity(residual: nx.DiGraph, u, v) -> float:
    attrs = residual[u][v]
    return attrs["capacity"] - attrs["flow"]


def _source_side(net: _Network) -> NodeSet:
    """Nodes reachable from the source in the residual network"""
    seen = {SOURCE}
    stack = [SOURCE]
    while stack:
        u = stack.pop()
        for v in net.residual.successors(u):
            if v not in seen and _residual_capacity(net.residual, u, v) > net.tol:
                seen.add(v)
                stack.append(v)
    return tuple(sorted(v for v in seen if v not in (SOURCE, SINK)))


def _sink_reachers(net: _Network) -> set:
    """Nodes that can still push flow to the sink"""
    seen = {SINK}
    stack = [SINK]
    while stack:
        v = stack.pop()
        for u in net.residual.predecessors(v):
            if u not in seen and _residual_capacity(net.residual, u, v) > net.tol:
                seen.add(u)
                stack.append(u)
    return seen


def _minimizer_range(g: Graph, net: _Network) -> Tuple[NodeSet, NodeSet]:
    minimal = _source_side(net)
    reachers = _sink_reachers(net)
    maximal = tuple(i for i in range(g.n) if i not in reachers)
    return minimal, maximal


# ----------------------------------------------------------------------
# Flow
# ----------------------------------------------------------------------
def mcf_step(g: Graph, S: Iterable[int], params: McfParams) -> McfStepResult:
    """Exact minimizer of the reduced functional via s-t min cut"""
    members, sd = _penalty_distance(g, S, params.distance)
    costs = _terminal_costs(g, sd, params.dt)
    net = _solve_network(g, costs)
    minimal, maximal = _minimizer_range(g, net)

    best = reduced_functional(g, minimal, members, params.dt, params.distance)
    chosen = minimal
    if params.tie_break == "prefer-previous":
        current = reduced_functional(g, members, members, params.dt, params.distance)
        if current <= best + OBJECTIVE_TOL * (1 + abs(best)):
            chosen, best = members, current

    cut_value = net.flow_value / net.scale
    expected = best + tv_set(g, members) + float(np.sum(-costs[costs < 0]))
    if abs(cut_value - expected) > 1e-7 * (1 + abs(expected)):
        raise NumericalError(
            "Min-cut value disagrees with the objective",
            {"cut_value": cut_value, "expected": expected},
        )
    logger.debug("MCF step: |S|=%d -> |S'|=%d objective=%.12g", len(members), len(chosen), best)
    return McfStepResult(
        next_set=chosen,
        objective=best,
        minimizer_unique=minimal == maximal,
        minimal_set=minimal,
        maximal_set=maximal,
        cut_value=cut_value,
    )


def mcf_trajectory(g: Graph, S0: Iterable[int], params: McfParams) -> List[McfStepResult]:
    """Step results until a fixed point, an empty or full set, or max_steps"""
    current = g.node_set(S0)
    steps: List[McfStepResult] = []
    for _ in range(params.max_steps):
        if len(current) in (0, g.n):
            break
        result = mcf_step(g, current, params)
        steps.append(result)
        if result.next_set == current:
            break
        current = result.next_set
    else:
        logger.warning("MCF stopped at max_steps=%d", params.max_steps)
    return steps


def mcf_run(g: Graph, S0: Iterable[int], params: McfParams) -> List[NodeSet]:
    """S_0, S_1, ... up to the first repeated, empty or full set"""
    start = g.node_set(S0)
    sets = [start]
    for result in mcf_trajectory(g, start, params):
        if result.next_set != sets[-1]:
            sets.append(result.next_set)
    return sets


def is_dt_minimal(g: Graph, S: Iterable[int], dt: float, distance: str = "interface") -> bool:
    """S minimizes its own step problem"""
    members = g.node_set(S)
    return mcf_step(g, members, McfParams(dt=dt, max_steps=1, distance=distance)).next_set == members


def brute_force_minimizer(
    g: Graph, S: Iterable[int], dt: float, distance: str = "interface"
) -> Tuple[float, List[NodeSet]]:
    """Exhaustive minimum of the reduced functional and all sets attaining it"""
    if g.n > BRUTE_FORCE_LIMIT:
        raise InvalidSize(f"Exhaustive search is limited to n <= {BRUTE_FORCE_LIMIT}, got {g.n}")
    members, sd = _penalty_distance(g, S, distance)
    masks = (np.arange(2 ** g.n)[:, None] >> np.arange(g.n)[None, :]) & 1
    upper = g.src < g.dst
    i, j = g.src[upper], g.dst[upper]
    cuts = (masks[:, i] != masks[:, j]) @ g.edge_weights_q[upper]
    values = cuts - tv_set(g, members) + masks @ (sd * g.vertex_weights) / dt
    best = float(values.min())
    hits = np.flatnonzero(values <= best + OBJECTIVE_TOL * (1 + abs(best)))
    minimizers = [tuple(int(k) for k in np.flatnonzero(masks[h])) for h in hits]
    return best, minimizers


# ----------------------------------------------------------------------
# Convex relaxation
# ----------------------------------------------------------------------
def relaxation_objective(g: Graph, u: NodeFunction, S: Iterable[int], dt: float) -> float:
    """F(u) = TV(u) + (1/dt) ⟨u, sd^Σ⟩_V"""
    _, sd = _interface_distance(g, S)
    return tv_anisotropic(g, u) + inner_v(g, u, sd) / dt


def coarea_identity(g: Graph, u: NodeFunction, S: Iterable[int], dt: float, m: float = 1.0) -> Tuple[float, float]:
    """
    Both sides of F(u) + (m/dt)⟨χ_V, sd⟩_V = ∫_{−m}^{m} (𝓕'(E(s)) + TV(S)) ds
    with E(s) = {u > s}, for u with values in [−m, m].
    """
    members, sd = _interface_distance(g, S)
    u = g.check_node_function(u)
    if np.any(np.abs(u) > m + 1e-12):
        raise InvalidParameter(f"u must take values in [-{m}, {m}]")
    lhs = relaxation_objective(g, u, members, dt) + m * inner_v(g, np.ones(g.n), sd) / dt

    breaks = np.unique(np.concatenate(([-m], np.clip(u, -m, m), [m])))
    base = tv_set(g, members)
    rhs = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        level = tuple(int(i) for i in np.flatnonzero(u > lo))
        rhs += (hi - lo) * (reduced_functional(g, level, members, dt) + base)
    return lhs, rhs


def _relaxation_lp(g: Graph, sd: np.ndarray, dt: float, m: float) -> np.ndarray:
    """min Σ ω^q t_e + (1/dt) Σ sd_i d_i^r u_i with t_e ≥ |u_i − u_j|, |u| ≤ m"""
    upper = g.src < g.dst
    i, j = g.src[upper], g.dst[upper]
    n, e = g.n, len(i)
    c = np.concatenate((sd * g.vertex_weights / dt, g.edge_weights_q[upper]))
    rows = np.arange(e)
    A = np.zeros((2 * e, n + e))
    A[rows, i], A[rows, j], A[rows, n + rows] = 1.0, -1.0, -1.0
    A[e + rows, i], A[e + rows, j], A[e + rows, n + rows] = -1.0, 1.0, -1.0
    bounds = [(-m, m)] * n + [(0, None)] * e
    res = linprog(c, A_ub=A, b_ub=np.zeros(2 * e), bounds=bounds, method="highs")
    if res.status != 0:
        raise NumericalError(f"Relaxation LP failed: {res.message}")
    return res.x[:n]


def convex_relaxation_solve(
    g: Graph, S: Iterable[int], dt: float, m: float = 1.0, method: str = "cut"
) -> Tuple[NodeFunction, NodeSet]:
    """
    Minimizer u* of F over [−m, m]^V and its zero superlevel set.

    method="cut" builds u* = m(2χ_{S*} − 1) from the min-cut minimizer;
    method="lp" solves the relaxation as a linear program.
    """
    if not m > 0:
        raise InvalidParameter(f"m must be positive, got {m}")
    members, sd = _interface_distance(g, S)
    if method == "cut":
        S_star = mcf_step(g, members, McfParams(dt=dt, max_steps=1)).next_set
        u = m * (2 * g.indicator(S_star) - 1)
    elif method == "lp":
        u = _relaxation_lp(g, sd, dt, m)
    else:
        raise InvalidParameter(f"Unknown relaxation method {method!r}")
    return u, tuple(int(i) for i in np.flatnonzero(u > 0))


# ----------------------------------------------------------------------
# Optimality certificate
# ----------------------------------------------------------------------
@dataclass
class SubgradientCertificate:
    """φ = −F/ω^q from a maximum flow F, with the sign pattern it must satisfy"""

    phi: EdgeFunction
    residual: NodeFunction
    upper_nodes: NodeSet
    bounded: bool
    sign_consistent: bool
    gradient_aligned: bool
    tol: float = 1e-8
    violations: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.bounded and self.sign_consistent and self.gradient_aligned


def subgradient_certificate(g: Graph, S: Iterable[int], dt: float, tol: float = 1e-8) -> SubgradientCertificate:
    """
    Dual certificate for u* = 2χ_{S*} − 1: |φ| ≤ 1, φ = sgn(∇u*) on cut edges, and
    div φ + sd/dt ≤ 0 where u* = 1, ≥ 0 where u* = −1.
    """
    members, sd = _interface_distance(g, S)
    costs = _terminal_costs(g, sd, dt)
    net = _solve_network(g, costs)
    S_star, _ = _minimizer_range(g, net)

    flow = np.array([
        (net.residual[int(i)][int(j)]["flow"]) / net.scale for i, j in zip(g.src, g.dst)
    ], dtype=float)
    net_flow = 0.5 * (flow - flow[g.reverse])
    phi = -net_flow / g.edge_weights_q
    residual = divergence(g, phi) + sd / dt

    upper = g.membership(S_star)
    u_star = 2 * upper.astype(float) - 1
    grad_sign = np.sign(u_star[g.dst] - u_star[g.src])
    violations = []
    bounded = bool(np.all(np.abs(phi) <= 1 + tol))
    if not bounded:
        violations.append("|phi| exceeds 1")
    sign_consistent = bool(np.all(residual[upper] <= tol) and np.all(residual[~upper] >= -tol))
    if not sign_consistent:
        violations.append("multiplier sign pattern violated")
    cut = grad_sign != 0
    gradient_aligned = bool(np.all(np.abs(phi[cut] - grad_sign[cut]) <= tol))
    if not gradient_aligned:
        violations.append("phi differs from sgn(grad u*) on cut edges")
    return SubgradientCertificate(
        phi=phi,
        residual=residual,
        upper_nodes=S_star,
        bounded=bounded,
        sign_consistent=sign_consistent,
        gradient_aligned=gradient_aligned,
        tol=tol,
        violations=violations,
    )
