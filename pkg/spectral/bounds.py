#!/usr/bin/env python3
"""
Spectral Bounds
Trace, non-complete, Cheeger-type and spectral-radius bounds on the Laplacian spectrum
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from core.calculus import norm_equivalence_constants, tv_set
from core.graph import Graph, NodeSet

from .decomposition import SpectralDecomposition, decomposition_for

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralBounds:
    lambda2_upper_trace: float
    lambdan_lower_trace: float
    lambda2_upper_noncomplete: Optional[float]
    lambda2_upper_cheeger: Optional[float]
    lambda2_upper_cheeger_min_volume: Optional[float]
    rho_upper: float
    norm_lower_constant: float
    norm_upper_constant: float
    gap_condition: Optional[bool]
    sets_evaluated: int

    def to_dict(self) -> Dict:
        return asdict(self)


GAP_RATIO = math.log(math.sqrt(2)) / math.log(1.5)


def gap_condition(decomposition: SpectralDecomposition) -> bool:
    """λ2/λn < log√2 / log(3/2): pinning and trivial-dynamics regimes do not overlap"""
    return decomposition.lambda2 / decomposition.rho < GAP_RATIO


def component_count(g: Graph) -> int:
    """Number of connected components by graph search"""
    return g.connected_components()[0]


def trace_mean(g: Graph) -> float:
    """(1/(n−1)) Σ d_i^{1−r}"""
    return float(np.sum(g.degrees ** (1 - g.r)) / (g.n - 1))


def noncomplete_bound(g: Graph) -> Optional[float]:
    """Minimum over non-adjacent pairs of the two-node test-function bound"""
    if g.n < 2 or g.is_complete():
        return None
    d, r = g.degrees, g.r
    adjacent = g.dense_adjacency() > 0
    di, dj = d[:, None], d[None, :]
    ratio = (di * dj ** (2 * r) + di ** (2 * r) * dj) / (di ** r * dj ** (2 * r) + di ** (2 * r) * dj ** r)
    mask = ~adjacent & ~np.eye(g.n, dtype=bool)
    return float(ratio[mask].min())


def fiedler_sweep_sets(g: Graph, decomposition: SpectralDecomposition) -> List[NodeSet]:
    """Level sets {i : v2_i ≤ v2_(k)} of the Fiedler vector"""
    order = np.argsort(decomposition.fiedler_vector(), kind="stable")
    return [tuple(sorted(int(i) for i in order[:k])) for k in range(1, g.n)]


def default_cheeger_family(g: Graph, decomposition: SpectralDecomposition) -> List[NodeSet]:
    singletons = [(i,) for i in range(g.n)]
    sweeps = fiedler_sweep_sets(g, decomposition) if g.n > 1 else []
    seen, family = set(), []
    for S in singletons + sweeps:
        if S not in seen:
            seen.add(S)
            family.append(S)
    return family


def cheeger_bounds(g: Graph, sets: Iterable[Sequence[int]]) -> Optional[tuple]:
    """
    Minimum over the supplied sets of vol V·TV^1(S)/(vol S·vol S^c), and of the
    weaker 2·TV^1(S)/min(vol S, vol S^c).
    """
    g1 = g.with_params(q=1.0)
    total = g.volume_all
    best, best_volume = math.inf, math.inf
    for S in sets:
        S = g.node_set(S)
        if len(S) == 0 or len(S) == g.n:
            continue
        cut = tv_set(g1, S)
        vol = g.volume(S)
        best = min(best, total * cut / (vol * (total - vol)))
        best_volume = min(best_volume, 2 * cut / min(vol, total - vol))
    if math.isinf(best):
        return None
    return best, best_volume


def spectral_bounds(
    g: Graph,
    sets: Optional[Iterable[Sequence[int]]] = None,
    decomposition: Optional[SpectralDecomposition] = None,
) -> SpectralBounds:
    """Spectral bounds; the Cheeger part is evaluated on `sets` or on singletons plus Fiedler sweeps"""
    mean = trace_mean(g) if g.n > 1 else 0.0
    decomposition = decomposition_for(g, decomposition)
    if sets is None:
        sets = default_cheeger_family(g, decomposition)
    lower, upper = norm_equivalence_constants(g)
    family = list(sets)
    cheeger = cheeger_bounds(g, family)
    return SpectralBounds(
        lambda2_upper_trace=mean,
        lambdan_lower_trace=mean,
        lambda2_upper_noncomplete=noncomplete_bound(g),
        lambda2_upper_cheeger=cheeger[0] if cheeger else None,
        lambda2_upper_cheeger_min_volume=cheeger[1] if cheeger else None,
        rho_upper=2 * g.d_plus ** (1 - g.r),
        norm_lower_constant=lower,
        norm_upper_constant=upper,
        gap_condition=gap_condition(decomposition) if g.n > 1 else None,
        sets_evaluated=len(family),
    )
