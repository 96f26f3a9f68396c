#!/usr/bin/env python3
"""
Spectral Decomposition
Eigenpairs of Δ = D^{-r}(D - A) through its symmetric similarity transform
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy import linalg

from core.errors import ConvergenceFailure
from core.graph import Graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralDecomposition:
    """
    Eigenvalues in ascending order and V-orthonormal eigenvectors (columns).

    vertex_weights holds d^r so the decomposition can project functions
    without the graph at hand.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    vertex_weights: np.ndarray

    @property
    def rho(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1]) if len(self.eigenvalues) > 1 else 0.0

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def coefficients(self, u: np.ndarray) -> np.ndarray:
        """⟨u, v_k⟩_V for every eigenvector"""
        return self.eigenvectors.T @ (np.asarray(u, dtype=float) * self.vertex_weights)

    def heat(self, u: np.ndarray, t: float) -> np.ndarray:
        """Σ_k e^{−λ_k t} ⟨u, v_k⟩_V v_k"""
        return self.eigenvectors @ (np.exp(-self.eigenvalues * t) * self.coefficients(u))

    def heat_matrix(self, t: float) -> np.ndarray:
        scaled = self.eigenvectors * np.exp(-self.eigenvalues * t)
        return (scaled @ self.eigenvectors.T) * self.vertex_weights[None, :]

    def fiedler_vector(self) -> np.ndarray:
        return self.eigenvectors[:, 1].copy()


def _sign_normalize(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Flip each column so its first non-negligible entry is positive"""
    out = vectors.copy()
    for k in range(out.shape[1]):
        column = out[:, k]
        nz = np.flatnonzero(np.abs(column) > tol)
        if nz.size and column[nz[0]] < 0:
            out[:, k] = -column
    return out


def _order(values: np.ndarray, vectors: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Keep the ascending solver order; ties broken by lexicographic eigenvector order"""
    order: List[int] = []
    start = 0
    for k in range(1, len(values) + 1):
        if k == len(values) or values[k] - values[k - 1] > tol:
            block = sorted(range(start, k), key=lambda c: tuple(np.round(vectors[:, c], 9)))
            order.extend(block)
            start = k
    return np.array(order, dtype=int)


def eigendecompose(g: Graph) -> SpectralDecomposition:
    """
    Solve [D^{1−r} − D^{−r/2} A D^{−r/2}] y = λ y with a dense symmetric solver
    and map back with x = D^{−r/2} y.
    """
    d = g.degrees
    scale = d ** (-g.r / 2)
    sym = np.diag(d ** (1 - g.r)) - scale[:, None] * g.dense_adjacency() * scale[None, :]
    try:
        values, vectors = linalg.eigh(sym)
    except linalg.LinAlgError as e:
        raise ConvergenceFailure(f"Symmetric eigensolver failed: {e}") from e

    vectors = _sign_normalize(scale[:, None] * vectors)
    order = _order(values, vectors)
    values, vectors = values[order], vectors[:, order]
    logger.debug("Eigendecomposition of %r: lambda2=%.6g rho=%.6g", g, values[min(1, len(values) - 1)], values[-1])

    for arr in (values, vectors):
        arr.setflags(write=False)
    weights = np.array(g.vertex_weights)
    weights.setflags(write=False)
    return SpectralDecomposition(eigenvalues=values, eigenvectors=vectors, vertex_weights=weights)


def decomposition_for(g: Graph, decomposition: Optional[SpectralDecomposition] = None) -> SpectralDecomposition:
    if decomposition is not None and decomposition.n == g.n:
        return decomposition
    return eigendecompose(g)
