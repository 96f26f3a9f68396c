#!/usr/bin/env python3
"""
Two Moons
Noisy two-moons sample in high dimension and its symmetrized k-NN similarity graph
"""
import logging
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np
from sklearn.neighbors import NearestNeighbors

from core.errors import DegenerateSample, InvalidParameter
from core.graph import Graph, NodeSet, build_graph
from core.settings import settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MoonsConfig:
    n_points: int = 600
    ambient_dim: int = 100
    noise_sigma: float = 0.1
    k: int = 10
    seed: int = settings.seed
    q: float = 1.0
    r: float = 1.0
    resample_attempts: int = 0

    def __post_init__(self):
        if self.n_points < 4 or self.n_points % 2:
            raise InvalidParameter(f"n_points must be even and at least 4, got {self.n_points}")
        if self.ambient_dim < 2:
            raise InvalidParameter(f"ambient_dim must be at least 2, got {self.ambient_dim}")
        if self.noise_sigma < 0:
            raise InvalidParameter(f"noise_sigma must be nonnegative, got {self.noise_sigma}")
        if not 1 <= self.k < self.n_points:
            raise InvalidParameter(f"k must lie in [1, n_points), got {self.k}")


def sample_moons(config: MoonsConfig) -> Tuple[np.ndarray, np.ndarray]:
    """
    Points and labels: the upper arc (cos θ, sin θ) and the shifted lower arc
    (1 − cos θ, 1/2 − sin θ), θ uniform on [0, π], embedded in the first two
    coordinates with Gaussian noise on every coordinate.
    """
    rng = np.random.Generator(np.random.PCG64(config.seed))
    half = config.n_points // 2
    theta = np.pi * rng.random(config.n_points)
    labels = np.repeat([0, 1], half)
    plane = np.where(
        labels[:, None] == 0,
        np.column_stack((np.cos(theta), np.sin(theta))),
        np.column_stack((1 - np.cos(theta), 0.5 - np.sin(theta))),
    )
    points = config.noise_sigma * rng.standard_normal((config.n_points, config.ambient_dim))
    points[:, :2] += plane
    return points, labels


def knn_similarity_graph(points: np.ndarray, k: int, q: float = 1.0, r: float = 1.0) -> Graph:
    """w_ij = max(exp(−4|x_i − x_j|²/d_i²), exp(−4|x_i − x_j|²/d_j²)) on symmetrized k-NN pairs"""
    nn = NearestNeighbors(n_neighbors=k + 1).fit(points)
    distances, indices = nn.kneighbors(points)
    scale = distances[:, k]
    if np.any(scale == 0):
        raise DegenerateSample("Duplicate points make a k-th neighbor distance zero")

    weights = {}
    for i, row in enumerate(indices):
        for j in row[1:]:
            a, b = (i, int(j)) if i < j else (int(j), i)
            if a == b or (a, b) in weights:
                continue
            dist2 = float(np.sum((points[a] - points[b]) ** 2))
            weights[(a, b)] = max(np.exp(-4 * dist2 / scale[a] ** 2), np.exp(-4 * dist2 / scale[b] ** 2))
    if any(w == 0 for w in weights.values()):
        raise DegenerateSample("A similarity weight underflowed to zero")
    edges = [(a, b, w) for (a, b), w in sorted(weights.items())]
    return build_graph(len(points), edges, q=q, r=r)


def two_moons(config: MoonsConfig = MoonsConfig()) -> Tuple[Graph, NodeSet, np.ndarray]:
    """
    Graph, ground-truth set (upper moon) and the noisy points.

    A disconnected sample is redrawn with seed + 1, seed + 2, ... up to
    resample_attempts times before failing.
    """
    for attempt in range(config.resample_attempts + 1):
        points, labels = sample_moons(replace(config, seed=config.seed + attempt))
        g = knn_similarity_graph(points, config.k, q=config.q, r=config.r)
        if g.is_connected():
            break
        logger.warning("Two-moons sample with seed %d is disconnected", config.seed + attempt)
    else:
        raise DegenerateSample("Two-moons k-NN graph is disconnected", {"seed": config.seed})
    truth = tuple(int(i) for i in np.flatnonzero(labels == 0))
    logger.info("Two moons: %d nodes, %d edges", g.n, g.num_edges)
    return g, truth, points


def moons_initial_set(points: np.ndarray, level: float = 0.25) -> NodeSet:
    """Nodes whose noisy second coordinate exceeds `level`"""
    return tuple(int(i) for i in np.flatnonzero(points[:, 1] > level))


def purity(labels_set: NodeSet, truth: NodeSet, n: int) -> float:
    """Fraction of nodes classified correctly, up to swapping the two classes"""
    predicted = np.zeros(n, dtype=bool)
    predicted[list(labels_set)] = True
    actual = np.zeros(n, dtype=bool)
    actual[list(truth)] = True
    agree = float(np.mean(predicted == actual))
    return max(agree, 1 - agree)
