"""
Shared fixtures: seeded generators and a random connected graph factory
"""
from typing import Callable, Tuple

import numpy as np
import pytest

from core.graph import Graph, build_graph


def _weight(rng: np.random.Generator, kind: str) -> float:
    if kind == "unit":
        return 1.0
    if kind == "uniform":
        return float(rng.uniform(0.1, 2.0))
    if kind == "rational":
        return float(rng.integers(1, 9)) / 4
    raise ValueError(f"unknown weight kind {kind!r}")


def random_connected_graph(
    rng: np.random.Generator,
    n: int,
    density: float = 0.3,
    weights: str = "uniform",
    q: float = 1.0,
    r: float = 0.0,
) -> Graph:
    """Random spanning tree plus independent extra edges"""
    order = rng.permutation(n)
    edges = {}
    for k in range(1, n):
        i, j = int(order[k]), int(order[rng.integers(0, k)])
        edges[(min(i, j), max(i, j))] = _weight(rng, weights)
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < density:
                edges[(i, j)] = _weight(rng, weights)
    return build_graph(n, [(i, j, w) for (i, j), w in sorted(edges.items())], q=q, r=r)


def random_nontrivial_set(rng: np.random.Generator, n: int) -> Tuple[int, ...]:
    size = int(rng.integers(1, n))
    return tuple(sorted(int(i) for i in rng.choice(n, size=size, replace=False)))


def random_params(rng: np.random.Generator) -> Tuple[float, float]:
    """(q, r) drawn from the admissible box, with the corners favored"""
    q = float(rng.choice([0.5, 1.0, rng.uniform(0.5, 1.0)]))
    r = float(rng.choice([0.0, 1.0, rng.uniform(0.0, 1.0)]))
    return q, r


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240521)


@pytest.fixture
def random_graph(rng) -> Callable[..., Graph]:
    def factory(n: int, **kwargs) -> Graph:
        return random_connected_graph(rng, n, **kwargs)

    return factory


@pytest.fixture
def random_set(rng) -> Callable[[int], Tuple[int, ...]]:
    return lambda n: random_nontrivial_set(rng, n)
