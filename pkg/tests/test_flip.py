import math

import numpy as np
import pytest

from core.errors import InvalidParameter
from core.graph import build_graph
from dynamics.flip import flip_analysis, local_flip_interval, r1_corollary_conditions, star_flip_criterion
from dynamics.mbo import mbo_step
from generators.families import cycle, grid, star

from .conftest import random_connected_graph, random_nontrivial_set, random_params

GRID_SET = (3, 5, 6, 7, 8)


def test_grid_reduced_interval_is_exact():
    g = grid(3, 3, r=1.0)
    analysis = flip_analysis(g, GRID_SET, 4)
    assert analysis.kappa == pytest.approx(-0.75)
    assert analysis.closed
    assert analysis.s1 == (3, 5, 7)
    tau1, tau2 = local_flip_interval(g, GRID_SET, 4)
    assert tau1 == pytest.approx(3 - math.sqrt(5), abs=1e-12)
    assert tau2 == pytest.approx(3 + math.sqrt(5), abs=1e-12)
    assert local_flip_interval(g, GRID_SET, 4, gap="dirichlet") is None


def test_grid_node_enters_inside_the_window():
    g = grid(3, 3, r=1.0)
    tau1, tau2 = local_flip_interval(g, GRID_SET, 4)
    assert 4 not in mbo_step(g, GRID_SET, tau1 / 2)
    assert any(4 in mbo_step(g, GRID_SET, tau) for tau in np.linspace(tau1, tau2, 18)[1:-1])


def test_dirichlet_gap_dominates_squared_curvature(rng):
    for _ in range(100):
        q, r = random_params(rng)
        g = random_connected_graph(rng, int(rng.integers(3, 15)), q=q, r=r)
        S = random_nontrivial_set(rng, g.n)
        node = int(rng.integers(g.n))
        analysis = flip_analysis(g, S, node)
        assert analysis.gap_dirichlet >= analysis.kappa ** 2 - 1e-9
        assert analysis.interval("dirichlet") is None


def test_window_does_not_guarantee_a_flip():
    g = cycle(4, r=1.0)
    S = (1, 3)
    tau1, tau2 = local_flip_interval(g, S, 0)
    assert tau1 == pytest.approx(2 - math.sqrt(2))
    assert tau2 == pytest.approx(2 + math.sqrt(2))
    for tau in np.linspace(tau1, tau2, 12):
        assert 0 not in mbo_step(g, S, tau)


def test_unknown_gap_kind():
    g = grid(3, 3, r=1.0)
    with pytest.raises(InvalidParameter):
        local_flip_interval(g, GRID_SET, 4, gap="spectral")
    with pytest.raises(InvalidParameter):
        flip_analysis(g, GRID_SET, 4).gap("spectral")


def test_star_criterion():
    assert star_flip_criterion(star(5, r=1.0), (1, 2, 3, 4), 0)
    assert not star_flip_criterion(star(5, r=1.0), (0,), 1)
    with pytest.raises(InvalidParameter):
        star_flip_criterion(star(5), (1, 2, 3, 4), 0)


def test_r1_corollary_conditions():
    edges = [(0, 1, 1.0), (0, 2, 1.0)] + [(1, j, 1.0) for j in (3, 4, 5)] + [(2, j, 1.0) for j in (6, 7, 8)]
    g = build_graph(9, edges, r=1.0)
    S = tuple(range(1, 9))
    assert r1_corollary_conditions(g, S, 0, 0.5)
    assert local_flip_interval(g, S, 0) is not None
    assert not r1_corollary_conditions(star(5, r=1.0), (1, 2, 3, 4), 0, 0.5)
    with pytest.raises(InvalidParameter):
        r1_corollary_conditions(g, S, 0, 1.0)
    with pytest.raises(InvalidParameter):
        r1_corollary_conditions(g.with_params(r=0.0), S, 0, 0.5)


def test_analysis_serializes():
    payload = flip_analysis(grid(3, 3, r=1.0), GRID_SET, 4).to_dict()
    assert payload["node"] == 4 and payload["closed"]
    assert payload["interval_dirichlet"] is None
    assert set(payload["reduced_degrees"]) == {"3", "4", "5", "7"}
