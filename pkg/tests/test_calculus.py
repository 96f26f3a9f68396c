import math

import numpy as np
import pytest

from core.calculus import (
    balanced_cut,
    clustering_coefficient,
    clustering_identity,
    coarea_tv,
    dirichlet_energy,
    divergence,
    edge_function_from_dict,
    gamma_functional,
    gamma_limit_value,
    gradient,
    inner_e,
    inner_v,
    is_skew_symmetric,
    laplacian_apply,
    mass,
    norm_equivalence_constants,
    norm_v,
    norm_v_inf,
    one_laplacian,
    phi_tv,
    ratio_cut,
    tv_anisotropic,
    tv_isotropic,
    tv_max_formulation,
    tv_set,
)
from core.errors import DegreeTooSmall, InvalidNode, InvalidPartition, WeightedGraph
from core.graph import build_graph
from generators.families import complete, grid, path, star

from .conftest import random_connected_graph, random_params

INSTANCES = 100


def test_k2_operators():
    g = complete(2)
    u = np.array([0.0, 1.0])
    assert gradient(g, u).tolist() == [1.0, -1.0]
    assert laplacian_apply(g, u).tolist() == [-1.0, 1.0]
    assert tv_anisotropic(g, u) == 1.0
    assert tv_isotropic(g, u) == pytest.approx(math.sqrt(2))
    # φ = ∇u/|∇u| has magnitude √2 on each edge of K_2
    assert np.allclose(one_laplacian(g, u), [-math.sqrt(2), math.sqrt(2)])


def test_divergence_of_explicit_field():
    g = path(3)
    phi = edge_function_from_dict(g, {(0, 1): 1.0, (1, 0): -1.0, (1, 2): 2.0, (2, 1): -2.0})
    assert is_skew_symmetric(g, phi)
    assert np.allclose(divergence(g, phi), [-1.0, -1.0, 2.0])
    with pytest.raises(InvalidNode):
        edge_function_from_dict(g, {(0, 2): 1.0})


def test_adjointness_and_laplacian_identities(rng):
    for _ in range(INSTANCES):
        q, r = random_params(rng)
        g = random_connected_graph(rng, int(rng.integers(2, 15)), q=q, r=r)
        u = rng.standard_normal(g.n)
        phi = rng.standard_normal(len(g.w))
        assert inner_e(g, gradient(g, u), phi) == pytest.approx(inner_v(g, u, divergence(g, phi)), abs=1e-9)
        assert np.allclose(divergence(g, gradient(g, u)), laplacian_apply(g, u))
        assert np.allclose(laplacian_apply(g, u), g.laplacian_matrix() @ u)
        assert dirichlet_energy(g, u) == pytest.approx(0.5 * inner_v(g, u, laplacian_apply(g, u)), abs=1e-9)
        assert mass(g, laplacian_apply(g, u)) == pytest.approx(0.0, abs=1e-9)


def test_total_variation_formulations_agree(rng):
    for _ in range(INSTANCES):
        q, r = random_params(rng)
        g = random_connected_graph(rng, int(rng.integers(2, 15)), q=q, r=r)
        u = np.round(rng.standard_normal(g.n), 2)
        tv = tv_anisotropic(g, u)
        assert tv_max_formulation(g, u) == pytest.approx(tv, abs=1e-9)
        assert coarea_tv(g, u) == pytest.approx(tv, abs=1e-9)
        field = phi_tv(g, u)
        assert inner_v(g, divergence(g, field), u) == pytest.approx(tv_isotropic(g, u), abs=1e-9)


def test_norm_equivalence(rng):
    for _ in range(INSTANCES):
        q, r = random_params(rng)
        g = random_connected_graph(rng, int(rng.integers(2, 15)), q=q, r=r)
        u = rng.standard_normal(g.n)
        lower, upper = norm_equivalence_constants(g)
        assert lower * norm_v_inf(u) <= norm_v(g, u) + 1e-12
        assert norm_v(g, u) <= upper * norm_v_inf(u) + 1e-12


def test_tv_set_is_the_cut():
    g = build_graph(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0), (0, 3, 0.5)], q=0.5)
    assert tv_set(g, (0, 1)) == pytest.approx(math.sqrt(2.0) + math.sqrt(0.5))


def test_balanced_cut_volume_weighting():
    g = path(4)
    # cut 1; degrees 1, 2, 2, 1
    assert balanced_cut(g, [(0, 1), (2, 3)], r=1.0) == pytest.approx(1 / 3 + 1 / 3)
    assert balanced_cut(g, [(0, 1), (2, 3)], r=0.0) == pytest.approx(1 / 2 + 1 / 2)
    assert ratio_cut is balanced_cut
    with pytest.raises(InvalidPartition):
        balanced_cut(g, [(0, 1), (1, 2, 3)])
    with pytest.raises(InvalidPartition):
        balanced_cut(g, [(0, 1), (2,)])


def test_clustering_coefficient_and_identity():
    k4 = complete(4)
    assert clustering_coefficient(k4, 0) == pytest.approx(1.0)
    assert clustering_identity(k4, 0) == pytest.approx(1.0)
    g = grid(3, 3)
    assert clustering_coefficient(g, 4) == 0.0
    assert clustering_identity(g, 4) == pytest.approx(0.0)
    with pytest.raises(DegreeTooSmall):
        clustering_coefficient(star(4), 1)
    with pytest.raises(WeightedGraph):
        clustering_coefficient(complete(4, omega=2.0), 0)


def test_clustering_identity_on_random_unit_graphs(rng):
    for _ in range(30):
        g = random_connected_graph(rng, int(rng.integers(4, 12)), density=0.5, weights="unit")
        for i in range(g.n):
            if g.degrees[i] >= 2:
                assert clustering_identity(g, i) == pytest.approx(clustering_coefficient(g, i), abs=1e-12)


def test_gamma_functional_on_indicators():
    g = path(3)
    chi = np.array([1.0, 1.0, 0.0])

    def square(x):
        return x * x

    assert gamma_functional(g, chi, 0.1, square) == pytest.approx(gamma_limit_value(g, chi, square))
    assert math.isinf(gamma_limit_value(g, np.array([0.5, 1.0, 0.0]), square))
