import math

import numpy as np
import pytest

from core.calculus import mass, norm_v
from core.errors import DisconnectedGraph, InvalidParameter
from core.graph import build_graph
from generators.assets import buckyball
from generators.families import complete, cycle, star
from spectral.bounds import GAP_RATIO, component_count, gap_condition, noncomplete_bound, spectral_bounds
from spectral.decomposition import eigendecompose
from spectral.heat import HeatKernel, heat_evolve, mixing_bound

from .conftest import random_connected_graph, random_params

INSTANCES = 100


@pytest.mark.parametrize(
    "graph, expected",
    [
        (complete(4), [0, 4, 4, 4]),
        (star(5), [0, 1, 1, 1, 5]),
    ],
)
def test_exact_spectra(graph, expected):
    assert np.allclose(eigendecompose(graph).eigenvalues, expected, atol=1e-8)


@pytest.mark.parametrize("n, omega", [(5, 1.0), (8, 0.5), (12, 2.0)])
def test_cycle_spectrum(n, omega):
    expected = np.sort([2 * omega - 2 * omega * math.cos(2 * math.pi * j / n) for j in range(n)])
    assert np.allclose(eigendecompose(cycle(n, omega)).eigenvalues, expected, atol=1e-8)


def test_buckyball_extreme_eigenvalues():
    decomposition = eigendecompose(buckyball())
    assert decomposition.lambda2 == pytest.approx(0.2434, abs=5e-4)
    assert decomposition.rho == pytest.approx(5.6180, abs=5e-4)


def test_eigenpairs_are_v_orthonormal(rng):
    for _ in range(20):
        q, r = random_params(rng)
        g = random_connected_graph(rng, int(rng.integers(2, 20)), q=q, r=r)
        dec = eigendecompose(g)
        X = dec.eigenvectors
        assert np.allclose(X.T @ (X * g.vertex_weights[:, None]), np.eye(g.n), atol=1e-9)
        assert np.allclose(g.laplacian_matrix() @ X, X * dec.eigenvalues, atol=1e-8)
        assert np.all(np.diff(dec.eigenvalues) >= -1e-12)
        assert dec.eigenvalues[0] == pytest.approx(0.0, abs=1e-9)


def test_repeated_decompositions_are_identical():
    first, second = eigendecompose(complete(5)), eigendecompose(complete(5))
    assert np.array_equal(first.eigenvectors, second.eigenvectors)


def test_heat_semigroup_mass_and_comparison(rng):
    for _ in range(INSTANCES):
        q, r = random_params(rng)
        g = random_connected_graph(rng, int(rng.integers(2, 15)), q=q, r=r)
        dec = eigendecompose(g)
        u = rng.standard_normal(g.n)
        v = u + rng.uniform(0.0, 1.0, g.n)
        s, t = rng.uniform(0.0, 2.0, 2)
        assert np.allclose(dec.heat(dec.heat(u, s), t), dec.heat(u, s + t), atol=1e-9)
        assert mass(g, dec.heat(u, t)) == pytest.approx(mass(g, u), abs=1e-9)
        assert np.all(dec.heat(v, t) >= dec.heat(u, t) - 1e-10)
        assert np.allclose(dec.heat_matrix(t) @ u, dec.heat(u, t), atol=1e-9)


def test_heat_evolve_routes_agree(rng):
    g = random_connected_graph(rng, 12, r=0.5)
    u = rng.standard_normal(g.n)
    dec = eigendecompose(g)
    assert np.allclose(heat_evolve(g, u, 0.7), heat_evolve(g, u, 0.7, dec), atol=1e-8)
    assert np.array_equal(heat_evolve(g, u, 0.0), u)
    with pytest.raises(InvalidParameter):
        heat_evolve(g, u, -1.0)


def test_heat_kernel_matches_spectral_action(rng):
    g = random_connected_graph(rng, 10)
    kernel = HeatKernel(g, 1.3)
    u = rng.standard_normal(g.n)
    assert np.allclose(kernel.apply(u), heat_evolve(g, u, 1.3), atol=1e-8)


def test_mixing_bound(rng):
    g = random_connected_graph(rng, 10, r=1.0)
    u0 = rng.standard_normal(g.n)
    eps = 1e-3
    t = mixing_bound(g, u0, eps)
    mean = mass(g, u0) / g.volume_all
    assert np.max(np.abs(heat_evolve(g, u0, t) - mean)) <= eps + 1e-12
    assert mixing_bound(g, np.ones(g.n), eps) == 0.0
    with pytest.raises(DisconnectedGraph):
        mixing_bound(build_graph(4, [(0, 1, 1.0), (2, 3, 1.0)]), np.arange(4.0), eps)


def test_spectral_bounds_hold(rng):
    for _ in range(INSTANCES):
        q, r = random_params(rng)
        g = random_connected_graph(rng, int(rng.integers(3, 15)), q=q, r=r)
        dec = eigendecompose(g)
        b = spectral_bounds(g, decomposition=dec)
        assert dec.lambda2 <= b.lambda2_upper_trace + 1e-9
        assert b.lambdan_lower_trace <= dec.rho + 1e-9
        assert dec.rho <= b.rho_upper + 1e-9
        if b.lambda2_upper_noncomplete is not None:
            assert dec.lambda2 <= b.lambda2_upper_noncomplete + 1e-9
        assert dec.lambda2 <= b.lambda2_upper_cheeger + 1e-9
        assert b.lambda2_upper_cheeger <= b.lambda2_upper_cheeger_min_volume + 1e-9
        assert b.sets_evaluated >= g.n
        assert b.gap_condition == (dec.lambda2 / dec.rho < GAP_RATIO)


def test_noncomplete_bound_absent_on_complete_graphs():
    assert noncomplete_bound(complete(5)) is None
    assert noncomplete_bound(star(5)) == pytest.approx(1.0)


def test_gap_condition_on_complete_graph():
    assert not gap_condition(eigendecompose(complete(6)))


def test_component_count():
    assert component_count(build_graph(5, [(0, 1, 1.0), (2, 3, 1.0), (3, 4, 1.0)])) == 2
    assert component_count(cycle(6)) == 1
