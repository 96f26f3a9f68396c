import numpy as np
import pytest

from core.errors import DegenerateSample, InvalidParameter, InvalidSize
from generators.assets import buckyball, buckyball_cap, lattices_with_set, torus_initial_set
from generators.families import (
    adjoined_lattices,
    complete,
    cycle,
    grid,
    grid_label,
    path,
    regular_tree,
    star,
    torus,
    tree_coordinates,
)
from generators.moons import MoonsConfig, knn_similarity_graph, moons_initial_set, purity, sample_moons, two_moons


@pytest.mark.parametrize(
    "graph, n, m",
    [
        (complete(5), 5, 10),
        (star(6), 6, 5),
        (cycle(7), 7, 7),
        (path(4), 4, 3),
        (grid(3, 4), 12, 17),
        (torus(4, 3), 12, 24),
        (regular_tree(3, 2), 15, 14),
        (adjoined_lattices(), 200, 451),
    ],
)
def test_family_sizes(graph, n, m):
    assert (graph.n, graph.num_edges) == (n, m)
    assert graph.is_connected()


def test_torus_is_four_regular():
    g, S = torus_initial_set()
    assert g.n == 384
    assert np.all(g.degrees == 4)
    assert 0 < len(S) < g.n


@pytest.mark.parametrize("n1, n2", [(3, 3), (4, 3), (3, 4), (4, 4), (5, 3), (5, 4), (5, 5)])
def test_small_tori_are_four_regular(n1, n2):
    g = torus(n1, n2)
    assert (g.n, g.num_edges) == (n1 * n2, 2 * n1 * n2)
    assert np.all(g.degrees == 4)
    for x in range(n1):
        for y in range(n2):
            i = y * n1 + x
            assert g.weight(i, y * n1 + (x + 1) % n1) == 1.0
            assert g.weight(i, ((y + 1) % n2) * n1 + x) == 1.0


def test_buckyball_is_cubic():
    g = buckyball()
    assert (g.n, g.num_edges) == (60, 90)
    assert np.all(g.degrees == 3)
    assert len(buckyball_cap()) == 14


def test_tree_numbering_puts_the_root_last():
    g = regular_tree(3, 2)
    assert g.degrees[14] == 2
    assert np.all(g.degrees[:8] == 1)
    assert np.all(g.degrees[8:14] == 3)
    coords = tree_coordinates(3, 2)
    assert coords.shape == (15, 2)
    assert coords[14].tolist() == [3.5, 3.0]


def test_lattices_and_their_sets():
    g = adjoined_lattices()
    assert g.degrees[0] == 2
    assert g.weight(10, 31) == 1.0
    assert g.weight(5, 26) == 0.0
    _, S, tau = lattices_with_set("square-pinning")
    assert tau > 0 and len(S) > 0
    with pytest.raises(InvalidParameter):
        lattices_with_set("hexagonal")


def test_grid_labels_are_one_based():
    assert grid_label(0) == 1 and grid_label(8) == 9


@pytest.mark.parametrize("factory, args", [(complete, (1,)), (cycle, (2,)), (path, (1,)), (torus, (2, 5)), (star, (1,))])
def test_too_small_families(factory, args):
    with pytest.raises(InvalidSize):
        factory(*args)


def test_negative_weight_is_rejected():
    with pytest.raises(InvalidParameter):
        complete(3, omega=-1.0)


def test_two_moons_is_deterministic():
    config = MoonsConfig(n_points=200, seed=11, resample_attempts=3)
    g1, truth1, points1 = two_moons(config)
    g2, truth2, points2 = two_moons(config)
    assert np.array_equal(points1, points2)
    assert list(g1.edges()) == list(g2.edges())
    assert truth1 == truth2 == tuple(range(100))
    assert g1.r == 1.0
    assert np.all(g1.degrees > 0)


def test_moons_sample_shape():
    points, labels = sample_moons(MoonsConfig(n_points=40, ambient_dim=6, noise_sigma=0.0))
    assert points.shape == (40, 6)
    assert np.all(points[:, 2:] == 0)
    upper = points[labels == 0]
    assert np.allclose(np.hypot(upper[:, 0], upper[:, 1]), 1.0)
    assert moons_initial_set(points, level=2.0) == ()


@pytest.mark.parametrize("kwargs", [{"n_points": 3}, {"n_points": 7}, {"ambient_dim": 1}, {"noise_sigma": -0.1}, {"k": 0}])
def test_moons_config_validation(kwargs):
    with pytest.raises(InvalidParameter):
        MoonsConfig(**kwargs)


def test_knn_graph_rejects_duplicates():
    points = np.zeros((6, 2))
    with pytest.raises(DegenerateSample):
        knn_similarity_graph(points, 2)


def test_purity_is_symmetric():
    assert purity((0, 1), (0, 1), 4) == 1.0
    assert purity((2, 3), (0, 1), 4) == 1.0
    assert purity((0, 2), (0, 1), 4) == 0.5
