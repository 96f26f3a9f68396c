import numpy as np
import pytest

from core.errors import DisconnectedGraph, InvalidParameter, InvalidSize
from core.graph import build_graph
from dynamics.mcf import (
    McfParams,
    brute_force_minimizer,
    coarea_identity,
    convex_relaxation_solve,
    functional_shift,
    is_dt_minimal,
    mcf_functional,
    mcf_run,
    mcf_step,
    reduced_functional,
    subgradient_certificate,
)
from generators.families import path

from .conftest import random_connected_graph, random_nontrivial_set, random_params

DTS = (0.1, 1.0, 10.0)


def _instance(rng, max_n=12, weights="uniform"):
    q, r = random_params(rng)
    g = random_connected_graph(rng, int(rng.integers(3, max_n + 1)), weights=weights, q=q, r=r)
    return g, random_nontrivial_set(rng, g.n), float(rng.choice(DTS))


def test_min_cut_step_matches_exhaustive_search(rng):
    for _ in range(200):
        g, S, dt = _instance(rng)
        best, minimizers = brute_force_minimizer(g, S, dt)
        result = mcf_step(g, S, McfParams(dt=dt))
        assert result.objective == pytest.approx(best, abs=1e-7)
        for candidate in (result.next_set, result.minimal_set, result.maximal_set):
            assert candidate in minimizers
        for other in minimizers:
            assert set(result.minimal_set) <= set(other) <= set(result.maximal_set)
        assert result.minimizer_unique == (len(minimizers) == 1)
        if S in minimizers:
            assert result.next_set == S


def test_lexicographic_tie_break_takes_the_minimal_set(rng):
    for _ in range(30):
        g, S, dt = _instance(rng)
        result = mcf_step(g, S, McfParams(dt=dt, tie_break="lexicographic-min"))
        assert result.next_set == result.minimal_set


def test_functional_shift(rng):
    for _ in range(30):
        g, S, dt = _instance(rng)
        S_hat = random_nontrivial_set(rng, g.n)
        assert mcf_functional(g, S_hat, S, dt) - reduced_functional(g, S_hat, S, dt) == pytest.approx(
            functional_shift(g, S, dt), abs=1e-9
        )


def test_lp_relaxation_attains_the_minimum(rng):
    for _ in range(30):
        g, S, dt = _instance(rng, weights="rational")
        best, _ = brute_force_minimizer(g, S, dt)
        u, level = convex_relaxation_solve(g, S, dt, method="lp")
        assert np.all(np.abs(u) <= 1 + 1e-9)
        assert reduced_functional(g, level, S, dt) == pytest.approx(best, abs=1e-6)
        _, cut_level = convex_relaxation_solve(g, S, dt)
        assert reduced_functional(g, cut_level, S, dt) == pytest.approx(best, abs=1e-7)


def test_coarea_identity(rng):
    for _ in range(30):
        g, S, dt = _instance(rng)
        u = rng.uniform(-1.0, 1.0, g.n)
        lhs, rhs = coarea_identity(g, u, S, dt)
        assert lhs == pytest.approx(rhs, abs=1e-8)
    with pytest.raises(InvalidParameter):
        coarea_identity(g, np.full(g.n, 2.0), S, dt)


def test_subgradient_certificate(rng):
    for _ in range(30):
        g, S, dt = _instance(rng, weights="rational")
        certificate = subgradient_certificate(g, S, dt)
        assert certificate.valid, certificate.violations


def test_dt_minimality_on_a_path():
    g = path(6)
    assert is_dt_minimal(g, (0, 1, 2), 0.1)
    assert not is_dt_minimal(g, (0, 1, 2), 100.0)


def test_run_stops_at_fixed_point_or_trivial_set(rng):
    for _ in range(20):
        g, S, dt = _instance(rng)
        sets = mcf_run(g, S, McfParams(dt=dt))
        assert sets[0] == S
        assert all(a != b for a, b in zip(sets, sets[1:]))
        final = sets[-1]
        if len(final) not in (0, g.n):
            assert is_dt_minimal(g, final, dt)


def test_input_errors():
    with pytest.raises(InvalidSize):
        brute_force_minimizer(path(17), (0,), 1.0)
    with pytest.raises(DisconnectedGraph):
        mcf_step(build_graph(4, [(0, 1, 1.0), (2, 3, 1.0)]), (0,), McfParams(dt=1.0))
    with pytest.raises(InvalidParameter):
        McfParams(dt=0.0)
    with pytest.raises(InvalidParameter):
        McfParams(dt=1.0, tie_break="random")
    with pytest.raises(InvalidParameter):
        convex_relaxation_solve(path(4), (0,), 1.0, method="newton")


def test_squared_distance_step_matches_exhaustive_search(rng):
    for _ in range(50):
        g, S, dt = _instance(rng, max_n=10)
        best, minimizers = brute_force_minimizer(g, S, dt, distance="squared")
        result = mcf_step(g, S, McfParams(dt=dt, distance="squared"))
        assert result.objective == pytest.approx(best, abs=1e-7)
        assert result.next_set in minimizers
        assert mcf_functional(g, result.next_set, S, dt, "squared") - reduced_functional(
            g, result.next_set, S, dt, "squared"
        ) == pytest.approx(functional_shift(g, S, dt, "squared"), abs=1e-9)


def test_squared_distance_freezes_at_least_as_often(rng):
    for _ in range(40):
        g = random_connected_graph(rng, int(rng.integers(4, 11)), weights="unit")
        S = random_nontrivial_set(rng, g.n)
        dt = float(rng.choice(DTS))
        if is_dt_minimal(g, S, dt):
            assert is_dt_minimal(g, S, dt, distance="squared")


def test_squared_distance_weights_far_nodes_more():
    g = path(6)
    S = (0, 1, 2)
    for dt in DTS:
        # node 0 sits two edges from the interface {2, 3}
        assert mcf_functional(g, (), S, dt, "squared") - mcf_functional(g, (), S, dt) == pytest.approx(2.0 / dt)
        assert mcf_functional(g, (0, 1), S, dt, "squared") == pytest.approx(mcf_functional(g, (0, 1), S, dt))
        assert mcf_functional(g, (0, 1, 2, 3), S, dt, "squared") == pytest.approx(
            mcf_functional(g, (0, 1, 2, 3), S, dt)
        )


def test_unknown_distance_is_rejected():
    with pytest.raises(InvalidParameter):
        McfParams(dt=1.0, distance="euclidean")
    with pytest.raises(InvalidParameter):
        reduced_functional(path(4), (0,), (0,), 1.0, distance="euclidean")
