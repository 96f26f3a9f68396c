import math

import numpy as np
import pytest

from core.errors import InvalidParameter, ZeroInitialComponent
from dynamics.allen_cahn import (
    AcParams,
    ac_pinning_bounds,
    ac_pinning_report,
    ac_rhs,
    ace_evolve,
    double_well,
    gl_energy,
    invariant_ball_radius,
    trajectory_laplacian_sup,
)
from generators.families import complete, path

from .conftest import random_connected_graph, random_params


def _signed_start(rng, n):
    return rng.choice([-1.0, 1.0], n) * rng.uniform(0.5, 1.5, n)


def test_double_well_minima():
    assert double_well(np.array([-1.0, 0.0, 1.0])).tolist() == [0.0, 1.0, 0.0]


def test_plus_minus_one_is_stationary_on_a_constant():
    g = complete(4)
    assert np.allclose(ac_rhs(g, np.ones(4), 0.1), 0.0)
    trace = ace_evolve(g, np.ones(4), AcParams(eps=0.1, t_end=1.0))
    assert trace.stationary and trace.times == [0.0]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"eps": 0.0, "t_end": 1.0},
        {"eps": 0.1, "t_end": -1.0},
        {"eps": 0.1, "t_end": 1.0, "rel_tol": 0.0},
        {"eps": 0.1, "t_end": 1.0, "abs_tol": 1.5},
    ],
)
def test_params_are_validated(kwargs):
    with pytest.raises(InvalidParameter):
        AcParams(**kwargs)


def test_energy_is_nonincreasing(rng):
    for _ in range(10):
        q, r = random_params(rng)
        g = random_connected_graph(rng, int(rng.integers(3, 12)), q=q, r=r)
        u0 = rng.uniform(-1.0, 1.0, g.n)
        trace = ace_evolve(g, u0, AcParams(eps=0.5, t_end=2.0, rel_tol=1e-9, abs_tol=1e-10))
        energies = np.array(trace.gl_energy)
        assert np.all(np.diff(energies) <= 1e-6 * (1 + abs(energies[0])))
        assert trace.gl_energy[0] == pytest.approx(gl_energy(g, u0, 0.5))


def test_sign_changes_are_located():
    g = path(2)
    u0 = np.array([1.0, -0.05])
    trace = ace_evolve(g, u0, AcParams(eps=10.0, t_end=5.0))
    assert trace.sign_changes
    t, node = trace.sign_changes[0]
    assert node == 1 and 0 < t < 5
    assert trace.final_set() == (0, 1)


def _assert_pinned(rng, instances):
    for _ in range(instances):
        q, r = random_params(rng)
        g = random_connected_graph(rng, int(rng.integers(3, 10)), q=q, r=r)
        u0 = _signed_start(rng, g.n)
        eps = 0.9 * min(ac_pinning_bounds(g, u0))
        trace = ace_evolve(g, u0, AcParams(eps=eps, t_end=1.0, rel_tol=1e-6, abs_tol=1e-9))
        assert not trace.sign_changes
        assert np.array_equal(trace.final_signs(), np.sign(u0))


def test_small_eps_pins_the_signs(rng):
    _assert_pinned(rng, 5)


@pytest.mark.slow
def test_small_eps_pins_the_signs_many(rng):
    _assert_pinned(rng, 50)


def test_pinning_report_fields():
    g = complete(4, r=1.0)
    u0 = np.array([0.5, -1.0, 2.0, -0.7])
    report = ac_pinning_report(g, u0)
    assert report.alpha == 0.5
    assert report.C == pytest.approx(max(math.sqrt(3 * (0.25 + 1 + 4 + 0.49)), invariant_ball_radius(g)))
    assert report.eps_rho == pytest.approx(4 * 0.5 * 0.75 / (report.C * report.rho * 3 ** 0.5))
    printed = ac_pinning_report(g, u0, kappa_factor="printed")
    assert printed.eps_kappa == pytest.approx(report.eps_kappa * (0.5 ** 2) / 0.75)
    assert ac_pinning_report(g, np.full(4, 0.9), alpha_rule="optimal").alpha == pytest.approx(1 / math.sqrt(3))
    assert ac_pinning_report(g, np.full(4, 2.0)).alpha == 0.999


def test_trajectory_sup_tightens_the_kappa_bound():
    g = path(4)
    u0 = np.array([1.0, 1.0, -1.0, -1.0])
    trace = ace_evolve(g, u0, AcParams(eps=0.05, t_end=1.0))
    sup = trajectory_laplacian_sup(g, trace)
    loose = ac_pinning_report(g, u0)
    tight = ac_pinning_report(g, u0, laplacian_sup=sup)
    assert tight.eps_kappa >= loose.eps_kappa


def test_pinning_rejects_bad_input():
    g = complete(3)
    with pytest.raises(ZeroInitialComponent):
        ac_pinning_bounds(g, np.array([1.0, 0.0, -1.0]))
    with pytest.raises(InvalidParameter):
        ac_pinning_bounds(g, np.ones(3), kappa_factor="other")
    with pytest.raises(InvalidParameter):
        ac_pinning_bounds(g, np.ones(3), alpha_rule="other")
    with pytest.raises(InvalidParameter):
        ac_pinning_bounds(g, np.ones(3), laplacian_sup=0.0)


def test_invariant_ball_radius():
    assert invariant_ball_radius(complete(4)) == pytest.approx(math.sqrt(17))
    assert invariant_ball_radius(complete(4, r=1.0)) == pytest.approx(math.sqrt(17 * 3))
