"""Smoke tests for the _ptnlms extension module."""

import math

import pytest

import ptnlms as pt


def test_gain_rules():
    g = pt.gain_pnlms([0.99, 0.01])
    assert g[0] == pytest.approx(0.99, abs=1e-12)
    assert g[1] == pytest.approx(0.01, abs=1e-12)

    g = pt.gain_ipnlms([1.0, 0.0], alpha=-0.5, delta_ip=0.0)
    assert g == pytest.approx([0.625, 0.375], abs=1e-12)

    g = pt.gain_pure_proportional([-2.0, 2.0])
    assert g == pytest.approx([0.5, 0.5], abs=1e-12)

    with pytest.raises(ValueError):
        pt.gain_ipnlms([0.0, 0.0], alpha=-0.5, delta_ip=0.0)


def test_conditioning_facts():
    g_o = pt.gain_pure_proportional([0.99, 0.01])
    b = pt.bound_check([[1.0, 0.0], [0.0, 1.0]], g_o)
    assert b.kappa_r == pytest.approx(1.0, abs=1e-9)
    assert b.kappa_gain == pytest.approx(99.0, rel=1e-9)
    assert b.kappa_r_prime == pytest.approx(99.0, rel=1e-9)
    assert b.holds

    assert pt.cond_gain([0.99, 0.01]) == pytest.approx(99.0, rel=1e-9)
    assert math.isinf(pt.cond_gain([1.0, 0.0]))

    e = pt.eig_sym([[2.0, 1.0], [1.0, 2.0]])
    assert e.lambda_min == pytest.approx(1.0)
    assert e.lambda_max == pytest.approx(3.0)
    assert e.positive_definite


def test_single_step():
    state = pt.FilterState(2)
    y, e = pt.step(state, [1.0, 0.0], 1.0, 1.0, 0.0, pt.GainRule.identity())
    assert y == 0.0
    assert e == 1.0
    assert state.w == pytest.approx([1.0, 0.0])
    assert state.iteration == 1


def test_signals_and_systems():
    u = pt.gen_input(pt.InputModel.bpsk(), 256, seed=5)
    assert set(u) == {-1.0, 1.0}
    assert u == pt.gen_input(pt.InputModel.bpsk(), 256, seed=5)

    x = pt.regressor([5.0, 1.0], 0, 3)
    assert x == [5.0, 0.0, 0.0]

    tail = pt.tail_support_100()
    assert sum(1 for v in tail if v != 0.0) == 6
    sw = pt.support_switch_100()
    assert sw.coeffs_at(1999) == tail
    assert sw.coeffs_at(2000) == pt.front_support_100()


def test_monte_carlo_and_metrics():
    preset = pt.make_preset("fig2a")
    scenario = preset.scenario
    scenario.trials = 5
    scenario.horizon = 150
    curves = pt.run_monte_carlo(scenario, preset.algorithms, base_seed=3)
    assert len(curves) == 4
    for c in curves:
        assert len(c.mse) == 150
        assert all(v >= 0.0 and math.isfinite(v) for v in c.mse)

    assert pt.steady_state_mse([0.25] * 40) == pytest.approx(0.25)
    assert pt.time_to_threshold([1.0] * 3 + [0.001] * 100, 0.01) == 3
    assert pt.time_to_threshold([1.0] * 5, 0.01) is None
    assert pt.to_db(0.01) == pytest.approx(-20.0)


def test_surface_and_contours():
    g_o = pt.gain_pure_proportional([0.99, 0.01])
    spec = pt.SurfaceSpec.identification(
        [[1.0, 0.0], [0.0, 1.0]], g_o, [0.99, 0.01], 1e-2
    )
    assert pt.mse(spec, [0.99, 0.01]) == pytest.approx(1e-2)
    center = spec.w_prime_o
    grid = pt.contour_grid(
        spec,
        pt.AxisSpec(center[0] - 1.0, center[0] + 1.0, 41),
        pt.AxisSpec(center[1] - 1.0, center[1] + 1.0, 41),
    )
    ratio = (grid.at(30, 20) - spec.xi_min) / (grid.at(20, 30) - spec.xi_min)
    assert ratio == pytest.approx(99.0, rel=1e-6)


def test_divergence_is_reported():
    preset = pt.make_preset("fig2a")
    scenario = preset.scenario
    scenario.trials = 2
    scenario.horizon = 10
    scenario.noise_var = math.inf
    with pytest.raises(pt.DivergenceError):
        pt.run_monte_carlo(scenario, preset.algorithms, base_seed=1)


def test_preset_catalog():
    assert pt.preset_names() == ["fig1", "fig2a", "fig2b", "fig2c"]
    fig2c = pt.make_preset("fig2c")
    assert fig2c.scenario.horizon == 4000
    assert [a.mu for a in fig2c.algorithms] == [0.6, 0.15, 0.45, 0.99]
