import numpy as np
import pytest

import zenoest as z


def test_kernel_matches_closed_form():
    m = z.two_level_model(1.3, gamma=0.2)
    k = z.transition_kernel(m, 0.7)
    assert np.allclose(k.sum(axis=0), 1.0)
    assert k[0, 0] == pytest.approx(z.analytic_pgg(1.3, 0.0, 0.2, 0.7), abs=1e-12)


def test_propagate_preserves_trace():
    m = z.two_level_model(1.0, delta=0.3, gamma=0.1, gamma_spont=0.05)
    rho = np.array([[1, 0], [0, 0]], dtype=complex)
    out = z.propagate(m, rho, 3.0)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(out, out.conj().T)


def test_stationary_is_fixed_point():
    k = z.transition_kernel(z.two_level_model(1.0, gamma=0.3), 1.1)
    pi = z.stationary_distribution(k)
    assert np.allclose(k @ pi, pi)


def test_numerical_fisher_matches_closed_form():
    num = z.fisher_rabi(1.0, 0.0, 0.1, 0.0, 1.0)
    assert num == pytest.approx(z.analytic_fisher(1.0, 0.0, 0.1, 1.0), rel=1e-8)


def test_zeno_coefficients_drive_only():
    a, b = z.zeno_coefficients(z.two_level_model(2.0))
    assert a == pytest.approx(0.0, abs=1e-12)
    assert b == pytest.approx(-1.0, rel=1e-10)  # -Ω²/4


def test_simulation_is_deterministic():
    m = z.two_level_model(1.0)
    a = z.simulate(m, [(0.8, 50)], 7)
    b = z.simulate(m, [(0.8, 50)], 7)
    assert a["outcomes"] == b["outcomes"]
    assert a["pair_counts"].sum() == 50


def test_filter_and_stats():
    m = z.two_level_model(1.0)
    sched = [(1.7, 200)]
    rec = z.simulate(m, sched, 11)
    cands = list(np.linspace(0.5, 1.5, 101))
    w = z.run_filter(rec["outcomes"], sched, cands)
    assert w.shape == (201, 101)
    assert np.allclose(w.sum(axis=1), 1.0)
    s = z.posterior_stats(cands, list(w[-1]))
    assert abs(s["map"] - 1.0) < 0.1


def test_hybrid_plan_fills_budget():
    p = z.plan_hybrid(300.0, 0.01, 1.25, 2.5)
    total = sum(tau * n for tau, n in p["schedule"])
    assert total <= 300.0 + 1e-9
    assert p["q"] >= 1


def test_errors_are_exported():
    with pytest.raises(z.InvalidParameter):
        z.two_level_model(1.0, gamma=-1.0)
    assert issubclass(z.ImpossibleRecord, z.Error)
