import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twophase.analysis import (PROBES, BranchTieError, brute_force_elliptic, classify_signs,
                               comparison_trials, consistency_order, explicit_exactness,
                               fit_order, monotonicity_fuzz, oracle_trials,
                               residual_band_check, trial_rngs)
from twophase.elliptic import EllipticConfig, solve_elliptic
from twophase.grid import build_grid
from twophase.problem import make_problem

LINE = build_grid(1, [(0, 1)], 201)


def test_classify_signs_figure_data():
    s = classify_signs(LINE, 16 * LINE.coords[:, 0] - 8)
    assert s.points.shape == (1, 1)
    assert abs(s.points[0, 0] - 0.5) <= LINE.dx
    assert s.negative[0] and s.positive[-1]


def test_classify_signs_zero():
    s = classify_signs(LINE, LINE.zeros())
    assert np.all(s.classes == 0) and s.points.shape == (0, 1)


def test_classify_signs_linear_crossing():
    g = build_grid(1, [(0, 1)], 11)
    s = classify_signs(g, g.coords[:, 0] - 0.3)
    assert s.points[:, 0] == pytest.approx([0.3], abs=1e-14)


def test_classify_signs_2d_line():
    g = build_grid(2, [(0, 1)] * 2, 11)
    x, y = g.coords.T
    s = classify_signs(g, x - 0.35)
    assert s.points[:, 0] == pytest.approx(np.full(11, 0.35))


@given(scale=st.floats(0.1, 100), seed=st.integers(0, 1000))
def test_classify_signs_scale_equivariant(scale, seed):
    g = build_grid(1, [(0, 1)], 31)
    u = np.random.default_rng(seed).uniform(-1, 1, g.size)
    a = classify_signs(g, u, 1e-9)
    b = classify_signs(g, scale * u, 1e-9 * scale)
    assert np.array_equal(a.classes, b.classes)


@pytest.mark.parametrize("name", sorted(PROBES))
def test_probe_derivatives(name):
    p = PROBES[name]
    pt = (0.37, 0.61)[: p.dim]
    t, e = 0.3, 1e-4
    ft = (p.phi(t + e, *pt) - p.phi(t - e, *pt)) / (2 * e)
    assert ft == pytest.approx(float(p.phi_t(t, *pt)), abs=1e-6)
    lap = 0.0
    for k in range(p.dim):
        up = list(pt); dn = list(pt)
        up[k] += e; dn[k] -= e
        lap += (p.phi(t, *up) - 2 * p.phi(t, *pt) + p.phi(t, *dn)) / e ** 2
    assert lap == pytest.approx(float(p.laplacian(t, *pt)), rel=1e-4, abs=1e-4)


def test_consistency_quadratic_exact():
    est = consistency_order(PROBES["quadratic"], "elliptic", 0.5, [11, 21, 41])
    assert est.exact and np.all(est.errors < 1e-9)


def test_consistency_linear_probe_exact():
    est = consistency_order(PROBES["linear_tx"], "parabolic", 0.5, [11, 21, 41], t0=1.5)
    assert est.exact


def test_consistency_sin_second_order():
    est = consistency_order(PROBES["sin"], "elliptic", 0.5, [11, 21, 41, 81])
    assert abs(est.slope - 2) <= 0.2


def test_consistency_rejects_tie():
    # at (0.5, 0.5): phi_t - phi_xx - lam- = e^-t (pi^2 - 1) - lam- = e^-t = phi
    lam = np.exp(-0.5) * (np.pi ** 2 - 2)
    with pytest.raises(BranchTieError):
        consistency_order(PROBES["exp_sin"], "parabolic", 0.5, [11, 21, 41],
                          lam_minus=lam, t0=0.5)


def test_consistency_needs_three_levels():
    with pytest.raises(ValueError, match="3"):
        consistency_order(PROBES["sin"], "elliptic", 0.5, [11, 21])


def test_fit_order_recovers_power():
    h = np.array([0.1, 0.05, 0.025])
    slope, misfit = fit_order(h, 3 * h ** 2)
    assert slope == pytest.approx(2) and misfit < 1e-12


def _const_problem(nodes, lp, lm, left, right, bounds=(0, 1)):
    g = build_grid(1, [bounds], nodes)
    return make_problem(g, None, lp, lm, None,
                        lambda t, x: np.where(x < np.mean(bounds), left, right))


def test_oracle_zero_boundary():
    u = brute_force_elliptic(_const_problem(6, 1.0, 2.0, 0.0, 0.0))
    assert np.all(u == 0)


def test_oracle_single_node():
    assert brute_force_elliptic(_const_problem(3, 1.0, 1.0, -1.0, 1.0)).tolist() == [-1, 0, 1]


def test_oracle_matches_solver_four_nodes():
    p = _const_problem(6, 3.0, 1.0, -8.0, 8.0)
    u, _ = solve_elliptic(p, EllipticConfig(tol_update=1e-13))
    assert np.max(np.abs(u - brute_force_elliptic(p))) <= 1e-10


def test_oracle_size_limit():
    with pytest.raises(ValueError, match="6"):
        brute_force_elliptic(_const_problem(9, 1.0, 1.0, -1.0, 1.0))


def test_band_zero_passes():
    assert residual_band_check(LINE, LINE.zeros(), 1.0, 1.0, 0.0).all()


def test_band_spike_fails_at_spike():
    g = build_grid(1, [(0, 1)], 11)
    u = g.zeros()
    u[5] = 1.0
    ok = residual_band_check(g, u, 1.0, 1.0, 1e-6)
    assert not ok[5] and ok[[0, 1, 2, 3, 7, 8, 9, 10]].all()


def test_trial_rngs_deterministic():
    a = [r.random() for r in trial_rngs(7, 5)]
    assert a == [r.random() for r in trial_rngs(7, 5)]
    assert len(set(a)) == 5


def test_drivers_small_runs_pass():
    assert monotonicity_fuzz("parabolic", 200, 1).passed
    assert monotonicity_fuzz("elliptic", 200, 1).passed
    assert explicit_exactness(50, 1).passed
    assert oracle_trials(10, 1).passed
    assert comparison_trials(10, 1).passed


def test_fuzz_has_teeth():
    rep = monotonicity_fuzz("parabolic", 200, 1, c=0.6, K=2)
    assert not rep.passed
    v = rep.violations[0]
    assert v["S_u"] > v["S_v"] and v["c"] == 0.6


def test_fuzz_rejects_unknown_kind():
    with pytest.raises(ValueError):
        monotonicity_fuzz("hyperbolic", 1, 0)
