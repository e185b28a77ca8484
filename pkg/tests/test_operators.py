import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from twophase.grid import build_grid
from twophase.operators import (SchemeParams, cfl_check, elliptic_component,
                                elliptic_residual, level_m_coefficients, lh_apply,
                                parabolic_component, parabolic_residual)

finite = st.floats(-10, 10, allow_nan=False)
positive = st.floats(0.01, 5)


def test_lh_constant_is_zero():
    g = build_grid(2, [(0, 1)] * 2, 6)
    assert np.all(lh_apply(g, np.full(g.size, 3.7)) == 0)


def test_lh_exact_on_quadratic_1d():
    g = build_grid(1, [(0, 1)], 3)
    assert lh_apply(g, [0, 0.25, 1]).tolist() == [0, -2, 0]


def test_lh_exact_on_quadratic_2d():
    g = build_grid(2, [(0, 1)] * 2, 7)
    x, y = g.coords.T
    out = lh_apply(g, x ** 2 + y ** 2)
    np.testing.assert_allclose(out[g.interior], -4, atol=1e-10)
    assert np.all(out[g.boundary] == 0)


def test_lh_approximates_minus_laplacian():
    # sign convention: L_h sin(pi x) -> +pi^2 sin(pi x)
    g = build_grid(1, [(0, 1)], 401)
    x = g.coords[:, 0]
    out = lh_apply(g, np.sin(np.pi * x))
    np.testing.assert_allclose(out[g.interior], np.pi ** 2 * np.sin(np.pi * x[g.interior]),
                               atol=1e-3)


def test_elliptic_residual_zero_function():
    g = build_grid(2, [(0, 1)] * 2, 5)
    assert np.all(elliptic_residual(g, g.zeros(), 1.0, 1.0) == 0)


def test_elliptic_residual_hand_value():
    # dx = 1, u_i = 1, neighbors 0: L u = 2, F = min(3, max(1, 1)) = 1
    g = build_grid(1, [(0, 2)], 3)
    assert elliptic_residual(g, [0, 1, 0], 1.0, 1.0).tolist() == [0, 1, 0]


def test_parabolic_residual_hand_value():
    g = build_grid(1, [(0, 1)], 3)
    params = SchemeParams(g.dx, g.K, 0.1)
    assert params.c == pytest.approx(0.4)
    old = np.array([-8.0, 2.0, 8.0])
    new = np.array([-8.0, 0.1, 8.0])
    # S~ = 0.1 - 2 + 0.4 * 4 = -0.3; min(-0.3 + 0.3, max(-0.4, 0.01)) = 0
    r = parabolic_residual(g, params, old, new, 3.0, 1.0)
    assert r[1] == pytest.approx(0.0, abs=1e-15)
    assert r[0] == r[2] == 0


def test_parabolic_residual_quiet_state():
    g = build_grid(1, [(0, 1)], 5)
    params = SchemeParams(g.dx, g.K, 0.01)
    assert np.all(parabolic_residual(g, params, g.zeros(), g.zeros(), 2.0, 3.0) == 0)


def test_parabolic_residual_heat_step():
    g = build_grid(1, [(0, 1)], 9)
    params = SchemeParams(g.dx, g.K, 0.4 * g.dx ** 2)
    rng = np.random.default_rng(3)
    old = rng.uniform(-1, 1, g.size)
    new = old - params.c * lh_apply(g, old) * g.dx ** 2
    new[g.boundary] = old[g.boundary]
    r = parabolic_residual(g, params, old, new, 0.0, 0.0)
    assert np.max(np.abs(r)) < 1e-14


@pytest.mark.parametrize("dx, dt, K, ok", [
    (0.5, 0.125, 2, True),     # c = 1/2 exactly
    (0.5, 0.075, 4, False),    # c = 0.3 > 1/4
    (0.5, 0.1275, 2, False),   # c = 0.51
    (0.5, 0.0625, 4, True),    # c = 1/4 exactly
])
def test_cfl_check(dx, dt, K, ok):
    v = cfl_check(SchemeParams(dx, K, dt))
    assert v.passed is ok
    assert v.bound == 1 / K


def test_cfl_message_names_bound():
    v = cfl_check(SchemeParams(0.005, 2, 0.004))
    assert not v and "1/K = 0.5" in v.message() and "160" in v.message()


@given(ui=finite, diffs=st.lists(finite, min_size=4, max_size=4),
       dx=st.floats(0.01, 1), lp=positive, lm=positive,
       which=st.integers(0, 4), bump=st.floats(0, 5))
def test_degenerate_ellipticity(ui, diffs, dx, lp, lm, which, bump):
    args = np.array([ui] + diffs)
    up = args.copy()
    up[which] += bump
    f0 = elliptic_component(args[0], args[1:], dx, lp, lm)
    f1 = elliptic_component(up[0], up[1:], dx, lp, lm)
    assert f1 >= f0 - 1e-12 * (1 + np.abs(up).max() * 4 / dx ** 2)


@given(K=st.sampled_from([2, 4]), frac=st.floats(0, 1), data=st.data())
def test_parabolic_residual_monotone_under_cfl(K, frac, data):
    c = frac / K
    v = np.array(data.draw(st.lists(finite, min_size=K + 1, max_size=K + 1)))
    noise = np.array(data.draw(st.lists(st.floats(0, 5), min_size=K + 1, max_size=K + 1)))
    u = v + noise
    new = data.draw(finite)
    dt, lp, lm = data.draw(st.floats(1e-3, 1)), data.draw(positive), data.draw(positive)
    su = parabolic_component(new, u[0], u[1:], c, dt, lp, lm)
    sv = parabolic_component(new, v[0], v[1:], c, dt, lp, lm)
    assert su <= sv + 1e-12 * (1 + np.abs(u).max())


def test_monotonicity_breaks_beyond_cfl():
    # c = 0.6, K = 2: raising only the center at level m raises S~ by 0.2 per unit
    c, dt = 0.6, 0.01
    su = parabolic_component(1.0, 1.0, np.zeros(2), c, dt, 1.0, 1.0)
    sv = parabolic_component(1.0, 0.0, np.zeros(2), c, dt, 1.0, 1.0)
    assert su > sv


@given(K=st.sampled_from([2, 4]), c=st.floats(0, 2))
def test_level_m_coefficient_signs(K, c):
    center, nbr = level_m_coefficients(c, K)
    assert nbr <= 0
    assert (center <= 0) == (c * K <= 1)


@settings(max_examples=50)
@given(c=st.floats(0.01, 2), K=st.sampled_from([2, 4]), data=st.data())
def test_decomposition_matches_residual(c, K, data):
    vals = np.array(data.draw(st.lists(finite, min_size=K + 2, max_size=K + 2)))
    new, old, nbrs = vals[0], vals[1], vals[2:]
    center, nbr = level_m_coefficients(c, K)
    s_tilde = new + old * center + nbr * nbrs.sum()
    direct = new - old + c * np.sum(old - nbrs)
    assert s_tilde == pytest.approx(direct, abs=1e-10)
