import math

import numpy as np
import pytest

from fixtures import GRAM_VALUES, THETA_VALUES, richardson_budget, richardson_derivative
from hardyz.errors import DomainError
from hardyz.theta import (ENVELOPE_C3, ENVELOPE_C4, MONOTONE_T_MIN, SWITCH_T, THETA_C5,
                          theta, theta_asym, theta_derivative, theta_double_prime, theta_eval,
                          theta_higher_bounds, theta_prime, theta_ref)


def _ref(t):
    return theta_ref(t).value


def test_theta_ref_matches_oracle():
    for t, v in THETA_VALUES.items():
        r = theta_ref(t)
        assert abs(r.value - v) <= r.radius + 1e-15


def test_theta_asym_at_gram_points():
    for n in (0, 1):
        g = GRAM_VALUES[n]
        r = theta_asym(g)
        assert abs(r.value - math.pi * n) <= r.radius + 1e-12


def test_theta_asym_agrees_with_ref_at_100():
    assert abs(theta_asym(100.0).value - theta_ref(100.0).value) <= 1e-11


def test_theta_ref_is_odd():
    assert theta_ref(25.0).value == pytest.approx(-theta_ref(-25.0).value, abs=1e-13)


def test_theta_ref_at_first_gram_point():
    assert abs(theta_ref(17.8455995405).value) <= 1e-8


def test_theta_ref_finite_at_monotone_anchor():
    assert math.isfinite(theta_ref(MONOTONE_T_MIN).value)
    ts = np.linspace(MONOTONE_T_MIN, 40.0, 400)
    vals = [theta_ref(t).value for t in ts]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_theta_asym_domain():
    with pytest.raises(DomainError):
        theta_asym(5.9)
    for fn in (theta_prime, theta_double_prime):
        with pytest.raises(DomainError):
            fn(5.0)


def test_theta_prime_examples():
    t = 2 * math.pi * math.e**2
    r = theta_prime(t)
    assert abs(r.value - 1.0) <= 1 / (48 * t * t) + 0.07 * t**-3 + 1e-15
    t = 2 * math.pi
    r = theta_prime(t)
    assert abs(r.value + 1 / (48 * t * t)) <= 1e-15
    assert r.radius == pytest.approx(0.07 * t**-3, rel=1e-6)


def test_theta_prime_vs_finite_difference_at_1e4():
    fd = richardson_derivative(_ref, 1e4, rel_step=1e-3 / 1e4)
    assert abs(theta_prime(1e4).value - fd) <= 1e-7


def test_theta_double_prime_examples():
    r = theta_double_prime(100.0)
    assert r.value == 0.005
    assert r.radius == pytest.approx(4.6e-7)
    for t in np.geomspace(6, 1e6, 50):
        r = theta_double_prime(t)
        assert r.value - r.radius > 0


def test_theta_double_prime_vs_second_difference():
    t, h = 500.0, 0.05
    fd = (_ref(t + h) - 2 * _ref(t) + _ref(t - h)) / h**2
    assert abs(theta_double_prime(t).value - fd) <= 1e-6


def test_higher_bounds_dominate_finite_differences():
    t, h = 100.0, 0.1
    f = [_ref(t + k * h) for k in range(-3, 4)]
    # fourth-order accurate stencil for the third derivative
    d3 = (-f[6] + 8 * f[5] - 13 * f[4] + 13 * f[2] - 8 * f[1] + f[0]) / (8 * h**3)
    assert abs(d3) <= theta_higher_bounds(t, 3)
    assert abs(theta_derivative(t, 3)) <= theta_higher_bounds(t, 3)
    assert abs(theta_derivative(t, 4)) <= theta_higher_bounds(t, 4)


def test_higher_bounds_scaling():
    a, b = theta_higher_bounds(100.0, 3), theta_higher_bounds(100.0 * math.sqrt(2), 3)
    assert b / a == pytest.approx(0.5)
    scaled = [theta_higher_bounds(t, 4) * t**3 for t in (1e2, 1e3, 1e4)]
    assert scaled == pytest.approx([ENVELOPE_C4] * 3)
    assert theta_higher_bounds(10.0, 3) == ENVELOPE_C3 / 100
    with pytest.raises(ValueError):
        theta_higher_bounds(10.0, 5)


def test_envelopes_hold_on_grid():
    for t in np.geomspace(6, 1e5, 60):
        assert abs(theta_derivative(t, 3)) <= theta_higher_bounds(t, 3)
        assert abs(theta_derivative(t, 4)) <= theta_higher_bounds(t, 4)


def test_enclosure_consistency_random():
    rng = np.random.default_rng(7)
    for t in np.exp(rng.uniform(math.log(6), math.log(1e6), 1000)):
        a, r = theta_asym(t), theta_ref(t)
        assert abs(a.value - r.value) <= a.radius + r.radius


def test_c5_sweep_keeps_margin():
    # observed remainder of the four-term expansion times t^5, with a x10 margin
    worst = 0.0
    for t in np.geomspace(6, 200, 300):
        diff = abs(theta_asym(t).value - theta_ref(t).value) - theta_ref(t).radius
        worst = max(worst, diff * t**5)
    assert worst * 10 <= THETA_C5 * 1.01


def test_derivative_bound_on_log_grid():
    for t in np.geomspace(6, 1e5, 120):
        fd = richardson_derivative(_ref, t)
        budget = richardson_budget(theta_ref(t * 1.000001).radius, t)
        assert abs(theta_prime(t).value - fd) <= 0.07 * t**-3 + budget


def test_monotone_zone():
    for t in np.geomspace(7, 1e6, 200):
        r = theta_prime(t)
        assert r.value - r.radius > 0


def test_theta_eval_switches_paths():
    low, high = theta_eval(20.0), theta_eval(SWITCH_T + 1)
    assert low.theta.value == theta_ref(20.0).value
    assert high.theta.value == theta_asym(SWITCH_T + 1).value
    assert high.dtheta.value > 0 and high.d2theta.value > 0


def test_production_theta_against_oracle():
    for t, v in THETA_VALUES.items():
        assert abs(theta(t) - v) <= 4e-16 * abs(v) + 1e-13
    arr = theta(np.array(list(THETA_VALUES)))
    assert arr.shape == (len(THETA_VALUES),)


def test_production_derivative_matches_certified_value():
    for t in (60.0, 1e3, 1e5):
        assert abs(theta_derivative(t, 1) - theta_prime(t).value) <= theta_prime(t).radius
        assert abs(theta_derivative(t, 2) - theta_double_prime(t).value) <= theta_double_prime(t).radius
    with pytest.raises(ValueError):
        theta_derivative(100.0, 5)
