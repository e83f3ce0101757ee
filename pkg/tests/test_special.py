import cmath
import math

import numpy as np
import pytest

from fixtures import (DIGAMMA_QUARTER_50I, EULER_GAMMA, FIRST_ZERO, LOGGAMMA_QUARTER_10I,
                      LOGGAMMA_QUARTER_5E5I, ZETA_AT_100, ZETA_AT_12345_678, ZETA_HALF)
from hardyz.errors import DomainError, RangeError
from hardyz.special import (BERNOULLI, BernoulliTable, BoundedValue, digamma,
                            digamma_remainder_bound, log_gamma, polygamma,
                            zeta_euler_maclaurin)


# -- BoundedValue -------------------------------------------------------------

def test_bounded_value_rejects_bad_radius():
    with pytest.raises(ValueError):
        BoundedValue(1.0, -1e-3)
    with pytest.raises(ValueError):
        BoundedValue(1.0, math.inf)


def test_bounded_value_arithmetic_propagates_radii():
    a = BoundedValue(2.0, 0.1)
    b = BoundedValue(-3.0, 0.2)
    assert (a + b).value == -1.0 and (a + b).radius == pytest.approx(0.3)
    assert (a - b).value == 5.0 and (a - b).radius == pytest.approx(0.3)
    prod = a * b
    assert prod.value == -6.0
    assert prod.radius == pytest.approx(2.0 * 0.2 + 3.0 * 0.1 + 0.02)
    # the product interval encloses every corner product
    for x in (1.9, 2.1):
        for y in (-3.2, -2.8):
            assert prod.contains(x * y, slack=1e-12)


# -- Bernoulli numbers --------------------------------------------------------

def test_bernoulli_head_is_exact():
    from fractions import Fraction
    assert BERNOULLI.exact[0] == Fraction(1, 6)
    assert BERNOULLI.exact[1] == Fraction(-1, 30)
    assert BERNOULLI.exact[2] == Fraction(1, 42)
    assert len(BERNOULLI) == 30


def test_bernoulli_table_is_immutable():
    table = BernoulliTable(5)
    with pytest.raises(TypeError):
        table.values[0] = 0.0
    with pytest.raises(IndexError):
        table.b2r(6)


# -- log Gamma ----------------------------------------------------------------

def test_log_gamma_at_one():
    r = log_gamma(1.0)
    assert abs(r.value) <= 1e-14
    assert r.radius < 1e-12


def test_log_gamma_at_half():
    r = log_gamma(0.5)
    assert abs(r.value - 0.5723649429247001) <= max(r.radius, 1e-15)
    assert r.radius < 1e-12


def test_log_gamma_matches_oracle_within_radius():
    r = log_gamma(complex(0.25, 10.0))
    assert abs(r.value - LOGGAMMA_QUARTER_10I) <= r.radius
    r = log_gamma(complex(0.25, 5e5))
    assert abs(r.value - LOGGAMMA_QUARTER_5E5I) <= r.radius


def test_log_gamma_domain_errors():
    with pytest.raises(DomainError):
        log_gamma(-2.0)
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(ValueError):
        log_gamma(3.0, n_terms=0)


# -- digamma ------------------------------------------------------------------

def test_digamma_at_one_is_minus_gamma():
    r = digamma(1.0)
    assert abs(r.value + EULER_GAMMA) <= max(r.radius, 1e-15)


def test_digamma_n1_radius_matches_closed_constant():
    z = complex(0.25, 50.0)
    r = digamma(z, n_terms=1)
    assert r.radius <= 3 / (4 * math.pi**2) * 50.0**-3 + 1e-15
    assert abs(r.value - DIGAMMA_QUARTER_50I) <= r.radius
    assert digamma_remainder_bound(1, 50.0) == pytest.approx(3 / (4 * math.pi**2) * 50.0**-3)


def test_digamma_conjugate_symmetry():
    z = complex(0.3, 17.0)
    assert digamma(z.conjugate()).value == pytest.approx(digamma(z).value.conjugate(), abs=1e-15)


def test_digamma_domain_error():
    with pytest.raises(DomainError):
        digamma(-1.0)


def test_digamma_n1_vs_n4_within_radii():
    rng = np.random.default_rng(11)
    for _ in range(100):
        z = complex(rng.uniform(0, 1), rng.uniform(5, 500))
        a, b = digamma(z, 1), digamma(z, 4)
        assert abs(a.value - b.value) <= a.radius + b.radius


def test_radius_monotone_in_terms():
    for t in (40.0, 80.0, 300.0):
        z = complex(0.25, t)
        radii = [log_gamma(z, n).radius for n in range(1, 7) if t >= 2 * math.pi * n]
        assert all(b <= a for a, b in zip(radii, radii[1:]))
        radii = [digamma(z, n).radius for n in range(1, 7) if t >= 2 * math.pi * n]
        assert all(b <= a for a, b in zip(radii, radii[1:]))


def test_polygamma_against_digamma_difference():
    # psi'(z) approximated by a symmetric difference of psi
    z = complex(0.25, 30.0)
    h = 1e-4
    fd = (digamma(z + h).value - digamma(z - h).value) / (2 * h)
    assert abs(polygamma(1, z) - fd) < 1e-8


# -- zeta oracle ---------------------------------------------------------------

def test_zeta_at_half():
    assert abs(zeta_euler_maclaurin(0.0, 50) - ZETA_HALF) < 1e-12


def test_zeta_first_zero():
    assert abs(zeta_euler_maclaurin(14.1347251417, 80)) <= 1e-8
    assert abs(zeta_euler_maclaurin(FIRST_ZERO)) <= 1e-12


def test_zeta_against_oracle():
    assert abs(zeta_euler_maclaurin(100.0) - ZETA_AT_100) <= 1e-10
    assert abs(zeta_euler_maclaurin(12345.678) - ZETA_AT_12345_678) <= 1e-10


def test_zeta_conjugate_symmetry():
    for t in (25.0, 333.3):
        assert abs(zeta_euler_maclaurin(-t) - zeta_euler_maclaurin(t).conjugate()) <= 1e-10


def test_zeta_doubling_cutoff():
    for t in (50.0, 1234.5, 1e4):
        M = max(20, 2 * math.ceil(t))
        assert abs(zeta_euler_maclaurin(t, M) - zeta_euler_maclaurin(t, 2 * M)) <= 1e-11


def test_zeta_guards():
    with pytest.raises(RangeError):
        zeta_euler_maclaurin(6e4)
    with pytest.raises(ValueError):
        zeta_euler_maclaurin(100.0, 150)


def test_chi_rotation_is_unimodular():
    # e^{i theta} has unit modulus, so |Z| = |zeta| on the critical line
    from hardyz.zfun import z_reference
    z = zeta_euler_maclaurin(100.0)
    assert abs(abs(z_reference(100.0).z) - abs(z)) < 1e-12
    assert cmath.isfinite(z)
