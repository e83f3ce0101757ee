"""The Riemann-Siegel theta function and its derivatives.

Two evaluation routes are provided for theta itself: a certified asymptotic
expansion (fast path, t >= 6) and a log-Gamma reference (slow path, any t).
Production code switches from the reference to the asymptotic path at
SWITCH_T.  The array helpers at the bottom are the hot-path versions used by
the Gram solver and the Z evaluators; they carry no radius.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._numerics import EPS, LD, LOG_TWO_PI_LD, PI_LD
from .errors import DomainError
from .special import BERNOULLI, BoundedValue, log_gamma, polygamma

# O(t^-5) remainder constant of the four-term expansion; validated in the test
# suite against theta_ref with a x10 margin over the observed maximum.
THETA_C5 = 0.01
V1_CONST = 0.07
V2_CONST = 0.46
# |theta'''| <= C3/t^2 and |theta''''| <= C4/t^3 for t >= 6.
ENVELOPE_C3 = 0.6
ENVELOPE_C4 = 1.2

THETA_T_MIN = 6.0
MONOTONE_T_MIN = 6.5
SWITCH_T = 50.0

_LOG_PI = math.log(math.pi)


def _require(t: float, lo: float = THETA_T_MIN) -> float:
    t = float(t)
    if not t >= lo:
        raise DomainError(f"t={t} below the supported threshold {lo}")
    return t


def theta_asym(t: float) -> BoundedValue:
    """t/2 log(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3), radius THETA_C5 t^-5."""
    t = _require(t)
    lead = 0.5 * t * math.log(t / (2 * math.pi))
    value = lead - 0.5 * t - math.pi / 8 + 1.0 / (48 * t) + 7.0 / (5760 * t**3)
    rounding = 8 * EPS * (abs(lead) + 0.5 * t + 1.0)
    return BoundedValue(value, THETA_C5 * t**-5 + rounding)


def theta_ref(t: float) -> BoundedValue:
    """Im log Gamma(1/4 + it/2) - (t/2) log pi."""
    t = float(t)
    lg = log_gamma(complex(0.25, 0.5 * t))
    tail = 0.5 * t * _LOG_PI
    value = lg.value.imag - tail
    return BoundedValue(value, lg.radius + 4 * EPS * abs(tail))


def theta_prime(t: float) -> BoundedValue:
    """1/2 log(t/2pi) - 1/(48 t^2) with radius 0.07 t^-3 (t >= 6)."""
    t = _require(t)
    value = 0.5 * math.log(t / (2 * math.pi)) - 1.0 / (48 * t * t)
    return BoundedValue(value, V1_CONST * t**-3 + 4 * EPS * abs(value))


def theta_double_prime(t: float) -> BoundedValue:
    """1/(2t) with radius 0.46 t^-3 (t >= 6)."""
    t = _require(t)
    return BoundedValue(0.5 / t, V2_CONST * t**-3)


def theta_higher_bounds(t: float, order: int) -> float:
    """Envelope C3/t^2 for |theta'''| or C4/t^3 for |theta''''|."""
    t = _require(t)
    if order == 3:
        return ENVELOPE_C3 / t**2
    if order == 4:
        return ENVELOPE_C4 / t**3
    raise ValueError(f"order must be 3 or 4, got {order}")


@dataclass(frozen=True)
class ThetaEval:
    t: float
    theta: BoundedValue
    dtheta: BoundedValue
    d2theta: BoundedValue


def theta_eval(t: float) -> ThetaEval:
    """theta, theta', theta'' at t, switching to the reference path below SWITCH_T."""
    t = _require(t)
    th = theta_asym(t) if t >= SWITCH_T else theta_ref(t)
    return ThetaEval(t, th, theta_prime(t), theta_double_prime(t))


# ---------------------------------------------------------------------------
# Array hot paths
# ---------------------------------------------------------------------------

# theta = t/2 log(t/2pi) - t/2 - pi/8 + sum_k a_k t^{1-2k},
# a_k = (1 - 2^{1-2k}) |B_{2k}| / (4k(2k-1)).
_SERIES_TERMS = 8
_A = [float((1 - 2.0 ** (1 - 2 * k)) * abs(BERNOULLI.exact[k - 1]) / (4 * k * (2 * k - 1)))
      for k in range(1, _SERIES_TERMS + 1)]
_A_LD = [LD(a) for a in _A]


def _series_ld(t: np.ndarray) -> np.ndarray:
    inv2 = 1 / (t * t)
    acc = np.zeros_like(t)
    for a in reversed(_A_LD):
        acc = acc * inv2 + a
    return acc / t


def theta_ld(t) -> np.ndarray:
    """theta(t) in extended precision; reference path per element below SWITCH_T."""
    t = np.atleast_1d(np.asarray(t, dtype=LD))
    out = np.empty_like(t)
    big = t >= SWITCH_T
    if big.any():
        tb = t[big]
        out[big] = (tb / 2 * (np.log(tb) - LOG_TWO_PI_LD) - tb / 2 - PI_LD / 8
                    + _series_ld(tb))
    for i in np.flatnonzero(~big):
        out[i] = LD(theta_ref(float(t[i])).value)
    return out


def theta_prime_ld(t: np.ndarray) -> np.ndarray:
    """theta'(t) in extended precision from the asymptotic series (t >= SWITCH_T)."""
    t = np.asarray(t, dtype=LD)
    inv2 = 1 / (t * t)
    acc = np.zeros_like(t)
    for j in range(len(_A_LD), 0, -1):
        acc = acc * inv2 + (2 * j - 1) * _A_LD[j - 1]
    return (np.log(t) - LOG_TWO_PI_LD) / 2 - acc * inv2


def theta(t):
    """Production theta(t) as float (scalar in, scalar out)."""
    out = theta_ld(t).astype(float)
    return float(out[0]) if np.ndim(t) == 0 else out


def theta_derivative(t, k: int):
    """theta^{(k)}(t) for k = 1..4 as float; asymptotic series for t >= SWITCH_T,
    polygamma reference below."""
    if not 1 <= k <= 4:
        raise ValueError("derivative order must be in 1..4")
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    big = t >= SWITCH_T
    tb = t[big]
    if k == 1:
        val = 0.5 * np.log(tb / (2 * math.pi))
        for j, a in enumerate(_A, start=1):
            val -= (2 * j - 1) * a * tb ** (-2 * j)
    elif k == 2:
        val = 0.5 / tb
        for j, a in enumerate(_A, start=1):
            val += (2 * j - 1) * (2 * j) * a * tb ** (-2 * j - 1)
    elif k == 3:
        val = -0.5 / tb**2
        for j, a in enumerate(_A, start=1):
            val -= (2 * j - 1) * (2 * j) * (2 * j + 1) * a * tb ** (-2 * j - 2)
    else:
        val = 1.0 / tb**3
        for j, a in enumerate(_A, start=1):
            val += (2 * j - 1) * (2 * j) * (2 * j + 1) * (2 * j + 2) * a * tb ** (-2 * j - 3)
    out[big] = val
    for i in np.flatnonzero(~big):
        z = complex(0.25, 0.5 * t[i])
        if k == 1:
            out[i] = 0.5 * polygamma(0, z).real - 0.5 * _LOG_PI
        elif k == 2:
            out[i] = -0.25 * polygamma(1, z).imag
        elif k == 3:
            out[i] = -0.125 * polygamma(2, z).real
        else:
            out[i] = 0.0625 * polygamma(3, z).imag
    return float(out[0]) if scalar else out
