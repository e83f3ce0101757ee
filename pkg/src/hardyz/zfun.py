"""Evaluators of Hardy's function Z(t).

* ``reference``    Re(e^{i theta(t)} zeta(1/2+it)) from the Euler-Maclaurin oracle.
* ``rs_main``      2 sum_{m <= sqrt(t/2pi)} m^{-1/2} cos(theta(t) - t log m).
* ``rs_corrected`` the main sum plus Riemann-Siegel correction terms C_0..C_k.
* ``afe_smooth``   2 sum_m m^{-1/2} rho(m sqrt(2pi/t)) cos(theta(t) - t log m).

All cosine sums go through one kernel that loops over m and accumulates each
point with a Neumaier compensated sum, so a point's value is independent of
how the points are batched.  Phases t log m and theta(t) are reduced mod 2pi
in extended precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from . import calibration
from ._numerics import LD, log_int_ld, neumaier_step, reduce_mod_2pi
from .errors import ConsistencyError, DomainError, RangeError
from .gram import gram_point
from .special import zeta_euler_maclaurin
from .theta import theta_ld
from .weight import rho_fast

METHODS = ("rs_main", "rs_corrected", "afe_smooth", "reference")
Z_REFERENCE_T_MAX = 2.0e4
REFERENCE_ERROR = 1e-9
IMAG_TOL = 1e-8
T_MIN = 20.0
# The Riemann-Siegel main sum is non-empty from t = 2pi; Gram evaluations use
# this floor so that g(0) ~ 17.85 is reachable.
GRAM_T_MIN = 2 * math.pi


@dataclass(frozen=True)
class ZSample:
    t: float
    z: float
    method: str
    est_error: float
    n: Optional[int] = None
    im_zeta: Optional[float] = None


# ---------------------------------------------------------------------------
# Riemann-Siegel correction coefficients
# ---------------------------------------------------------------------------

def _psi_taylor(n_coef: int = 64, radius: float = 1.0, n_fft: int = 256) -> np.ndarray:
    """Taylor coefficients in w of Psi(1/2 + w) = cos(2pi(p^2 - p - 1/16)) / cos(2pi p).

    Psi is entire, so the coefficients come from a Cauchy integral on |w| = radius
    evaluated by FFT; the removable singularities on the real axis are never touched.
    """
    w = radius * np.exp(2j * np.pi * np.arange(n_fft) / n_fft)
    p = 0.5 + w
    vals = np.cos(2 * np.pi * (p * p - p - 1.0 / 16)) / np.cos(2 * np.pi * p)
    coef = np.fft.fft(vals) / n_fft
    coef = coef[:n_coef].real / radius ** np.arange(n_coef)
    coef[1::2] = 0.0   # Psi(1/2 + w) is even in w
    return coef


_PSI = _psi_taylor()
_PSI_D = {j: P.polyder(_PSI, j) if j else _PSI for j in (0, 2, 3, 6)}


def psi_derivative(p, j: int):
    """j-th derivative of Psi at p (j in 0, 2, 3, 6)."""
    return P.polyval(np.asarray(p, dtype=float) - 0.5, _PSI_D[j])


def rs_coefficients(p, order: int) -> list:
    """[C_0(p), ..., C_order(p)] for order <= 2."""
    if not 0 <= order <= 2:
        raise ValueError("Riemann-Siegel order must be 0, 1 or 2")
    pi2 = math.pi**2
    out = [psi_derivative(p, 0)]
    if order >= 1:
        out.append(-psi_derivative(p, 3) / (96 * pi2))
    if order >= 2:
        out.append(psi_derivative(p, 2) / (64 * pi2) + psi_derivative(p, 6) / (18432 * pi2**2))
    return out


# ---------------------------------------------------------------------------
# Cosine-sum kernel
# ---------------------------------------------------------------------------

def cosine_sum(t, base_phase, m_hi, weight=None) -> np.ndarray:
    """sum_{m=1}^{m_hi[i]} m^{-1/2} w_m(t_i) cos(base_phase[i] - t_i log m) per point.

    ``weight`` maps (m, t) to the extra factor (None means 1).  Terms beyond
    m_hi[i] add an exact zero to the point's accumulator.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    base = np.atleast_1d(np.asarray(base_phase, dtype=float))
    m_hi = np.atleast_1d(np.asarray(m_hi, dtype=np.int64))
    s = np.zeros_like(t)
    c = np.zeros_like(t)
    m_max = int(m_hi.max(initial=0))
    if m_max == 0:
        return s
    t_ld = t.astype(LD)
    logs = log_int_ld(m_max)
    for m in range(1, m_max + 1):
        live = m_hi >= m
        ph = reduce_mod_2pi(t_ld * logs[m - 1])
        term = np.cos(base - ph) / math.sqrt(m)
        if weight is not None:
            term = term * weight(m, t)
        s, c = neumaier_step(s, c, np.where(live, term, 0.0))
    return s + c


def _tau(t: np.ndarray) -> np.ndarray:
    return np.sqrt(t / (2 * math.pi))


def _theta_mod(t: np.ndarray) -> np.ndarray:
    return reduce_mod_2pi(theta_ld(t))


def _afe_weight(m: int, t: np.ndarray) -> np.ndarray:
    return rho_fast(m * np.sqrt(2 * math.pi / t))


def _check_t(t: np.ndarray, floor: float = T_MIN) -> None:
    if np.any(t < floor):
        raise DomainError(f"evaluator requires t >= {floor}")


def rs_remainder(t, order: int) -> np.ndarray:
    """(-1)^{N-1} tau^{-1/2} sum_k C_k(p) tau^{-k}, tau = sqrt(t/2pi), N = floor(tau)."""
    tau = _tau(np.asarray(t, dtype=float))
    n = np.floor(tau)
    p = tau - n
    coeffs = rs_coefficients(p, order)
    acc = np.zeros_like(tau)
    for k in range(order, -1, -1):
        acc = acc / tau + coeffs[k]
    sign = np.where(n.astype(np.int64) % 2 == 1, 1.0, -1.0)
    return sign * acc / np.sqrt(tau)


# ---------------------------------------------------------------------------
# Array evaluators
# ---------------------------------------------------------------------------

def z_rs_main_array(t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    _check_t(t)
    return 2.0 * cosine_sum(t, _theta_mod(t), np.floor(_tau(t)))


def z_rs_corrected_array(t, order: int = 1) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return z_rs_main_array(t) + rs_remainder(t, order)


def z_afe_smooth_array(t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    _check_t(t)
    return 2.0 * cosine_sum(t, _theta_mod(t), np.floor(2 * _tau(t)), _afe_weight)


def z_gram_array(n, t, method: str = "rs_corrected", order: int = 1) -> np.ndarray:
    """Z(g(n)) at Gram abscissas t = g(n), using theta(g(n)) = pi n exactly:
    cos(pi n - t log m) = (-1)^n cos(t log m)."""
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    zero = np.zeros_like(t)
    if method in ("rs_main", "rs_corrected"):
        _check_t(t, GRAM_T_MIN)
        main = 2.0 * sign * cosine_sum(t, zero, np.floor(_tau(t)))
        if method == "rs_main":
            return main
        return main + rs_remainder(t, order)
    if method == "afe_smooth":
        _check_t(t, GRAM_T_MIN)
        return 2.0 * sign * cosine_sum(t, zero, np.floor(2 * _tau(t)), _afe_weight)
    if method == "reference":
        return np.array([z_reference(x).z for x in t])
    raise ValueError(f"unknown method {method!r}")


def est_error(t, method: str, order: int = 1):
    """Documented error envelope of an evaluator at t."""
    t = np.asarray(t, dtype=float)
    if method == "reference":
        return np.full_like(t, REFERENCE_ERROR) if t.ndim else REFERENCE_ERROR
    if method == "rs_main":
        return calibration.get("c_rs") * t ** -0.25
    if method == "rs_corrected":
        return calibration.get(f"c_rs{order}") * t ** (-(2 * order + 3) / 4)
    if method == "afe_smooth":
        return calibration.get("c_afe") * t ** (-5.0 / 6.0)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Scalar evaluators
# ---------------------------------------------------------------------------

def z_reference(t: float) -> ZSample:
    t = float(t)
    if abs(t) > Z_REFERENCE_T_MAX:
        raise RangeError(f"|t|={abs(t)} beyond the reference ceiling {Z_REFERENCE_T_MAX}")
    zeta = zeta_euler_maclaurin(t)
    th = float(reduce_mod_2pi(theta_ld(t))[0])
    z = complex(math.cos(th), math.sin(th)) * zeta
    if abs(z.imag) > IMAG_TOL:
        raise ConsistencyError(f"Im Z({t}) = {z.imag:.3e} exceeds {IMAG_TOL}")
    return ZSample(t, z.real, "reference", REFERENCE_ERROR)


def z_rs_main(t: float) -> ZSample:
    return ZSample(float(t), float(z_rs_main_array([t])[0]), "rs_main", float(est_error(t, "rs_main")))


def z_rs_corrected(t: float, order: int = 1) -> ZSample:
    z = float(z_rs_corrected_array([t], order)[0])
    return ZSample(float(t), z, "rs_corrected", float(est_error(t, "rs_corrected", order)))


def z_afe_smooth(t: float) -> ZSample:
    z = float(z_afe_smooth_array([t])[0])
    return ZSample(float(t), z, "afe_smooth", float(est_error(t, "afe_smooth")))


def afe_term_count(t: float) -> int:
    """Number of nonzero terms in the smooth sum at t."""
    tau = math.sqrt(t / (2 * math.pi))
    m = np.arange(1, int(2 * tau) + 1)
    return int(np.count_nonzero(rho_fast(m / tau)))


def z_at_gram(n: int, method: str = "rs_corrected", order: int = 1) -> ZSample:
    """Z(g(n)); also reports Im zeta(1/2 + i g(n)) when the reference is in range."""
    n = int(n)
    if n < -1:
        raise DomainError("Gram index must be >= -1")
    t = gram_point(n).t
    im_zeta = None
    if t <= Z_REFERENCE_T_MAX:
        im_zeta = zeta_euler_maclaurin(t).imag
    if method == "reference":
        z, err = z_reference(t).z, REFERENCE_ERROR
    else:
        z = float(z_gram_array([n], [t], method, order)[0])
        err = float(est_error(t, method, order))
    return ZSample(t, z, method, err, n=n, im_zeta=im_zeta)
