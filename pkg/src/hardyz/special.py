"""Special-function primitives with explicit remainder bounds.

Stirling-type log-Gamma and digamma carry a certified radius built from the
bound |P_m(x)| <= 4/(2pi)^m on the periodic Bernoulli functions.  The
Euler-Maclaurin zeta on the critical line is the reference oracle used by the
Z-function evaluators.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from ._numerics import EPS, LD, TWO_PI_LD, fsum_complex, log_int_ld, product_phase
from .errors import DomainError, RangeError

Number = Union[float, complex]

EULER_GAMMA = 0.57721566490153286061
ZETA_T_MAX = 5.0e4
SHIFT_TO = 10.0
DEFAULT_TERMS = 10


# ---------------------------------------------------------------------------
# BoundedValue
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundedValue:
    """A value together with an absolute error radius."""

    value: Number
    radius: float = 0.0

    def __post_init__(self) -> None:
        if not (self.radius >= 0.0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be finite and >= 0, got {self.radius!r}")

    @staticmethod
    def _coerce(other) -> "BoundedValue":
        if isinstance(other, BoundedValue):
            return other
        return BoundedValue(other, 0.0)

    def __add__(self, other):
        o = self._coerce(other)
        return BoundedValue(self.value + o.value, self.radius + o.radius)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return BoundedValue(self.value - o.value, self.radius + o.radius)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return BoundedValue(-self.value, self.radius)

    def __mul__(self, other):
        o = self._coerce(other)
        r = abs(self.value) * o.radius + abs(o.value) * self.radius + self.radius * o.radius
        return BoundedValue(self.value * o.value, r)

    __rmul__ = __mul__

    @property
    def real(self) -> "BoundedValue":
        return BoundedValue(complex(self.value).real, self.radius)

    @property
    def imag(self) -> "BoundedValue":
        return BoundedValue(complex(self.value).imag, self.radius)

    @property
    def lo(self) -> float:
        return float(self.value) - self.radius

    @property
    def hi(self) -> float:
        return float(self.value) + self.radius

    def contains(self, x: Number, slack: float = 0.0) -> bool:
        return abs(x - self.value) <= self.radius + slack


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------

class BernoulliTable:
    """Even-index Bernoulli numbers B_2, ..., B_{2k} from the exact recurrence."""

    def __init__(self, k: int = 30) -> None:
        b = [Fraction(1)]
        for n in range(1, 2 * k + 1):
            acc = Fraction(0)
            for j in range(n):
                acc += math.comb(n + 1, j) * b[j]
            b.append(-acc / (n + 1))
        self._exact = tuple(b[2 * r] for r in range(1, k + 1))
        self._values = tuple(float(x) for x in self._exact)

    def __len__(self) -> int:
        return len(self._values)

    @property
    def values(self) -> tuple:
        return self._values

    @property
    def exact(self) -> tuple:
        return self._exact

    def b2r(self, r: int) -> float:
        """B_{2r} for r >= 1."""
        if not 1 <= r <= len(self._values):
            raise IndexError(f"B_{2 * r} outside table of depth {len(self._values)}")
        return self._values[r - 1]


BERNOULLI = BernoulliTable(30)


# ---------------------------------------------------------------------------
# log Gamma and digamma
# ---------------------------------------------------------------------------

def _check_terms(n_terms: int) -> None:
    if not 1 <= n_terms <= len(BERNOULLI):
        raise ValueError(f"n_terms must be in 1..{len(BERNOULLI)}")


def _shift(z: complex, max_shift: int):
    """Shift z upward until Re z >= 0 and |z| >= SHIFT_TO; returns (z, k)."""
    k = 0
    while z.real < 0.0 or abs(z) < SHIFT_TO:
        if k >= max_shift:
            break
        z += 1.0
        k += 1
    return z, k


def loggamma_remainder_bound(n: int, r: float) -> float:
    """Bound on (2n)! |int P_{2n+1}(x)/(x+z)^{2n+1} dx| for Re z >= 0, |z| = r.

    Uses |x+z|^2 >= x^2 + |z|^2 and int_0^inf (x^2+1)^{-(n+1/2)} dx
    = sqrt(pi) Gamma(n) / (2 Gamma(n+1/2)).
    """
    beta = math.sqrt(math.pi) * math.gamma(n) / (2.0 * math.gamma(n + 0.5))
    return math.factorial(2 * n) * 4.0 / (2 * math.pi) ** (2 * n + 1) * beta * r ** (-2 * n)


def digamma_remainder_bound(n: int, r: float) -> float:
    """(2n+1)! * 4/(2pi)^{2n+1} * (pi/2)(2n-1)!!/(2n)!! * r^{-2n-1}.

    For n = 1 this is exactly 3/(4 pi^2) r^{-3}.
    """
    ratio = 1.0
    for j in range(1, n + 1):
        ratio *= (2 * j - 1) / (2 * j)
    return (math.factorial(2 * n + 1) * 4.0 / (2 * math.pi) ** (2 * n + 1)
            * (math.pi / 2) * ratio * r ** (-2 * n - 1))


def log_gamma(z: Number, n_terms: int = DEFAULT_TERMS, max_shift: int = 64) -> BoundedValue:
    """Principal-branch log Gamma(z) by the Stirling series with certified radius.

    Arguments with small modulus or negative real part are shifted up by the
    recurrence Gamma(z+1) = z Gamma(z) before the series is applied.
    """
    _check_terms(n_terms)
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0:
        raise DomainError(f"log_gamma undefined on the non-positive real axis: {z}")
    w, k = _shift(z, max_shift)
    if abs(w) < 1.0 or w.real < 0.0:
        raise DomainError(f"shift budget exhausted for z={z}")
    shift_sum = 0j
    shift_mag = 0.0
    for j in range(k):
        lj = cmath.log(z + j)
        shift_sum += lj
        shift_mag += abs(lj)

    logw = cmath.log(w)
    lead = (w - 0.5) * logw - w + 0.5 * math.log(2 * math.pi)
    series = 0j
    winv2 = 1.0 / (w * w)
    power = 1.0 / w
    for r in range(1, n_terms + 1):
        series += BERNOULLI.b2r(r) / (2 * r * (2 * r - 1)) * power
        power *= winv2
    value = lead + series - shift_sum
    rounding = 8 * EPS * (abs(w - 0.5) * abs(logw) + abs(w) + 1.0 + shift_mag)
    radius = loggamma_remainder_bound(n_terms, abs(w)) + rounding
    return BoundedValue(value, radius)


def digamma(z: Number, n_terms: int = DEFAULT_TERMS, max_shift: int = 64) -> BoundedValue:
    """psi(z) = log z - 1/(2z) - sum B_{2r}/(2r) z^{-2r} with certified radius."""
    _check_terms(n_terms)
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0:
        raise DomainError(f"digamma undefined for real z <= 0: {z}")
    w, k = _shift(z, max_shift)
    if abs(w) < 1.0 or w.real < 0.0:
        raise DomainError(f"shift budget exhausted for z={z}")
    shift_sum = 0j
    shift_mag = 0.0
    for j in range(k):
        term = 1.0 / (z + j)
        shift_sum += term
        shift_mag += abs(term)

    logw = cmath.log(w)
    series = 0j
    winv2 = 1.0 / (w * w)
    power = winv2
    for r in range(1, n_terms + 1):
        series += BERNOULLI.b2r(r) / (2 * r) * power
        power *= winv2
    value = logw - 0.5 / w - series - shift_sum
    rounding = 8 * EPS * (abs(logw) + 1.0 + shift_mag)
    radius = digamma_remainder_bound(n_terms, abs(w)) + rounding
    return BoundedValue(value, radius)


def polygamma(k: int, z: Number) -> complex:
    """psi^{(k)}(z) for k = 0..4 by the shifted asymptotic series (no radius).

    Accurate to a few ulps for Re z > 0 or |Im z| >= 1; used for the
    derivative slow paths of theta.
    """
    if k == 0:
        return complex(digamma(z).value)
    if not 1 <= k <= 4:
        raise ValueError("polygamma order must be in 0..4")
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0:
        raise DomainError(f"polygamma undefined for real z <= 0: {z}")
    sign = -1.0 if k % 2 == 0 else 1.0   # (-1)^{k+1}
    fk = math.factorial(k)
    acc = 0j
    while z.real < 0.0 or abs(z) < 20.0:
        acc += sign * fk / z ** (k + 1)
        z += 1.0
    series = math.factorial(k - 1) / z ** k + fk / (2 * z ** (k + 1))
    for j in range(1, 16):
        series += (BERNOULLI.b2r(j) * math.factorial(2 * j + k - 1)
                   / math.factorial(2 * j) / z ** (2 * j + k))
    return sign * series + acc


# ---------------------------------------------------------------------------
# zeta(1/2 + it) reference oracle
# ---------------------------------------------------------------------------

def zeta_euler_maclaurin(t: float, M: int | None = None) -> complex:
    """zeta(1/2 + it) by Euler-Maclaurin summation with cutoff M.

    Phases n^{-it} are reduced in extended precision and the main sum is
    accumulated with math.fsum, so the result is limited by the ~1e-16
    accuracy of individual terms rather than by the summation.
    """
    t = float(t)
    if abs(t) > ZETA_T_MAX:
        raise RangeError(f"|t|={abs(t)} exceeds the oracle ceiling {ZETA_T_MAX}")
    floor_m = max(20, 2 * math.ceil(abs(t)))
    if M is None:
        M = floor_m
    if M < floor_m:
        raise ValueError(f"cutoff M={M} below max(20, 2*ceil|t|)={floor_m}")
    s = complex(0.5, t)

    logs = log_int_ld(M)
    n = np.arange(1, M, dtype=float)
    phase = product_phase(t, logs[: M - 1])
    amp = 1.0 / np.sqrt(n)
    main = fsum_complex(amp * np.exp(-1j * phase))

    log_m = logs[M - 1]
    ph_m = float(np.asarray(t * log_m, dtype=LD) % TWO_PI_LD)
    m_pow_s = math.sqrt(M) * cmath.exp(1j * ph_m)       # M^{s} = M^{1/2} e^{it log M}
    m_neg_s = 1.0 / m_pow_s
    tail = M / m_pow_s / (s - 1.0) + 0.5 * m_neg_s

    poch = s
    power = m_neg_s / M
    for k in range(1, len(BERNOULLI) + 1):
        term = BERNOULLI.b2r(k) / math.factorial(2 * k) * poch * power
        tail += term
        if abs(term) < 1e-19:
            break
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        power /= M * M
    return main + tail
