"""Low-level numerics: extended-precision phase reduction and compensated sums."""
from __future__ import annotations

import math

import numpy as np

LD = np.longdouble
PI_LD = LD("3.14159265358979323846264338327950288")
TWO_PI_LD = 2 * PI_LD
LOG_PI_LD = LD("1.14472988584940017414342735135305871")
LOG_TWO_PI_LD = LD("1.83787706640934548356065947281123527")

EPS = np.finfo(float).eps

_LOG_CACHE = np.log(np.arange(1, 2, dtype=LD))


def log_int_ld(m_max: int) -> np.ndarray:
    """Extended-precision log(m) for m = 1..m_max (index 0 holds log 1)."""
    global _LOG_CACHE
    if _LOG_CACHE.size < m_max:
        size = max(m_max, 2 * _LOG_CACHE.size)
        _LOG_CACHE = np.log(np.arange(1, size + 1, dtype=LD))
    return _LOG_CACHE[:m_max]


def reduce_mod_2pi(phase) -> np.ndarray:
    """Reduce an extended-precision phase to [-pi, pi] and return float64."""
    phase = np.asarray(phase, dtype=LD)
    k = np.rint(phase / TWO_PI_LD)
    return (phase - k * TWO_PI_LD).astype(float)


def product_phase(t, log_m) -> np.ndarray:
    """t*log(m) reduced mod 2pi, formed in extended precision."""
    return reduce_mod_2pi(np.asarray(t, dtype=LD) * np.asarray(log_m, dtype=LD))


def neumaier_step(s, c, x):
    """One vectorised Neumaier update; returns the new (sum, compensation)."""
    t = s + x
    big = np.abs(s) >= np.abs(x)
    c = c + np.where(big, (s - t) + x, (x - t) + s)
    return t, c


def fsum_complex(values) -> complex:
    values = np.asarray(values)
    return complex(math.fsum(values.real), math.fsum(values.imag))


class Neumaier:
    """Scalar compensated accumulator with a fixed, order-defined result."""

    __slots__ = ("s", "c")

    def __init__(self) -> None:
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c
